//! Exact arithmetic in cyclotomic fields `Q(zeta_n)`.
//!
//! Elements are stored on the power basis `1, zeta, ..., zeta^(phi(n)-1)`
//! modulo the n-th cyclotomic polynomial. Mixed-conductor operations promote
//! both operands to the least common multiple; nothing is demoted silently,
//! use [`CyclotomicNumber::descend`] to move into a smaller field explicitly.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Euler totient of `n`.
pub fn phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Exponents `k` with `1 <= k < n` and `gcd(k, n) = 1`, ascending.
///
/// For `n = 1` this is `[0]`: the unit group of `Z/1` is trivial.
pub fn units_mod(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|k| num_integer::gcd(*k, n) == 1).collect()
}

/// Modular inverse of `k` in `(Z/n)^*`. Panics if `gcd(k, n) != 1`.
pub fn inverse_mod(k: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (k as i128, n as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        let (nr, ns) = (old_r - q * r, old_s - q * s);
        old_r = r;
        old_s = s;
        r = nr;
        s = ns;
    }
    assert!(old_r == 1, "element not invertible modulo n");
    old_s.rem_euclid(n as i128) as u64
}

/// Coefficients of the n-th cyclotomic polynomial, ascending degree, monic.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    // x^n - 1 divided by the cyclotomic polynomials of all proper divisors.
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = -BigInt::one();
    poly[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            poly = integer_poly_div_exact(&poly, &phi_d);
        }
    }
    poly
}

fn integer_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for i in (dd..=dn).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            let idx = i - dd + j;
            rem[idx] = &rem[idx] - &c * dj;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division not exact");
    quot
}

/// An element of `Q(zeta_n)` on the power basis modulo `Phi_n`.
#[derive(Clone, Debug)]
pub struct CyclotomicNumber {
    conductor: u64,
    coords: Vec<Rational>,
}

impl CyclotomicNumber {
    /// Zero in `Q(zeta_n)`.
    pub fn zero(conductor: u64) -> Self {
        CyclotomicNumber {
            conductor,
            coords: vec![Rational::zero(); phi(conductor) as usize],
        }
    }

    /// One in `Q(zeta_n)`.
    pub fn one(conductor: u64) -> Self {
        Self::from_rational_at(conductor, Rational::one())
    }

    /// The rational `r` viewed in `Q(zeta_n)`.
    pub fn from_rational_at(conductor: u64, r: Rational) -> Self {
        let mut z = Self::zero(conductor);
        z.coords[0] = r;
        z
    }

    /// The rational `r` viewed in `Q` (conductor 1).
    pub fn from_rational(r: Rational) -> Self {
        Self::from_rational_at(1, r)
    }

    /// `zeta_n^k`.
    pub fn root_of_unity(conductor: u64, k: u64) -> Self {
        let mut poly = vec![Rational::zero(); conductor as usize];
        poly[(k % conductor) as usize] = Rational::one();
        Self::from_poly(conductor, poly)
    }

    /// Builds an element from arbitrary-degree polynomial coefficients in
    /// `zeta_n`, reducing modulo `Phi_n`.
    pub fn from_poly(conductor: u64, coeffs: Vec<Rational>) -> Self {
        let d = phi(conductor) as usize;
        let modulus = cyclotomic_polynomial(conductor);
        let mut c = coeffs;
        if c.len() < d {
            c.resize(d, Rational::zero());
        }
        for i in (d..c.len()).rev() {
            if c[i].is_zero() {
                continue;
            }
            let lead = core::mem::replace(&mut c[i], Rational::zero());
            for (j, mj) in modulus.iter().enumerate().take(d) {
                if !mj.is_zero() {
                    let delta = &lead * Rational::from_integer(mj.clone());
                    c[i - d + j] -= delta;
                }
            }
        }
        c.truncate(d);
        CyclotomicNumber {
            conductor,
            coords: c,
        }
    }

    /// The conductor `n` of the ambient field `Q(zeta_n)`.
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Power-basis coordinates, length `phi(n)`.
    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// True iff the element is zero.
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// True iff the element lies in `Q` (as represented).
    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(|c| c.is_zero())
    }

    /// The element as a rational if it lies in `Q`, else `None`.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses the element in `Q(zeta_m)` for a multiple `m` of the
    /// conductor, via `zeta_n = zeta_m^(m/n)`.
    pub fn promote(&self, m: u64) -> Self {
        assert!(m % self.conductor == 0, "can only promote to a multiple");
        if m == self.conductor {
            return self.clone();
        }
        let step = (m / self.conductor) as usize;
        let mut poly = vec![Rational::zero(); m as usize];
        for (j, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                poly[j * step] = c.clone();
            }
        }
        Self::from_poly(m, poly)
    }

    /// Attempts to rewrite the element in `Q(zeta_t)` for a divisor `t` of
    /// the conductor. Returns `None` when the element does not lie there.
    pub fn descend(&self, target: u64) -> Option<Self> {
        assert!(
            self.conductor % target == 0,
            "can only descend to a divisor"
        );
        if target == self.conductor {
            return Some(self.clone());
        }
        let dt = phi(target) as usize;
        let dn = phi(self.conductor) as usize;
        // Columns: promoted power basis of Q(zeta_t); solve for coordinates.
        let mut cols = Vec::with_capacity(dt);
        for j in 0..dt {
            let b = Self::root_of_unity(target, j as u64).promote(self.conductor);
            cols.push(b.coords);
        }
        let sol = solve_rational(dn, dt, |r, c| cols[c][r].clone(), |r| {
            self.coords[r].clone()
        })?;
        Some(CyclotomicNumber {
            conductor: target,
            coords: sol,
        })
    }

    /// Addition with automatic promotion to the lcm of the conductors.
    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = promote_pair(self, other);
        let coords = a
            .coords
            .iter()
            .zip(b.coords.iter())
            .map(|(x, y)| x + y)
            .collect();
        CyclotomicNumber {
            conductor: a.conductor,
            coords,
        }
    }

    /// Subtraction with automatic promotion.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        CyclotomicNumber {
            conductor: self.conductor,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// Multiplication with automatic promotion.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = promote_pair(self, other);
        let d = a.coords.len();
        let mut poly = vec![Rational::zero(); 2 * d];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        Self::from_poly(a.conductor, poly)
    }

    /// Multiplication by a rational scalar.
    pub fn scale(&self, r: &Rational) -> Self {
        CyclotomicNumber {
            conductor: self.conductor,
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse. Returns `None` for zero.
    ///
    /// Computed by the extended Euclidean algorithm against `Phi_n`, which is
    /// irreducible over `Q`, so every nonzero element is invertible.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.to_rational() {
            return Some(Self::from_rational_at(self.conductor, r.recip()));
        }
        let modulus: Vec<Rational> = cyclotomic_polynomial(self.conductor)
            .into_iter()
            .map(Rational::from_integer)
            .collect();
        let (g, u) = poly_half_xgcd(&self.coords, &modulus);
        // g is a nonzero constant: normalize u by it.
        assert!(g.len() == 1 && !g[0].is_zero(), "gcd with Phi_n not constant");
        let ginv = g[0].recip();
        let coords = u.into_iter().map(|c| c * &ginv).collect();
        Some(Self::from_poly(self.conductor, coords))
    }

    /// Applies the Galois automorphism `zeta -> zeta^k`.
    pub fn galois(&self, k: u64) -> Self {
        let n = self.conductor;
        if n == 1 {
            return self.clone();
        }
        assert!(num_integer::gcd(k, n) == 1, "exponent not coprime to conductor");
        let mut poly = vec![Rational::zero(); n as usize];
        for (j, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                let idx = ((j as u64 * k) % n) as usize;
                poly[idx] += c;
            }
        }
        Self::from_poly(n, poly)
    }

    /// Max absolute numerator/denominator over the coordinates, a crude
    /// height used to order search candidates.
    pub fn height(&self) -> BigInt {
        let mut h = BigInt::zero();
        for c in &self.coords {
            let a = c.numer().abs();
            if a > h {
                h = a;
            }
            let b = c.denom().abs();
            if b > h {
                h = b;
            }
        }
        h
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = promote_pair(self, other);
        a.coords == b.coords
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if j == 0 {
                write!(f, "{}", c)?;
            } else {
                write!(f, "({})*z{}^{}", c, self.conductor, j)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn promote_pair(a: &CyclotomicNumber, b: &CyclotomicNumber) -> (CyclotomicNumber, CyclotomicNumber) {
    if a.conductor == b.conductor {
        return (a.clone(), b.clone());
    }
    let m = num_integer::lcm(a.conductor, b.conductor);
    (a.promote(m), b.promote(m))
}

/// Promotes a slice of elements to a common conductor and returns it.
pub fn common_conductor(values: &[CyclotomicNumber]) -> u64 {
    values
        .iter()
        .fold(1u64, |m, v| num_integer::lcm(m, v.conductor()))
}

// Polynomial helpers over Q, coefficients ascending, trailing zeros allowed.

fn poly_trim(p: &mut Vec<Rational>) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn poly_is_zero(p: &[Rational]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn poly_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem: Vec<Rational> = num.to_vec();
    poly_trim(&mut rem);
    let mut d: Vec<Rational> = den.to_vec();
    poly_trim(&mut d);
    assert!(!poly_is_zero(&d), "division by zero polynomial");
    let dd = d.len() - 1;
    if rem.len() - 1 < dd || poly_is_zero(&rem) {
        return (vec![Rational::zero()], rem);
    }
    let lead_inv = d[dd].recip();
    let mut quot = vec![Rational::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let c = &rem[i] * &lead_inv;
        quot[i - dd] = c.clone();
        for (j, dj) in d.iter().enumerate() {
            let delta = &c * dj;
            rem[i - dd + j] -= delta;
        }
    }
    poly_trim(&mut rem);
    poly_trim(&mut quot);
    (quot, rem)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); core::cmp::max(a.len(), b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    poly_trim(&mut out);
    out
}

/// Returns `(gcd, u)` with `u * a = gcd (mod m)`.
fn poly_half_xgcd(a: &[Rational], m: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r0: Vec<Rational> = m.to_vec();
    let mut r1: Vec<Rational> = a.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    let mut u0 = vec![Rational::zero()];
    let mut u1 = vec![Rational::one()];
    while !poly_is_zero(&r1) {
        let (q, r) = poly_divmod(&r0, &r1);
        let nu = poly_sub(&u0, &poly_mul(&q, &u1));
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = nu;
    }
    (r0, u0)
}

fn solve_rational<FA, FB>(rows: usize, cols: usize, a: FA, b: FB) -> Option<Vec<Rational>>
where
    FA: Fn(usize, usize) -> Rational,
    FB: Fn(usize) -> Rational,
{
    // Dense Gauss-Jordan over Q; used only for small descend systems.
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = (0..cols).map(|c| a(r, c)).collect();
            row.push(b(r));
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let piv = (row..rows).find(|&r| !m[r][col].is_zero());
        let Some(piv) = piv else { continue };
        m.swap(row, piv);
        let inv = m[row][col].recip();
        for c in col..=cols {
            m[row][c] = &m[row][c] * &inv;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=cols {
                    let delta = &f * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    for r in row..rows {
        if !m[r][cols].is_zero() {
            return None;
        }
    }
    let mut sol = vec![Rational::zero(); cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        sol[c] = m[i][cols].clone();
    }
    Some(sol)
}

/// A Galois automorphism `sigma_k : zeta_n -> zeta_n^k` of `Q(zeta_n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GaloisElement {
    conductor: u64,
    exponent: u64,
}

impl GaloisElement {
    /// Builds `sigma_k` on `Q(zeta_n)`. Panics unless `gcd(k, n) = 1`.
    pub fn new(conductor: u64, exponent: u64) -> Self {
        let e = if conductor == 1 { 0 } else { exponent % conductor };
        if conductor > 1 {
            assert!(
                num_integer::gcd(e, conductor) == 1,
                "exponent not coprime to conductor"
            );
        }
        GaloisElement {
            conductor,
            exponent: e,
        }
    }

    /// The identity automorphism.
    pub fn identity(conductor: u64) -> Self {
        Self::new(conductor, 1)
    }

    /// The conductor of the field acted on.
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// The exponent `k` of `sigma_k`.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// True iff this is the identity automorphism.
    pub fn is_identity(&self) -> bool {
        self.conductor == 1 || self.exponent == 1
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        assert!(self.conductor == other.conductor, "conductor mismatch");
        if self.conductor == 1 {
            return *self;
        }
        Self::new(
            self.conductor,
            (self.exponent as u128 * other.exponent as u128 % self.conductor as u128) as u64,
        )
    }

    /// The inverse automorphism.
    pub fn inverse(&self) -> Self {
        if self.conductor == 1 {
            return *self;
        }
        Self::new(self.conductor, inverse_mod(self.exponent, self.conductor))
    }

    /// Order of the automorphism in the Galois group.
    pub fn order(&self) -> u64 {
        if self.is_identity() {
            return 1;
        }
        let mut k = self.exponent;
        let mut ord = 1;
        while k != 1 {
            k = (k as u128 * self.exponent as u128 % self.conductor as u128) as u64;
            ord += 1;
        }
        ord
    }

    /// Applies the automorphism. Panics when the element's conductor does not
    /// divide this automorphism's conductor.
    pub fn apply(&self, x: &CyclotomicNumber) -> CyclotomicNumber {
        assert!(
            self.conductor % x.conductor() == 0,
            "element conductor must divide automorphism conductor"
        );
        if x.conductor() == 1 {
            return x.clone();
        }
        x.galois(self.exponent % x.conductor())
    }
}

/// A subfield of `Q(zeta_n)` described by its stabilizer in `(Z/n)^*` and a
/// `Q`-basis of orbit sums.
#[derive(Clone, Debug)]
pub struct SubfieldDescriptor {
    conductor: u64,
    stabilizer: Vec<u64>,
    basis: Vec<CyclotomicNumber>,
}

impl SubfieldDescriptor {
    /// The fixed field of the subgroup of `(Z/n)^*` generated by `gens`.
    pub fn fixed_field(conductor: u64, gens: &[u64]) -> Self {
        let stabilizer = subgroup_closure(conductor, gens);
        let degree = (phi(conductor) as usize) / stabilizer.len();
        // Orbit sums over exponents 0..n-1; echelon-select a Q-basis.
        let mut seen = BTreeSet::new();
        let mut basis: Vec<CyclotomicNumber> = Vec::new();
        let mut echelon: Vec<Vec<Rational>> = Vec::new();
        for j in 0..conductor {
            if seen.contains(&j) {
                continue;
            }
            let mut orbit = BTreeSet::new();
            for k in &stabilizer {
                orbit.insert((j as u128 * *k as u128 % conductor as u128) as u64);
            }
            for o in &orbit {
                seen.insert(*o);
            }
            let mut sum = CyclotomicNumber::zero(conductor);
            for o in &orbit {
                sum = sum.add(&CyclotomicNumber::root_of_unity(conductor, *o));
            }
            if echelon_try_insert(&mut echelon, sum.coords().to_vec()) {
                basis.push(sum);
                if basis.len() == degree {
                    break;
                }
            }
        }
        assert!(basis.len() == degree, "orbit sums failed to span subfield");
        SubfieldDescriptor {
            conductor,
            stabilizer,
            basis,
        }
    }

    /// The whole field `Q(zeta_n)` as a descriptor (trivial stabilizer).
    pub fn whole_field(conductor: u64) -> Self {
        Self::fixed_field(conductor, &[])
    }

    /// `Q` as a subfield of `Q(zeta_n)` (full stabilizer).
    pub fn rationals_in(conductor: u64) -> Self {
        let gens = units_mod(conductor);
        Self::fixed_field(conductor, &gens)
    }

    /// Conductor of the ambient cyclotomic field.
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// The stabilizer subgroup, sorted ascending, always containing 1.
    pub fn stabilizer(&self) -> &[u64] {
        &self.stabilizer
    }

    /// Degree of the subfield over `Q`.
    pub fn degree(&self) -> usize {
        self.basis.len()
    }

    /// The selected orbit-sum basis.
    pub fn basis(&self) -> &[CyclotomicNumber] {
        &self.basis
    }

    /// True iff `x` is fixed by the stabilizer (after promotion).
    pub fn contains(&self, x: &CyclotomicNumber) -> bool {
        let v = x.promote_to(self.conductor);
        let Some(v) = v else { return false };
        self.stabilizer
            .iter()
            .all(|k| GaloisElement::new(self.conductor, *k).apply(&v) == v)
    }

    /// Coordinates of `x` on the orbit-sum basis, if `x` lies in the subfield.
    pub fn express(&self, x: &CyclotomicNumber) -> Option<Vec<Rational>> {
        let v = x.promote_to(self.conductor)?;
        let d = phi(self.conductor) as usize;
        solve_rational(
            d,
            self.basis.len(),
            |r, c| self.basis[c].coords()[r].clone(),
            |r| v.coords()[r].clone(),
        )
    }
}

impl CyclotomicNumber {
    /// Promotes to conductor `m` when the current conductor divides `m`,
    /// otherwise returns `None`.
    pub fn promote_to(&self, m: u64) -> Option<Self> {
        if m % self.conductor == 0 {
            Some(self.promote(m))
        } else {
            None
        }
    }
}

/// Closure of `gens` (plus 1) as a subgroup of `(Z/n)^*`, sorted.
pub fn subgroup_closure(n: u64, gens: &[u64]) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    let mut set = BTreeSet::new();
    set.insert(1u64);
    let mut frontier = vec![1u64];
    while let Some(g) = frontier.pop() {
        for k in gens {
            assert!(num_integer::gcd(*k % n, n) == 1, "generator not a unit");
            let m = (g as u128 * *k as u128 % n as u128) as u64;
            if set.insert(m) {
                frontier.push(m);
            }
        }
    }
    set.into_iter().collect()
}

fn echelon_try_insert(echelon: &mut Vec<Vec<Rational>>, mut v: Vec<Rational>) -> bool {
    // Rows kept reduced with leading coefficient 1; returns false when v is
    // dependent on the existing rows.
    for row in echelon.iter() {
        let lead = row.iter().position(|c| !c.is_zero()).unwrap();
        if !v[lead].is_zero() {
            let f = v[lead].clone();
            for (i, r) in row.iter().enumerate() {
                let delta = &f * r;
                v[i] -= delta;
            }
        }
    }
    if let Some(lead) = v.iter().position(|c| !c.is_zero()) {
        let inv = v[lead].recip();
        for c in v.iter_mut() {
            *c = &*c * &inv;
        }
        echelon.push(v);
        true
    } else {
        false
    }
}

/// Renders an element for diagnostics.
pub fn display(x: &CyclotomicNumber) -> String {
    alloc::format!("{}", x)
}
