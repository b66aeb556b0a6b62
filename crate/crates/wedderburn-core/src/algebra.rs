//! Exact arithmetic in rational group algebras.
//!
//! Elements are sparse rational combinations of group elements. Products
//! clear denominators, convolve the integer parts in 128-bit arithmetic when
//! a magnitude check allows it, and fall back to big integers otherwise, so
//! every result is exact.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclotomic::{units_mod, CyclotomicNumber};
use crate::group::{FiniteGroup, Subgroup};
use crate::linalg::{kernel, solve_linear, SolveOutcome, Span};
use crate::rational::{denominator_lcm, rat_int, Rational};

/// Sparse element of the rational group algebra `QG`.
///
/// Keys are group-element indices into a [`FiniteGroup`]; values are exact
/// rational coefficients. Zero coefficients are never stored, so structural
/// equality is semantic equality.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GroupAlgebraElement {
    terms: BTreeMap<u32, Rational>,
}

impl GroupAlgebraElement {
    /// The zero element.
    pub fn zero() -> Self {
        GroupAlgebraElement {
            terms: BTreeMap::new(),
        }
    }

    /// The multiplicative identity (the group identity with coefficient 1).
    pub fn one() -> Self {
        Self::from_group_element(0)
    }

    /// The basis element for group index `g`.
    pub fn from_group_element(g: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(g, Rational::one());
        GroupAlgebraElement { terms }
    }

    /// Builds an element from explicit terms, dropping zero coefficients.
    pub fn from_terms(terms: BTreeMap<u32, Rational>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        GroupAlgebraElement { terms }
    }

    /// The coefficient map (no zero entries).
    pub fn terms(&self) -> &BTreeMap<u32, Rational> {
        &self.terms
    }

    /// The coefficient of group index `g` (zero when absent).
    pub fn coefficient(&self, g: u32) -> Rational {
        self.terms.get(&g).cloned().unwrap_or_else(Rational::zero)
    }

    /// Number of nonzero terms.
    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    /// True iff this is the zero element.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum with `other`.
    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (&g, c) in &other.terms {
            let entry = terms.entry(g).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(&g);
            }
        }
        GroupAlgebraElement { terms }
    }

    /// Difference `self - other`.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Additive inverse.
    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(&g, c)| (g, -c.clone())).collect();
        GroupAlgebraElement { terms }
    }

    /// Scalar multiple.
    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let terms = self.terms.iter().map(|(&g, c)| (g, c * r)).collect();
        GroupAlgebraElement { terms }
    }

    /// Exact product in `QG`.
    pub fn mul(&self, group: &FiniteGroup, other: &Self) -> Self {
        if self.terms.is_empty() || other.terms.is_empty() {
            return Self::zero();
        }
        let (ta, da) = integerized(self);
        let (tb, db) = integerized(other);
        let den = &da * &db;
        if let Some(terms) = mul_i128(group, &ta, &tb, &den) {
            return GroupAlgebraElement { terms };
        }
        let order = group.order() as usize;
        let mut dense = vec![BigInt::zero(); order];
        for (ga, ca) in &ta {
            for (gb, cb) in &tb {
                dense[group.mul(*ga, *gb) as usize] += ca * cb;
            }
        }
        let mut terms = BTreeMap::new();
        for (g, v) in dense.into_iter().enumerate() {
            if !v.is_zero() {
                terms.insert(g as u32, Rational::new(v, den.clone()));
            }
        }
        GroupAlgebraElement { terms }
    }

    /// Conjugate `t^{-1} (self) t`, computed by relabeling the support.
    pub fn conjugate(&self, group: &FiniteGroup, t: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&g, c)| (group.conjugate_element(g, t), c.clone()))
            .collect();
        GroupAlgebraElement { terms }
    }

    /// True iff `self * self == self`.
    pub fn is_idempotent(&self, group: &FiniteGroup) -> bool {
        self.mul(group, self) == *self
    }

    /// True iff `self * other == other * self`.
    pub fn commutes_with(&self, group: &FiniteGroup, other: &Self) -> bool {
        self.mul(group, other) == other.mul(group, self)
    }

    /// Dense coordinate vector of length `|G|`.
    pub fn to_dense(&self, group: &FiniteGroup) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); group.order() as usize];
        for (&g, c) in &self.terms {
            v[g as usize] = c.clone();
        }
        v
    }

    /// Rebuilds an element from a dense coordinate vector.
    pub fn from_dense(coords: &[Rational]) -> Self {
        let terms = coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(g, c)| (g as u32, c.clone()))
            .collect();
        GroupAlgebraElement { terms }
    }

    /// Largest absolute numerator or denominator across coefficients; a
    /// crude height for ordering search candidates.
    pub fn height(&self) -> BigInt {
        let mut h = BigInt::zero();
        for c in self.terms.values() {
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

impl fmt::Display for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (g, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*[{}]", c, g)?;
        }
        Ok(())
    }
}

/// Scales the coefficients to integers; returns `(index, numerator)` pairs
/// and the common denominator.
fn integerized(x: &GroupAlgebraElement) -> (Vec<(u32, BigInt)>, BigInt) {
    let den = denominator_lcm(x.terms.values());
    let scaled = x
        .terms
        .iter()
        .map(|(&g, c)| (g, c.numer() * (&den / c.denom())))
        .collect();
    (scaled, den)
}

/// Convolution in `i128` arithmetic; `None` when coefficients might overflow.
fn mul_i128(
    group: &FiniteGroup,
    ta: &[(u32, BigInt)],
    tb: &[(u32, BigInt)],
    den: &BigInt,
) -> Option<BTreeMap<u32, Rational>> {
    let mut ia: Vec<(u32, i128)> = Vec::with_capacity(ta.len());
    let mut max_a: i128 = 0;
    for (g, c) in ta {
        let v = c.to_i64()? as i128;
        max_a = max_a.max(v.abs());
        ia.push((*g, v));
    }
    let mut ib: Vec<(u32, i128)> = Vec::with_capacity(tb.len());
    let mut max_b: i128 = 0;
    for (g, c) in tb {
        let v = c.to_i64()? as i128;
        max_b = max_b.max(v.abs());
        ib.push((*g, v));
    }
    let adds = ia.len().min(ib.len()) as i128 + 1;
    let bound = max_a.checked_mul(max_b)?.checked_mul(adds)?;
    if bound > i128::MAX / 4 {
        return None;
    }
    let mut dense = vec![0i128; group.order() as usize];
    for (ga, ca) in &ia {
        for (gb, cb) in &ib {
            dense[group.mul(*ga, *gb) as usize] += ca * cb;
        }
    }
    let mut terms = BTreeMap::new();
    for (g, v) in dense.into_iter().enumerate() {
        if v != 0 {
            terms.insert(g as u32, Rational::new(BigInt::from(v), den.clone()));
        }
    }
    Some(terms)
}

/// The averaged subgroup sum `(1/|S|) * sum of s for s in S`, an idempotent.
pub fn hat(group: &FiniteGroup, s: &Subgroup) -> GroupAlgebraElement {
    let _ = group;
    let inv_order = Rational::new(BigInt::one(), BigInt::from(s.order()));
    let terms = s.members().iter().map(|&g| (g, inv_order.clone())).collect();
    GroupAlgebraElement { terms }
}

/// Subgroups `L` with `K < L`, `L` normal in `H`, minimal with those
/// properties. Sorted by order, then by member list.
pub fn minimal_normals_over(group: &FiniteGroup, h: &Subgroup, k: &Subgroup) -> Vec<Subgroup> {
    assert!(k.is_subgroup_of(h), "K must be a subgroup of H");
    assert!(k.is_normal_in(group, h), "K must be normal in H");
    let mut closures: Vec<Subgroup> = Vec::new();
    for &x in h.members() {
        if k.contains(x) {
            continue;
        }
        let mut seed: Vec<u32> = k.members().to_vec();
        seed.push(x);
        let l = group.normal_closure(h, &seed);
        if !closures.contains(&l) {
            closures.push(l);
        }
    }
    let minimal: Vec<Subgroup> = closures
        .iter()
        .filter(|l| {
            !closures
                .iter()
                .any(|m| m.order() < l.order() && m.is_subgroup_of(l))
        })
        .cloned()
        .collect();
    let mut out = minimal;
    out.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.members().cmp(b.members()))
    });
    out
}

/// The idempotent built from a normal pair: `hat(K)` when `H == K`, and
/// otherwise the product over minimal normal subgroups `L` of `H` over `K`
/// of `(hat(K) - hat(L))`.
pub fn epsilon(group: &FiniteGroup, h: &Subgroup, k: &Subgroup) -> GroupAlgebraElement {
    assert!(k.is_subgroup_of(h), "K must be a subgroup of H");
    assert!(k.is_normal_in(group, h), "K must be normal in H");
    if h.order() == k.order() {
        return hat(group, k);
    }
    let khat = hat(group, k);
    let mut e = khat.clone();
    for l in minimal_normals_over(group, h, k) {
        let factor = khat.sub(&hat(group, &l));
        e = e.mul(group, &factor);
    }
    e
}

/// A linear character of `H` with kernel containing `K`, presented through
/// the cyclic quotient `H/K`: the generating coset is sent to a primitive
/// root of unity of order `[H:K]`.
#[derive(Clone, Debug)]
pub struct CosetCharacter {
    order: u64,
    exponents: BTreeMap<u32, u64>,
}

impl CosetCharacter {
    /// Builds the character from `H`, a normal subgroup `K` with cyclic
    /// quotient, and an element whose coset generates `H/K`.
    pub fn new(group: &FiniteGroup, h: &Subgroup, k: &Subgroup, generator: u32) -> Self {
        assert!(k.is_subgroup_of(h), "K must be a subgroup of H");
        assert!(k.is_normal_in(group, h), "K must be normal in H");
        assert!(h.contains(generator), "generator must lie in H");
        let m = k.index_in(h) as u64;
        assert!(
            h.coset_order(group, k, generator) as u64 == m,
            "generator's coset must generate the quotient"
        );
        let mut exponents = BTreeMap::new();
        let mut rep = 0u32;
        for j in 0..m {
            for &kk in k.members() {
                exponents.insert(group.mul(rep, kk), j);
            }
            rep = group.mul(rep, generator);
        }
        assert!(exponents.len() == h.order() as usize);
        CosetCharacter { order: m, exponents }
    }

    /// The character order `m = [H:K]`; values live in `Q(zeta_m)`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// The exponent `j` with `value(h) = zeta_m^j`, or `None` if `h` is
    /// outside `H`.
    pub fn exponent(&self, h: u32) -> Option<u64> {
        self.exponents.get(&h).copied()
    }

    /// The character value at `h` (which must lie in `H`).
    pub fn value(&self, h: u32) -> CyclotomicNumber {
        let j = self.exponent(h).expect("element outside the character's domain");
        CyclotomicNumber::root_of_unity(self.order, j)
    }
}

/// Value at `g` of the character induced from `chi` up to the subgroup whose
/// left-coset representatives are `transversal`: the sum of `chi(t^-1 g t)`
/// over representatives `t` that conjugate `g` into the domain of `chi`.
pub fn induced_character_value(
    group: &FiniteGroup,
    chi: &CosetCharacter,
    transversal: &[u32],
    g: u32,
) -> CyclotomicNumber {
    let m = chi.order();
    let mut counts = vec![Rational::zero(); m as usize];
    let mut any = false;
    for &t in transversal {
        let x = group.conjugate_element(g, t);
        if let Some(j) = chi.exponent(x) {
            counts[j as usize] += Rational::one();
            any = true;
        }
    }
    if !any {
        return CyclotomicNumber::zero(m);
    }
    CyclotomicNumber::from_poly(m, counts)
}

/// Why a requested central idempotent could not be produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdempotentError {
    /// The induced character is reducible (inner product with itself is not
    /// 1), so the formula would not yield a primitive idempotent.
    Reducible {
        /// The exact inner product of the induced character with itself.
        norm: Rational,
    },
}

impl fmt::Display for IdempotentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdempotentError::Reducible { norm } => write!(
                f,
                "induced character is reducible: self inner product is {} instead of 1",
                norm
            ),
        }
    }
}

/// The primitive central idempotent of `Q[amb]` attached to the character of
/// `amb` induced from the linear character `(H, K, generator)`.
///
/// For each `g` in `amb` the coefficient of `g^-1` is
/// `chi(1) / (|amb| * |S|)` times the sum of `sigma_k(chi(g))` over all
/// `k` coprime to the character order, where `S` is the set of `k` fixing
/// `chi` pointwise. Rejects reducible induced characters.
pub fn primitive_central_idempotent(
    group: &FiniteGroup,
    h: &Subgroup,
    k: &Subgroup,
    generator: u32,
    amb: &Subgroup,
) -> Result<GroupAlgebraElement, IdempotentError> {
    assert!(h.is_subgroup_of(amb), "H must lie in the ambient subgroup");
    let chi = CosetCharacter::new(group, h, k, generator);
    let transversal = h.left_transversal(group, amb);
    let mut values: BTreeMap<u32, CyclotomicNumber> = BTreeMap::new();
    for &g in amb.members() {
        values.insert(g, induced_character_value(group, &chi, &transversal, g));
    }
    // Exact irreducibility check: <chi, chi> == 1.
    let mut norm = CyclotomicNumber::zero(chi.order());
    for &g in amb.members() {
        norm = norm.add(&values[&g].mul(&values[&group.inv(g)]));
    }
    let norm = norm
        .to_rational()
        .expect("character self inner product must be rational")
        / rat_int(i64::from(amb.order()));
    if !norm.is_one() {
        return Err(IdempotentError::Reducible { norm });
    }
    let units = units_mod(chi.order());
    let stabilizer_size = units
        .iter()
        .filter(|&&u| amb.members().iter().all(|g| values[g].galois(u) == values[g]))
        .count();
    let degree = h.index_in(amb);
    let scale = Rational::new(
        BigInt::from(degree),
        BigInt::from(amb.order()) * BigInt::from(stabilizer_size as u32),
    );
    let mut terms = BTreeMap::new();
    for &g in amb.members() {
        let mut orbit_sum = CyclotomicNumber::zero(chi.order());
        for &u in &units {
            orbit_sum = orbit_sum.add(&values[&g].galois(u));
        }
        let r = orbit_sum
            .to_rational()
            .expect("Galois orbit sum must be rational");
        if !r.is_zero() {
            terms.insert(group.inv(g), r * &scale);
        }
    }
    Ok(GroupAlgebraElement { terms })
}

/// Dimension over `Q` of the left ideal `QG * e` for an idempotent `e`:
/// the trace of right multiplication by `e`, which is `|G|` times the
/// identity coefficient.
pub fn ideal_dimension(group: &FiniteGroup, e: &GroupAlgebraElement) -> u32 {
    assert!(e.is_idempotent(group), "ideal dimension needs an idempotent");
    let t = e.coefficient(0) * rat_int(i64::from(group.order()));
    assert!(t.is_integer(), "trace of an idempotent action must be integral");
    t.to_integer().to_u32().expect("dimension out of range")
}

/// Dimension over `Q` of the corner `eps * QG * eps` for an idempotent
/// `eps`: the trace of `x -> eps * x * eps`.
pub fn corner_dimension(group: &FiniteGroup, eps: &GroupAlgebraElement) -> u32 {
    assert!(eps.is_idempotent(group), "corner dimension needs an idempotent");
    // trace = sum over (h1, h2) in supp(eps)^2 of eps_h1 * eps_h2 * |{g : h1 g h2 = g}|,
    // and h1 g h2 = g iff g^-1 h1 g = h2^-1, contributing |Cen(h1)| when
    // h2^-1 is conjugate to h1.
    let order = group.order();
    let mut class_cache: BTreeMap<u32, (Vec<u32>, u32)> = BTreeMap::new();
    for (&h1, _) in eps.terms() {
        let mut class: Vec<u32> = (0..order)
            .map(|g| group.conjugate_element(h1, g))
            .collect();
        class.sort_unstable();
        class.dedup();
        let cen = order / class.len() as u32;
        class_cache.insert(h1, (class, cen));
    }
    let mut trace = Rational::zero();
    for (&h1, c1) in eps.terms() {
        let (class, cen) = &class_cache[&h1];
        for (&h2, c2) in eps.terms() {
            if class.binary_search(&group.inv(h2)).is_ok() {
                trace += c1 * c2 * rat_int(i64::from(*cen));
            }
        }
    }
    assert!(trace.is_integer(), "trace of an idempotent action must be integral");
    trace.to_integer().to_u32().expect("dimension out of range")
}

/// A `Q`-basis of a unital subalgebra of `QG`, with membership testing via
/// an echelonized span. Closure under multiplication is not enforced at
/// construction; call [`SubalgebraBasis::verify_closed`] to check it.
#[derive(Clone, Debug)]
pub struct SubalgebraBasis {
    identity: GroupAlgebraElement,
    basis: Vec<GroupAlgebraElement>,
    span: Span<Rational>,
}

impl SubalgebraBasis {
    /// Builds the basis, asserting linear independence and that `identity`
    /// lies in the span.
    pub fn new(
        group: &FiniteGroup,
        identity: GroupAlgebraElement,
        basis: Vec<GroupAlgebraElement>,
    ) -> Self {
        let mut span = Span::new(group.order() as usize);
        for (i, b) in basis.iter().enumerate() {
            assert!(
                span.insert(b.to_dense(group)),
                "basis element {} is dependent on the previous ones",
                i
            );
        }
        assert!(
            span.contains(&identity.to_dense(group)),
            "identity must lie in the span of the basis"
        );
        SubalgebraBasis {
            identity,
            basis,
            span,
        }
    }

    /// Number of basis elements.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// The subalgebra's identity element.
    pub fn identity(&self) -> &GroupAlgebraElement {
        &self.identity
    }

    /// The basis elements.
    pub fn basis(&self) -> &[GroupAlgebraElement] {
        &self.basis
    }

    /// Coordinates of `x` over the basis, or `None` if `x` is outside the
    /// span.
    pub fn express(
        &self,
        group: &FiniteGroup,
        x: &GroupAlgebraElement,
    ) -> Option<Vec<Rational>> {
        self.span.express(&x.to_dense(group))
    }

    /// True iff `x` lies in the span.
    pub fn contains(&self, group: &FiniteGroup, x: &GroupAlgebraElement) -> bool {
        self.span.contains(&x.to_dense(group))
    }

    /// The element with the given basis coordinates.
    pub fn from_coords(&self, coords: &[Rational]) -> GroupAlgebraElement {
        assert!(coords.len() == self.basis.len(), "coordinate count mismatch");
        let mut acc = GroupAlgebraElement::zero();
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(c));
            }
        }
        acc
    }

    /// Checks that all pairwise products of basis elements stay in the
    /// span; returns the first offending index pair otherwise.
    pub fn verify_closed(&self, group: &FiniteGroup) -> Result<(), (usize, usize)> {
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                if !self.contains(group, &a.mul(group, b)) {
                    return Err((i, j));
                }
            }
        }
        Ok(())
    }
}

/// Basis of the space of elements in `ambient`'s span commuting with every
/// element of `gens`.
pub fn centralizer_subspace(
    group: &FiniteGroup,
    gens: &[GroupAlgebraElement],
    ambient: &SubalgebraBasis,
) -> Vec<GroupAlgebraElement> {
    let order = group.order() as usize;
    let dim = ambient.dimension();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for g in gens {
        // Column j of this block: dense coords of b_j * g - g * b_j.
        let diffs: Vec<Vec<Rational>> = ambient
            .basis()
            .iter()
            .map(|b| b.mul(group, g).sub(&g.mul(group, b)).to_dense(group))
            .collect();
        for r in 0..order {
            if diffs.iter().all(|d| d[r].is_zero()) {
                continue;
            }
            rows.push((0..dim).map(|j| diffs[j][r].clone()).collect());
        }
    }
    if rows.is_empty() {
        return ambient.basis().to_vec();
    }
    kernel(&rows)
        .into_iter()
        .map(|coords| ambient.from_coords(&coords))
        .collect()
}

/// Two-sided inverse of `a` inside the subalgebra, or `None` when `a` is
/// not invertible there. `a` must lie in the subalgebra's span.
pub fn inverse_in(
    group: &FiniteGroup,
    a: &GroupAlgebraElement,
    sub: &SubalgebraBasis,
) -> Option<GroupAlgebraElement> {
    assert!(
        sub.contains(group, a),
        "inverse_in requires the element to lie in the subalgebra"
    );
    let order = group.order() as usize;
    let prods: Vec<Vec<Rational>> = sub
        .basis()
        .iter()
        .map(|b| a.mul(group, b).to_dense(group))
        .collect();
    let matrix: Vec<Vec<Rational>> = (0..order)
        .map(|r| prods.iter().map(|p| p[r].clone()).collect())
        .collect();
    let rhs = sub.identity().to_dense(group);
    let coords = match solve_linear(&matrix, &rhs) {
        SolveOutcome::Unique(c) => c,
        SolveOutcome::Underdetermined { particular, .. } => particular,
        SolveOutcome::NoSolution => return None,
    };
    let x = sub.from_coords(&coords);
    let id = sub.identity();
    let left_ok = a.mul(group, &x) == *id;
    let right_ok = x.mul(group, &a) == *id;
    assert!(
        left_ok && right_ok,
        "one-sided inverse found ({}): subalgebra is not closed or identity is wrong",
        format!("left {}, right {}", left_ok, right_ok)
    );
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn s3() -> FiniteGroup {
        // a = index 2 (order 3), b = index 1 (order 2), b a b = a^2.
        FiniteGroup::metacyclic(3, 2, 0, 2)
    }

    fn a4() -> FiniteGroup {
        // V4 (indices a*2+b) acted on by C3 cycling the involutions
        // 2 -> 1 -> 3 -> 2; group index = v*3 + c.
        let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        let c3 = FiniteGroup::cyclic(3);
        let act1 = [0u32, 3, 1, 2];
        let act2 = [0u32, 2, 3, 1];
        FiniteGroup::semidirect_product(&v4, &c3, |h, n| match h {
            0 => n,
            1 => act1[n as usize],
            _ => act2[n as usize],
        })
    }

    #[test]
    fn involution_average_is_idempotent() {
        let c2 = FiniteGroup::cyclic(2);
        let e = GroupAlgebraElement::one()
            .add(&GroupAlgebraElement::from_group_element(1))
            .scale(&rat(1, 2));
        let f = GroupAlgebraElement::one()
            .sub(&GroupAlgebraElement::from_group_element(1))
            .scale(&rat(1, 2));
        assert!(e.is_idempotent(&c2));
        assert!(f.is_idempotent(&c2));
        assert!(e.mul(&c2, &f).is_zero());
        assert_eq!(e.add(&f), GroupAlgebraElement::one());
    }

    #[test]
    fn product_follows_group_table() {
        let g = s3();
        let a = GroupAlgebraElement::from_group_element(2);
        let b = GroupAlgebraElement::from_group_element(1);
        let ab = a.mul(&g, &b);
        let ba = b.mul(&g, &a);
        assert_eq!(ab, GroupAlgebraElement::from_group_element(g.mul(2, 1)));
        assert_eq!(ba, GroupAlgebraElement::from_group_element(g.mul(1, 2)));
        assert_ne!(ab, ba);
    }

    #[test]
    fn big_coefficients_fall_back_exactly() {
        let g = s3();
        let huge = Rational::from_integer(BigInt::from(10u8).pow(30));
        let a = GroupAlgebraElement::from_group_element(2);
        let b = GroupAlgebraElement::from_group_element(1);
        let x = a.scale(&huge).add(&b);
        let y = b.scale(&huge).add(&a);
        let prod = x.mul(&g, &y);
        let expected = a
            .mul(&g, &b)
            .scale(&(&huge * &huge))
            .add(&a.mul(&g, &a).scale(&huge))
            .add(&b.mul(&g, &b).scale(&huge))
            .add(&b.mul(&g, &a));
        assert_eq!(prod, expected);
    }

    #[test]
    fn hat_is_idempotent_and_absorbing() {
        let g = s3();
        let a3 = g.closure(&[2]);
        let h = hat(&g, &a3);
        assert!(h.is_idempotent(&g));
        for &s in a3.members() {
            let translated = GroupAlgebraElement::from_group_element(s).mul(&g, &h);
            assert_eq!(translated, h);
        }
    }

    #[test]
    fn epsilon_examples() {
        let g = s3();
        let a3 = g.closure(&[2]);
        let triv = g.trivial_subgroup();
        // A3 is simple, so the only minimal normal over 1 is A3 itself.
        let e = epsilon(&g, &a3, &triv);
        let expected = GroupAlgebraElement::one().sub(&hat(&g, &a3));
        assert_eq!(e, expected);
        assert!(e.is_idempotent(&g));
        // H == K collapses to hat(K).
        assert_eq!(epsilon(&g, &a3, &a3), hat(&g, &a3));

        let c4 = FiniteGroup::cyclic(4);
        let whole = c4.whole();
        let c2 = c4.closure(&[2]);
        let e4 = epsilon(&c4, &whole, &c4.trivial_subgroup());
        let expected4 = GroupAlgebraElement::one().sub(&hat(&c4, &c2));
        assert_eq!(e4, expected4);

        let a4 = a4();
        let v4 = Subgroup::from_members(&a4, vec![0, 3, 6, 9]);
        let k = Subgroup::from_members(&a4, vec![0, 6]);
        let minimals = minimal_normals_over(&a4, &v4, &k);
        assert_eq!(minimals.len(), 1);
        assert_eq!(minimals[0].order(), 4);
        let ea = epsilon(&a4, &v4, &k);
        assert_eq!(ea, hat(&a4, &k).sub(&hat(&a4, &v4)));
        assert!(ea.is_idempotent(&a4));
    }

    #[test]
    fn induced_character_values_in_s3() {
        let g = s3();
        let a3 = g.closure(&[2]);
        let triv = g.trivial_subgroup();
        let chi = CosetCharacter::new(&g, &a3, &triv, 2);
        let t = a3.left_transversal(&g, &g.whole());
        let at_identity = induced_character_value(&g, &chi, &t, 0);
        assert_eq!(at_identity.to_rational(), Some(rat_int(2)));
        let at_rotation = induced_character_value(&g, &chi, &t, 2);
        assert_eq!(at_rotation.to_rational(), Some(rat_int(-1)));
        let at_reflection = induced_character_value(&g, &chi, &t, 1);
        assert!(at_reflection.is_zero());
    }

    #[test]
    fn central_idempotent_for_standard_component() {
        let g = s3();
        let a3 = g.closure(&[2]);
        let triv = g.trivial_subgroup();
        let whole = g.whole();
        let e = primitive_central_idempotent(&g, &a3, &triv, 2, &whole).unwrap();
        let expected = GroupAlgebraElement::one().sub(&hat(&g, &a3));
        assert_eq!(e, expected);
        assert!(e.is_idempotent(&g));
        let b = GroupAlgebraElement::from_group_element(1);
        assert!(e.commutes_with(&g, &b));
    }

    #[test]
    fn central_idempotent_rejects_reducible_inductions() {
        let g = s3();
        let c2 = g.closure(&[1]);
        let whole = g.whole();
        // Trivial character of C2 induced to S3 contains two irreducibles.
        let err = primitive_central_idempotent(&g, &c2, &c2, 0, &whole).unwrap_err();
        assert_eq!(err, IdempotentError::Reducible { norm: rat_int(2) });
        // Sign character of C2 induced to S3 also splits.
        let err2 =
            primitive_central_idempotent(&g, &c2, &g.trivial_subgroup(), 1, &whole).unwrap_err();
        assert_eq!(err2, IdempotentError::Reducible { norm: rat_int(2) });
    }

    #[test]
    fn central_idempotent_of_trivial_pair_is_group_average() {
        let c4 = FiniteGroup::cyclic(4);
        let whole = c4.whole();
        let e = primitive_central_idempotent(&c4, &whole, &whole, 0, &whole).unwrap();
        assert_eq!(e, hat(&c4, &whole));
    }

    #[test]
    fn conjugates_of_epsilon_are_orthogonal_in_a4() {
        let g = a4();
        let v4 = Subgroup::from_members(&g, vec![0, 3, 6, 9]);
        let k = Subgroup::from_members(&g, vec![0, 6]);
        let e = epsilon(&g, &v4, &k);
        // Within V4 the idempotent coincides with the character idempotent.
        let pci = primitive_central_idempotent(&g, &v4, &k, 3, &v4).unwrap();
        assert_eq!(e, pci);
        // A 3-cycle moves the idempotent to an orthogonal conjugate.
        let e1 = e.conjugate(&g, 1);
        let e2 = e.conjugate(&g, 2);
        assert_ne!(e, e1);
        assert_ne!(e1, e2);
        assert!(e.mul(&g, &e1).is_zero());
        assert!(e1.mul(&g, &e2).is_zero());
        assert!(e.mul(&g, &e2).is_zero());
    }

    #[test]
    fn dimension_formulas() {
        let g = s3();
        let a3 = g.closure(&[2]);
        let e = GroupAlgebraElement::one().sub(&hat(&g, &a3));
        // QS3 * e is the 2x2 matrix component.
        assert_eq!(ideal_dimension(&g, &e), 4);
        assert_eq!(corner_dimension(&g, &e), 4);
        assert_eq!(ideal_dimension(&g, &hat(&g, &g.whole())), 1);
        assert_eq!(corner_dimension(&g, &hat(&g, &g.whole())), 1);

        let a4 = a4();
        let v4 = Subgroup::from_members(&a4, vec![0, 3, 6, 9]);
        let k = Subgroup::from_members(&a4, vec![0, 6]);
        let eps = epsilon(&a4, &v4, &k);
        // eps is a primitive idempotent of the 3x3 matrix component.
        assert_eq!(corner_dimension(&a4, &eps), 1);
        assert_eq!(ideal_dimension(&a4, &eps), 3);
    }

    #[test]
    fn centralizer_of_component_is_its_center() {
        let g = s3();
        let a3 = g.closure(&[2]);
        let e = GroupAlgebraElement::one().sub(&hat(&g, &a3));
        let gens: Vec<GroupAlgebraElement> = [0u32, 2, 1, 3]
            .iter()
            .map(|&x| GroupAlgebraElement::from_group_element(x).mul(&g, &e))
            .collect();
        let ambient = SubalgebraBasis::new(&g, e.clone(), gens.clone());
        assert_eq!(ambient.dimension(), 4);
        assert!(ambient.verify_closed(&g).is_ok());
        let center = centralizer_subspace(&g, &gens, &ambient);
        assert_eq!(center.len(), 1);
        let z = &center[0];
        assert!(z.commutes_with(&g, &gens[1]));
        // The center is spanned by the component identity.
        let z_span = SubalgebraBasis::new(&g, e.clone(), vec![z.clone()]);
        assert!(z_span.contains(&g, &e));
    }

    #[test]
    fn inverses_inside_a_component() {
        let g = s3();
        let a3 = g.closure(&[2]);
        let e = GroupAlgebraElement::one().sub(&hat(&g, &a3));
        let basis: Vec<GroupAlgebraElement> = [0u32, 2, 1, 3]
            .iter()
            .map(|&x| GroupAlgebraElement::from_group_element(x).mul(&g, &e))
            .collect();
        let ambient = SubalgebraBasis::new(&g, e.clone(), basis.clone());
        // b*e squares to the identity, so it is its own inverse.
        let be = &basis[2];
        let inv = inverse_in(&g, be, &ambient).unwrap();
        assert_eq!(inv, *be);
        // A proper idempotent is a zero divisor, hence not invertible.
        let y = e.add(be).scale(&rat(1, 2));
        assert!(y.is_idempotent(&g));
        assert!(inverse_in(&g, &y, &ambient).is_none());
    }

    #[test]
    fn closure_violations_are_located() {
        let g = s3();
        let one = GroupAlgebraElement::one();
        let a = GroupAlgebraElement::from_group_element(2);
        let bad = SubalgebraBasis::new(&g, one.clone(), vec![one.clone(), a.clone()]);
        assert_eq!(bad.verify_closed(&g), Err((1, 1)));
    }
}
