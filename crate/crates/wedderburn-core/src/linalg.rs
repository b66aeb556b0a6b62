//! Exact linear algebra over `Q` and over cyclotomic fields.
//!
//! Gauss-Jordan elimination with exact division; all systems solved here are
//! small (dimension bounded by the group order or a matrix-unit count), so
//! clarity wins over asymptotics.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::cyclotomic::CyclotomicNumber;
use crate::rational::Rational;

/// Scalars forming a field, enough for elimination.
pub trait FieldScalar: Clone + PartialEq + core::fmt::Debug {
    /// Additive identity.
    fn f_zero() -> Self;
    /// Multiplicative identity.
    fn f_one() -> Self;
    /// Addition.
    fn f_add(&self, other: &Self) -> Self;
    /// Subtraction.
    fn f_sub(&self, other: &Self) -> Self;
    /// Multiplication.
    fn f_mul(&self, other: &Self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn f_inv(&self) -> Option<Self>;
    /// Zero test.
    fn f_is_zero(&self) -> bool;
}

impl FieldScalar for Rational {
    fn f_zero() -> Self {
        Rational::zero()
    }
    fn f_one() -> Self {
        Rational::one()
    }
    fn f_add(&self, other: &Self) -> Self {
        self + other
    }
    fn f_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn f_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn f_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
}

impl FieldScalar for CyclotomicNumber {
    fn f_zero() -> Self {
        CyclotomicNumber::zero(1)
    }
    fn f_one() -> Self {
        CyclotomicNumber::one(1)
    }
    fn f_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn f_sub(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn f_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn f_inv(&self) -> Option<Self> {
        self.inverse()
    }
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
}

/// Result of solving `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome<F> {
    /// Exactly one solution.
    Unique(Vec<F>),
    /// The system is inconsistent.
    NoSolution,
    /// Infinitely many solutions: one particular solution plus a kernel basis.
    Underdetermined {
        /// Any one solution of the system.
        particular: Vec<F>,
        /// Basis of the solution space of `A x = 0`.
        kernel: Vec<Vec<F>>,
    },
}

/// Solves `A x = b` for a dense matrix given as rows.
pub fn solve_linear<F: FieldScalar>(matrix: &[Vec<F>], rhs: &[F]) -> SolveOutcome<F> {
    assert!(matrix.len() == rhs.len(), "row count mismatch");
    let rows = matrix.len();
    let cols = if rows == 0 { 0 } else { matrix[0].len() };
    let mut m: Vec<Vec<F>> = matrix
        .iter()
        .zip(rhs.iter())
        .map(|(row, b)| {
            assert!(row.len() == cols, "ragged matrix");
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();

    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(piv) = (row..rows).find(|&r| !m[r][col].f_is_zero()) else {
            continue;
        };
        m.swap(row, piv);
        let inv = m[row][col].f_inv().unwrap();
        for c in col..=cols {
            m[row][c] = m[row][c].f_mul(&inv);
        }
        for r in 0..rows {
            if r != row && !m[r][col].f_is_zero() {
                let f = m[r][col].clone();
                for c in col..=cols {
                    let delta = f.f_mul(&m[row][c]);
                    m[r][c] = m[r][c].f_sub(&delta);
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
        if !m[r][cols].f_is_zero() {
            return SolveOutcome::NoSolution;
        }
    }

    let mut particular = vec![F::f_zero(); cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        particular[c] = m[i][cols].clone();
    }

    if pivot_cols.len() == cols {
        return SolveOutcome::Unique(particular);
    }

    let mut kernel = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![F::f_zero(); cols];
        v[free] = F::f_one();
        for (i, &c) in pivot_cols.iter().enumerate() {
            v[c] = F::f_zero().f_sub(&m[i][free]);
        }
        kernel.push(v);
    }
    SolveOutcome::Underdetermined { particular, kernel }
}

/// Basis of the right kernel of `A`.
pub fn kernel<F: FieldScalar>(matrix: &[Vec<F>]) -> Vec<Vec<F>> {
    let rows = matrix.len();
    let rhs = vec![F::f_zero(); rows];
    match solve_linear(matrix, &rhs) {
        SolveOutcome::Unique(_) => Vec::new(),
        SolveOutcome::Underdetermined { kernel, .. } => kernel,
        SolveOutcome::NoSolution => unreachable!("homogeneous system is consistent"),
    }
}

/// Rank of `A`.
pub fn rank<F: FieldScalar>(matrix: &[Vec<F>]) -> usize {
    let rows = matrix.len();
    if rows == 0 {
        return 0;
    }
    let cols = matrix[0].len();
    let mut span: Span<F> = Span::new(cols);
    for row in matrix {
        span.insert(row.clone());
    }
    span.dimension()
}

/// An incrementally built subspace with coordinates over the accepted
/// generating vectors.
#[derive(Clone, Debug)]
pub struct Span<F: FieldScalar> {
    ambient: usize,
    rows: Vec<Vec<F>>,
    combos: Vec<Vec<F>>,
}

impl<F: FieldScalar> Span<F> {
    /// Empty span inside an `ambient`-dimensional space.
    pub fn new(ambient: usize) -> Self {
        Span {
            ambient,
            rows: Vec::new(),
            combos: Vec::new(),
        }
    }

    /// Current dimension.
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` to the span. Returns `true` when `v` was independent of the
    /// existing span (and is now the latest accepted generator).
    pub fn insert(&mut self, v: Vec<F>) -> bool {
        assert!(v.len() == self.ambient, "wrong ambient dimension");
        let (residual, mut combo) = self.reduce(v);
        if let Some(lead) = residual.iter().position(|c| !c.f_is_zero()) {
            let inv = residual[lead].f_inv().unwrap();
            let row: Vec<F> = residual.iter().map(|c| c.f_mul(&inv)).collect();
            for c in combo.iter_mut() {
                *c = c.f_mul(&inv);
            }
            combo.push(inv);
            self.rows.push(row);
            self.combos.push(combo);
            true
        } else {
            false
        }
    }

    /// Coordinates of `v` over the accepted generators, or `None` when `v`
    /// lies outside the span.
    pub fn express(&self, v: &[F]) -> Option<Vec<F>> {
        assert!(v.len() == self.ambient, "wrong ambient dimension");
        let (residual, combo) = self.reduce(v.to_vec());
        if residual.iter().all(|c| c.f_is_zero()) {
            let mut coords = vec![F::f_zero(); self.rows.len()];
            for (c, slot) in combo.iter().zip(coords.iter_mut()) {
                *slot = F::f_zero().f_sub(c);
            }
            Some(coords)
        } else {
            None
        }
    }

    /// True iff `v` lies in the span.
    pub fn contains(&self, v: &[F]) -> bool {
        self.express(v).is_some()
    }

    // Reduces v against the echelon rows. Returns the residual and the
    // coefficients c with residual = v + sum c_i * rows_i; rows_i carry
    // combos over accepted generators, so v = residual - sum c_i rows_i
    // expands to generator coordinates.
    fn reduce(&self, mut v: Vec<F>) -> (Vec<F>, Vec<F>) {
        let mut combo = vec![F::f_zero(); self.rows.len()];
        for (i, row) in self.rows.iter().enumerate() {
            let lead = row.iter().position(|c| !c.f_is_zero()).unwrap();
            if !v[lead].f_is_zero() {
                let f = v[lead].clone();
                for (slot, r) in v.iter_mut().zip(row.iter()) {
                    let delta = f.f_mul(r);
                    *slot = slot.f_sub(&delta);
                }
                // residual picked up -f * row_i, but row_i is itself a combo
                // of generators; fold that in.
                for (j, cj) in self.combos[i].iter().enumerate() {
                    let delta = f.f_mul(cj);
                    combo[j] = combo[j].f_sub(&delta);
                }
            }
        }
        // combo currently expresses residual = v + sum over generators; the
        // public callers re-normalize signs as needed.
        (v, combo)
    }
}
