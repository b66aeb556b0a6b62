//! Matrix units and primitive orthogonal idempotents of a presented simple
//! component.
//!
//! Three constructions produce unit grids:
//!
//! * the transversal grid of a component scaffold,
//! * a normal-element construction over a presentation whose factor set is
//!   trivial (the split case), and
//! * a splitting-subfield pipeline for presentations of prime Schur index,
//!   which reduces to the split construction over a smaller field after
//!   dressing a cyclic unit family.
//!
//! Grids over commuting parts multiply into the grid of the whole component,
//! and [`verify_matrix_units`] checks every product relation, the diagonal
//! sum, and the corner geometry of the final family exactly.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use core::fmt;

use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::algebra::{
    centralizer_subspace, corner_dimension, inverse_in, GroupAlgebraElement, SubalgebraBasis,
};
use crate::crossed::{
    build_presentation, canon_exp_in, is_p_power, norm_equation_solve, schur_decision,
    search_values_up_to, solve_unit_in, sylow_split, unit_power_scalar, value_height,
    ComponentPresentation, ComponentScaffold, CrossedElem, CrossedProductPresentation,
    DecisionConfig, PresentationError, SchurDecision, SchurVerdict, SchurWitness,
    SylowSplitError, SEARCH_CANDIDATE_CAP,
};
use crate::cyclotomic::{CyclotomicNumber, SubfieldDescriptor};
use crate::group::FiniteGroup;
use crate::linalg::{rank, solve_linear, SolveOutcome, Span};
use crate::rational::{rat, rat_int, Rational};
use crate::shoda::GsspCertificate;

/// Number of seeded random coefficient vectors tried when searching for a
/// normal element after the deterministic candidates fail.
const RANDOM_NORMAL_TRIES: usize = 200;

fn ge(g: u32) -> GroupAlgebraElement {
    GroupAlgebraElement::from_group_element(g)
}

// ---------------------------------------------------------------------------
// The unit-set container.
// ---------------------------------------------------------------------------

/// How a matrix-unit family was produced.
#[derive(Clone, Debug, PartialEq)]
pub enum UnitsProvenance {
    /// The grid `t_i^{-1} eps t_j` over the certified transversal.
    TransversalGrid,
    /// The normal-element construction over a trivialized presentation.
    SplitAbelian {
        /// The normal element that drove the construction.
        normal_element: CyclotomicNumber,
        /// Solution of the change-of-basis system, in automorphism order.
        alpha: Vec<CyclotomicNumber>,
    },
    /// The splitting-subfield pipeline for a prime Schur index.
    PrimeIndex {
        /// The index.
        p: u64,
        /// Relative degree of the splitting subfield over the center.
        splitting_degree: usize,
    },
    /// Entrywise products of two commuting families.
    Product {
        /// Provenance of the left family.
        left: Box<UnitsProvenance>,
        /// Provenance of the right family.
        right: Box<UnitsProvenance>,
    },
}

/// A square family `u[i][j]` of elements with `u[i][j] u[k][l] =
/// delta_{jk} u[i][l]` and diagonal sum equal to a designated identity.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixUnitSet {
    identity: GroupAlgebraElement,
    n: usize,
    units: Vec<Vec<GroupAlgebraElement>>,
    provenance: UnitsProvenance,
}

impl MatrixUnitSet {
    /// Wraps an existing grid. Only shape is checked here; use
    /// [`verify_matrix_units`] for the algebraic relations.
    pub fn from_parts(
        identity: GroupAlgebraElement,
        units: Vec<Vec<GroupAlgebraElement>>,
        provenance: UnitsProvenance,
    ) -> Self {
        let n = units.len();
        assert!(n > 0, "a matrix-unit family must not be empty");
        for row in &units {
            assert!(row.len() == n, "the unit grid must be square");
        }
        MatrixUnitSet {
            identity,
            n,
            units,
            provenance,
        }
    }

    /// The identity the diagonal sums to.
    pub fn identity(&self) -> &GroupAlgebraElement {
        &self.identity
    }

    /// Side length of the grid.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The unit at row `i`, column `j`.
    pub fn unit(&self, i: usize, j: usize) -> &GroupAlgebraElement {
        &self.units[i][j]
    }

    /// The full grid.
    pub fn units(&self) -> &[Vec<GroupAlgebraElement>] {
        &self.units
    }

    /// The `i`-th primitive idempotent (diagonal entry).
    pub fn idempotent(&self, i: usize) -> &GroupAlgebraElement {
        &self.units[i][i]
    }

    /// All diagonal idempotents in order.
    pub fn idempotents(&self) -> Vec<&GroupAlgebraElement> {
        (0..self.n).map(|i| &self.units[i][i]).collect()
    }

    /// How the family was produced.
    pub fn provenance(&self) -> &UnitsProvenance {
        &self.provenance
    }
}

// ---------------------------------------------------------------------------
// Verification.
// ---------------------------------------------------------------------------

/// A localized verification failure of a matrix-unit family.
#[derive(Clone, Debug, PartialEq)]
pub enum MatrixUnitFailure {
    /// The unit at `(i, j)` is zero.
    ZeroUnit {
        /// Row.
        i: usize,
        /// Column.
        j: usize,
    },
    /// The diagonal does not sum to the designated identity.
    DiagonalSum,
    /// `u[i][j] u[k][l]` differs from `delta_{jk} u[i][l]`.
    ProductRelation {
        /// Row of the left factor.
        i: usize,
        /// Column of the left factor.
        j: usize,
        /// Row of the right factor.
        k: usize,
        /// Column of the right factor.
        l: usize,
    },
    /// The corner of the first idempotent has the wrong dimension.
    CornerDimension {
        /// Dimension found.
        found: usize,
        /// Dimension expected.
        expected: usize,
    },
    /// The corner sweep did not reach the trace-formula dimension.
    CornerSpanIncomplete {
        /// Independent corner elements found.
        found: usize,
        /// Dimension expected.
        expected: usize,
    },
    /// A sampled nonzero corner element was not invertible in the corner,
    /// so the diagonal idempotents are not primitive.
    CornerSampleNotInvertible {
        /// Index of the failing sample.
        sample: usize,
    },
    /// The two families being composed designate different identities.
    IdentityMismatch,
    /// Entry `(i, j)` of the left family does not commute with entry
    /// `(k, l)` of the right family.
    PartsDoNotCommute {
        /// Row in the left family.
        i: usize,
        /// Column in the left family.
        j: usize,
        /// Row in the right family.
        k: usize,
        /// Column in the right family.
        l: usize,
    },
}

impl fmt::Display for MatrixUnitFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixUnitFailure::ZeroUnit { i, j } => {
                write!(f, "the unit at ({i}, {j}) is zero")
            }
            MatrixUnitFailure::DiagonalSum => {
                write!(f, "the diagonal idempotents do not sum to the identity")
            }
            MatrixUnitFailure::ProductRelation { i, j, k, l } => {
                write!(f, "the product relation fails at ({i}, {j}) x ({k}, {l})")
            }
            MatrixUnitFailure::CornerDimension { found, expected } => {
                write!(f, "corner dimension {found}, expected {expected}")
            }
            MatrixUnitFailure::CornerSpanIncomplete { found, expected } => {
                write!(f, "corner sweep found {found} of {expected} dimensions")
            }
            MatrixUnitFailure::CornerSampleNotInvertible { sample } => {
                write!(f, "corner sample {sample} is not invertible")
            }
            MatrixUnitFailure::IdentityMismatch => {
                write!(f, "the families designate different identities")
            }
            MatrixUnitFailure::PartsDoNotCommute { i, j, k, l } => {
                write!(
                    f,
                    "left entry ({i}, {j}) does not commute with right entry ({k}, {l})"
                )
            }
        }
    }
}

/// Optional corner expectations for [`verify_matrix_units`]: the dimension
/// of the first idempotent's corner over the rationals, and a number of
/// seeded nonzero corner samples that must all be invertible (certifying
/// that the diagonal idempotents are primitive).
#[derive(Clone, Debug)]
pub struct CornerCheck {
    /// Expected `dim_Q` of the corner of the first diagonal idempotent.
    pub expected_dimension: usize,
    /// Number of seeded nonzero corner samples to test for invertibility.
    pub samples: usize,
    /// Seed for the sample generator.
    pub seed: u64,
}

/// Checks every product relation of the family (all `n^4` of them), the
/// diagonal sum, nonzero-ness of every entry, and optionally the corner
/// geometry of the first idempotent.
pub fn verify_matrix_units(
    group: &FiniteGroup,
    set: &MatrixUnitSet,
    corner: Option<&CornerCheck>,
) -> Result<(), MatrixUnitFailure> {
    let n = set.n;
    for i in 0..n {
        for j in 0..n {
            if set.units[i][j].terms().is_empty() {
                return Err(MatrixUnitFailure::ZeroUnit { i, j });
            }
        }
    }
    let mut diag = GroupAlgebraElement::zero();
    for i in 0..n {
        diag = diag.add(&set.units[i][i]);
    }
    if diag != set.identity {
        return Err(MatrixUnitFailure::DiagonalSum);
    }
    let zero = GroupAlgebraElement::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let prod_row = set.units[i][j].clone();
                for l in 0..n {
                    let p = prod_row.mul(group, &set.units[k][l]);
                    let ok = if j == k {
                        p == set.units[i][l]
                    } else {
                        p == zero
                    };
                    if !ok {
                        return Err(MatrixUnitFailure::ProductRelation { i, j, k, l });
                    }
                }
            }
        }
    }
    if let Some(check) = corner {
        let e11 = &set.units[0][0];
        let dim = corner_dimension(group, e11) as usize;
        if dim != check.expected_dimension {
            return Err(MatrixUnitFailure::CornerDimension {
                found: dim,
                expected: check.expected_dimension,
            });
        }
        // Sweep a basis of the corner.
        let order = group.order() as usize;
        let mut span: Span<Rational> = Span::new(order);
        let mut basis: Vec<GroupAlgebraElement> = Vec::new();
        for g in 0..group.order() {
            let cand = e11.mul(group, &ge(g)).mul(group, e11);
            if cand.terms().is_empty() {
                continue;
            }
            if span.insert(cand.to_dense(group)) {
                basis.push(cand);
            }
            if basis.len() == dim {
                break;
            }
        }
        if basis.len() != dim {
            return Err(MatrixUnitFailure::CornerSpanIncomplete {
                found: basis.len(),
                expected: dim,
            });
        }
        let sub = SubalgebraBasis::new(group, e11.clone(), basis);
        let mut rng = ChaCha8Rng::seed_from_u64(check.seed);
        let mut done = 0usize;
        let mut attempts = 0usize;
        while done < check.samples && attempts < 20 * check.samples + 20 {
            attempts += 1;
            let coords: Vec<Rational> = (0..dim)
                .map(|_| rat_int((rng.next_u32() % 7) as i64 - 3))
                .collect();
            if coords.iter().all(|c| c.is_zero()) {
                continue;
            }
            let x = sub.from_coords(&coords);
            if x.terms().is_empty() {
                continue;
            }
            if inverse_in(group, &x, &sub).is_none() {
                return Err(MatrixUnitFailure::CornerSampleNotInvertible { sample: done });
            }
            done += 1;
        }
        if done < check.samples {
            return Err(MatrixUnitFailure::CornerSampleNotInvertible { sample: done });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// The transversal grid.
// ---------------------------------------------------------------------------

/// The matrix-unit family `t_i^{-1} eps t_j` carried by the component
/// scaffold, verified entry by entry.
pub fn transversal_matrix_units(
    group: &FiniteGroup,
    scaffold: &ComponentScaffold,
) -> Result<MatrixUnitSet, MatrixUnitFailure> {
    let n = scaffold.matrix_size() as usize;
    let units: Vec<Vec<GroupAlgebraElement>> = (0..n)
        .map(|i| (0..n).map(|j| scaffold.b_unit(i, j).clone()).collect())
        .collect();
    let set = MatrixUnitSet::from_parts(
        scaffold.identity().clone(),
        units,
        UnitsProvenance::TransversalGrid,
    );
    verify_matrix_units(group, &set, None)?;
    Ok(set)
}

/// Moves a corner-side family into the ambient centralizer through the
/// scaffold's transport isomorphism.
pub fn transport_matrix_units(
    group: &FiniteGroup,
    scaffold: &ComponentScaffold,
    set: &MatrixUnitSet,
) -> MatrixUnitSet {
    let units: Vec<Vec<GroupAlgebraElement>> = set
        .units
        .iter()
        .map(|row| row.iter().map(|u| scaffold.transport(group, u)).collect())
        .collect();
    MatrixUnitSet::from_parts(
        scaffold.transport(group, &set.identity),
        units,
        set.provenance.clone(),
    )
}

// ---------------------------------------------------------------------------
// Composition of commuting families.
// ---------------------------------------------------------------------------

/// Multiplies two families with the same identity whose entries commute
/// pairwise into the `(n1*n2)`-sized family of the whole component. The
/// commuting property is verified on every pair of entries.
pub fn assemble_component_units(
    group: &FiniteGroup,
    left: &MatrixUnitSet,
    right: &MatrixUnitSet,
) -> Result<MatrixUnitSet, MatrixUnitFailure> {
    if left.identity != right.identity {
        return Err(MatrixUnitFailure::IdentityMismatch);
    }
    for i in 0..left.n {
        for j in 0..left.n {
            for k in 0..right.n {
                for l in 0..right.n {
                    let lr = left.units[i][j].mul(group, &right.units[k][l]);
                    let rl = right.units[k][l].mul(group, &left.units[i][j]);
                    if lr != rl {
                        return Err(MatrixUnitFailure::PartsDoNotCommute { i, j, k, l });
                    }
                }
            }
        }
    }
    let n = left.n * right.n;
    let mut units: Vec<Vec<GroupAlgebraElement>> = Vec::with_capacity(n);
    for i in 0..left.n {
        for a in 0..right.n {
            let mut row: Vec<GroupAlgebraElement> = Vec::with_capacity(n);
            for j in 0..left.n {
                for b in 0..right.n {
                    row.push(left.units[i][j].mul(group, &right.units[a][b]));
                }
            }
            units.push(row);
        }
    }
    let set = MatrixUnitSet::from_parts(
        left.identity.clone(),
        units,
        UnitsProvenance::Product {
            left: Box::new(left.provenance.clone()),
            right: Box::new(right.provenance.clone()),
        },
    );
    // Cheap structural check here; the caller runs the full verifier.
    let mut diag = GroupAlgebraElement::zero();
    for i in 0..set.n {
        diag = diag.add(&set.units[i][i]);
    }
    if diag != set.identity {
        return Err(MatrixUnitFailure::DiagonalSum);
    }
    Ok(set)
}

// ---------------------------------------------------------------------------
// The split (trivial factor set) construction.
// ---------------------------------------------------------------------------

/// Failure of the normal-element construction.
#[derive(Clone, Debug, PartialEq)]
pub enum SplitUnitsError {
    /// The presentation still has a nontrivial factor-set value.
    FactorSetNotTrivial {
        /// First automorphism label.
        a: u64,
        /// Second automorphism label.
        b: u64,
    },
    /// No normal element with an invertible change of basis was found.
    NormalElementSearchExhausted,
    /// The supplied normal element was rejected.
    OverrideRejected {
        /// Why.
        reason: String,
    },
    /// The constructed family failed its own symbolic verification.
    ConstructionFailed {
        /// Which check failed.
        stage: String,
    },
}

impl fmt::Display for SplitUnitsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitUnitsError::FactorSetNotTrivial { a, b } => {
                write!(f, "factor set value at ({a}, {b}) is not one")
            }
            SplitUnitsError::NormalElementSearchExhausted => {
                write!(f, "no usable normal element found")
            }
            SplitUnitsError::OverrideRejected { reason } => {
                write!(f, "supplied normal element rejected: {reason}")
            }
            SplitUnitsError::ConstructionFailed { stage } => {
                write!(f, "construction failed its own verification: {stage}")
            }
        }
    }
}

/// Tests whether `w` is usable: the matrix `M[j][i] = sigma_j(sigma_i(w))`
/// must be invertible over the presented field.
fn normal_matrix(
    pres: &CrossedProductPresentation,
    w: &CyclotomicNumber,
) -> Vec<Vec<CyclotomicNumber>> {
    let gal = pres.gal();
    gal.iter()
        .map(|&aj| {
            gal.iter()
                .map(|&ai| w.galois(pres.compose_exp(ai, aj)))
                .collect()
        })
        .collect()
}

/// Runs the normal-element construction over `w`; `None` when the change
/// of basis is not invertible (the caller then redraws `w`).
fn split_units_from_normal(
    group: &FiniteGroup,
    pres: &CrossedProductPresentation,
    w: &CyclotomicNumber,
) -> Result<Option<MatrixUnitSet>, SplitUnitsError> {
    let m = pres.conductor();
    let gal: Vec<u64> = pres.gal().to_vec();
    let n = gal.len();
    let matrix = normal_matrix(pres, w);
    if rank(&matrix) != n {
        return Ok(None);
    }
    // Right-hand side: the trace row for the identity, difference rows for
    // the rest.
    let mut rhs: Vec<CyclotomicNumber> = Vec::with_capacity(n);
    let mut trace = CyclotomicNumber::zero(m);
    for &a in &gal {
        trace = trace.add(&w.galois(a));
    }
    rhs.push(trace);
    for &a in gal.iter().skip(1) {
        rhs.push(w.sub(&w.galois(a)));
    }
    let alpha_coeffs = match solve_linear(&matrix, &rhs) {
        SolveOutcome::Unique(c) => c,
        _ => return Ok(None),
    };
    // alpha = sum_i z_i alpha_i: the solved coefficients right-multiply the
    // units (that is the arrangement under which the defining system makes
    // the averaged idempotent's conjugates orthogonal).
    let mut alpha = CrossedElem::zero(m);
    for (i, &a) in gal.iter().enumerate() {
        if alpha_coeffs[i].is_zero() {
            continue;
        }
        alpha = alpha.add(&CrossedElem::from_coeff(pres, a, alpha_coeffs[i].clone()));
    }
    let alpha_inv = match alpha.inverse(pres) {
        Some(inv) => inv,
        None => return Ok(None),
    };
    // The averaged idempotent and its conjugates.
    let mut e_hat = CrossedElem::zero(m);
    for &a in &gal {
        e_hat = e_hat.add(&CrossedElem::from_unit(pres, a));
    }
    e_hat = e_hat.scale(&rat(1, n as i64));
    let focus = alpha_inv.mul(pres, &e_hat).mul(pres, &alpha);
    // With a trivial factor set the inverse unit is exactly the unit of the
    // inverse automorphism.
    let mut grid: Vec<Vec<CrossedElem>> = Vec::with_capacity(n);
    for &a in &gal {
        let za_inv = CrossedElem::from_unit(pres, pres.inverse_exp(a));
        let left = za_inv.mul(pres, &focus);
        let row: Vec<CrossedElem> = gal
            .iter()
            .map(|&b| left.mul(pres, &CrossedElem::from_unit(pres, b)))
            .collect();
        grid.push(row);
    }
    // Symbolic verification before realizing anything.
    let zero = CrossedElem::zero(m);
    let one = CrossedElem::one(pres);
    let mut diag = CrossedElem::zero(m);
    for (i, row) in grid.iter().enumerate() {
        diag = diag.add(&row[i]);
    }
    if diag != one {
        return Err(SplitUnitsError::ConstructionFailed {
            stage: String::from("diagonal sum"),
        });
    }
    for i in 0..n {
        for j in 0..n {
            if grid[i][j] == zero {
                return Err(SplitUnitsError::ConstructionFailed {
                    stage: String::from("zero entry"),
                });
            }
            for k in 0..n {
                for l in 0..n {
                    let p = grid[i][j].mul(pres, &grid[k][l]);
                    let ok = if j == k { p == grid[i][l] } else { p == zero };
                    if !ok {
                        return Err(SplitUnitsError::ConstructionFailed {
                            stage: String::from("product relations"),
                        });
                    }
                }
            }
        }
    }
    let units: Vec<Vec<GroupAlgebraElement>> = grid
        .iter()
        .map(|row| row.iter().map(|u| pres.realize(group, u)).collect())
        .collect();
    Ok(Some(MatrixUnitSet::from_parts(
        pres.identity().clone(),
        units,
        UnitsProvenance::SplitAbelian {
            normal_element: w.clone(),
            alpha: alpha_coeffs,
        },
    )))
}

/// Matrix units of a presentation with a trivial factor set, through a
/// normal element of the presented field.
///
/// Candidates for the normal element: the supplied override first, then
/// field basis elements, then pairwise sums of basis elements, then seeded
/// random small combinations. A candidate is kept when the conjugate
/// matrix `[sigma_j(sigma_i(w))]` is invertible and the resulting change
/// of basis is invertible; the constructed family is verified symbolically
/// before being realized in the carrier.
pub fn split_abelian_matrix_units(
    group: &FiniteGroup,
    pres: &CrossedProductPresentation,
    normal_override: Option<&CyclotomicNumber>,
    seed: u64,
) -> Result<MatrixUnitSet, SplitUnitsError> {
    let m = pres.conductor();
    let gal: Vec<u64> = pres.gal().to_vec();
    let one = CyclotomicNumber::one(m);
    for &a in &gal {
        for &b in &gal {
            if pres.tau_value(a, b) != one {
                return Err(SplitUnitsError::FactorSetNotTrivial { a, b });
            }
        }
    }
    if let Some(w) = normal_override {
        let w = w.promote(m);
        if !pres.e_field().contains(&w) {
            return Err(SplitUnitsError::OverrideRejected {
                reason: String::from("the element lies outside the presented field"),
            });
        }
        if rank(&normal_matrix(pres, &w)) != gal.len() {
            return Err(SplitUnitsError::OverrideRejected {
                reason: String::from("the conjugate matrix is not invertible"),
            });
        }
        return match split_units_from_normal(group, pres, &w)? {
            Some(set) => Ok(set),
            None => Err(SplitUnitsError::OverrideRejected {
                reason: String::from("the change of basis is not invertible"),
            }),
        };
    }
    let basis = pres.e_field().basis().to_vec();
    // Deterministic candidates.
    let mut candidates: Vec<CyclotomicNumber> = basis.clone();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            candidates.push(basis[i].add(&basis[j]));
        }
    }
    for w in &candidates {
        if let Some(set) = split_units_from_normal(group, pres, w)? {
            return Ok(set);
        }
    }
    // Seeded random small combinations.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_NORMAL_TRIES {
        let mut w = CyclotomicNumber::zero(m);
        for b in &basis {
            let c = rat_int((rng.next_u32() % 7) as i64 - 3);
            if !c.is_zero() {
                w = w.add(&b.scale(&c));
            }
        }
        if w.is_zero() {
            continue;
        }
        if let Some(set) = split_units_from_normal(group, pres, &w)? {
            return Ok(set);
        }
    }
    Err(SplitUnitsError::NormalElementSearchExhausted)
}

// ---------------------------------------------------------------------------
// The prime-index pipeline.
// ---------------------------------------------------------------------------

/// Optional injected values for the prime-index pipeline. Each is verified
/// before use; an unusable override is an error, never silently ignored.
#[derive(Clone, Debug, Default)]
pub struct PrimeIndexOverrides {
    /// Force this automorphism subgroup (labels) as the one whose fixed
    /// field is the splitting subfield.
    pub splitting_subgroup: Option<Vec<u64>>,
    /// Force this label as the cyclic generator of the splitting-field
    /// automorphisms.
    pub generator_label: Option<u64>,
    /// A full cyclic unit family (corner-side), indexed by powers of the
    /// generator; entry 0 must be the identity.
    pub u_family: Option<Vec<GroupAlgebraElement>>,
    /// Normal element for the inner construction over the splitting field.
    pub l_normal_element: Option<CyclotomicNumber>,
    /// Normal element for the final construction over the dressed subfield.
    pub normal_element: Option<CyclotomicNumber>,
}

/// What the prime-index pipeline did, for inspection and cross-checking.
#[derive(Clone, Debug)]
pub struct PrimeIndexReport {
    /// The Schur index.
    pub p: u64,
    /// Labels of the automorphism subgroup fixing the splitting subfield.
    pub splitting_labels: Vec<u64>,
    /// Relative degree of the splitting subfield over the center.
    pub splitting_degree: usize,
    /// The cyclic generator label used for the unit family.
    pub generator_label: u64,
    /// The field element whose norm rescaled the generator's power scalar,
    /// when a normalization was applied.
    pub normalizer: Option<CyclotomicNumber>,
    /// Coefficients `(x, y)` of the quadratic dressing element
    /// `x + z y` when one was needed.
    pub beta: Option<(CyclotomicNumber, CyclotomicNumber)>,
    /// The inner family over the splitting subfield.
    pub l_units: MatrixUnitSet,
    /// The family of the centralizer part, from the dressed presentation.
    pub cen_units: MatrixUnitSet,
}

/// Failure of the prime-index pipeline.
#[derive(Clone, Debug, PartialEq)]
pub enum PrimeIndexError {
    /// The input does not qualify (split, undecided, or inconsistent).
    Rejected {
        /// Why.
        reason: String,
    },
    /// A bounded search stage was exhausted honestly.
    Unknown {
        /// Which stage.
        stage: String,
    },
    /// A dimension or closure identity that the construction guarantees
    /// did not hold.
    Structure {
        /// What was violated.
        context: String,
    },
    /// A sub-presentation failed to assemble.
    Presentation(PresentationError),
    /// An inner split construction failed.
    Split(SplitUnitsError),
    /// Composing the two corner families failed.
    Assembly(MatrixUnitFailure),
}

impl fmt::Display for PrimeIndexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeIndexError::Rejected { reason } => write!(f, "rejected: {reason}"),
            PrimeIndexError::Unknown { stage } => write!(f, "unknown: {stage}"),
            PrimeIndexError::Structure { context } => {
                write!(f, "structural identity violated: {context}")
            }
            PrimeIndexError::Presentation(e) => write!(f, "presentation error: {e}"),
            PrimeIndexError::Split(e) => write!(f, "split construction error: {e}"),
            PrimeIndexError::Assembly(e) => write!(f, "assembly error: {e}"),
        }
    }
}

/// Closure of a label set under composition.
fn close_labels(pres: &CrossedProductPresentation, gens: &[u64]) -> Vec<u64> {
    let mut set: BTreeSet<u64> = BTreeSet::new();
    set.insert(pres.identity_exponent());
    let mut frontier: Vec<u64> = vec![pres.identity_exponent()];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = pres.compose_exp(x, g);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

/// All proper subgroups of the automorphism group, as sorted label lists,
/// ordered by descending size then ascending member lists (so the smallest
/// splitting subfields are tried first).
fn label_subgroups(pres: &CrossedProductPresentation) -> Vec<Vec<u64>> {
    let gal: Vec<u64> = pres.gal().to_vec();
    let n = gal.len();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    for mask in 0u32..(1u32 << n.min(16)) {
        let gens: Vec<u64> = (0..n.min(16))
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| gal[i])
            .collect();
        seen.insert(close_labels(pres, &gens));
    }
    let mut subs: Vec<Vec<u64>> = seen.into_iter().filter(|s| s.len() < n).collect();
    subs.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    subs
}

/// Order of `a` in the quotient by the subgroup with the given sorted
/// members: the smallest `t >= 1` with `a^t` inside.
fn coset_order_in(pres: &CrossedProductPresentation, members: &[u64], a: u64) -> u64 {
    let mut cur = a;
    for t in 1..=(pres.gal().len() as u64) {
        if members.binary_search(&cur).is_ok() {
            return t;
        }
        cur = pres.compose_exp(cur, a);
    }
    pres.gal().len() as u64 + 1
}

/// Deterministic string key for exact join on field values.
fn value_key(c: &CyclotomicNumber) -> String {
    let mut s = String::new();
    for r in c.coords() {
        s.push_str(&format!("{r};"));
    }
    s
}

/// Visits every coordinate vector over `values` whose maximum entry height
/// is exactly `shell`; stops early when the visitor returns `true`.
fn for_each_shell_vector<F>(dim: usize, shell: u32, values: &[Rational], visit: &mut F) -> bool
where
    F: FnMut(&[Rational]) -> bool,
{
    let mut idx = vec![0usize; dim];
    loop {
        let max_h = idx
            .iter()
            .map(|&i| value_height(&values[i]))
            .max()
            .unwrap_or(0);
        if max_h == shell {
            let coords: Vec<Rational> = idx.iter().map(|&i| values[i].clone()).collect();
            if visit(&coords) {
                return true;
            }
        }
        let mut pos = 0usize;
        loop {
            if pos == dim {
                return false;
            }
            idx[pos] += 1;
            if idx[pos] < values.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Bounded search for a quadratic dressing element `beta = x + z_{a2} y`
/// with `(beta z_a)^2 = 1`, where `a` generates the presented automorphisms
/// (cyclic of order four) and `a2` is its square.
///
/// The square's component on the `a2` grading separates into an `x`-only
/// and a `y`-only part, so candidates meet in the middle: both sides are
/// enumerated over height shells of coefficient grids (odd multiples of a
/// fixed antisymmetric element, then elements of the quadratic subfield,
/// then the whole field) and joined on the exact value of that component.
/// Matched pairs whose full square is a central scalar are rescaled by a
/// subfield norm when possible.
fn beta_search(
    pres: &CrossedProductPresentation,
    a_lab: u64,
    a2_lab: u64,
    height_budget: u32,
) -> Option<(CrossedElem, CyclotomicNumber, CyclotomicNumber)> {
    let m = pres.conductor();
    let id_lab = pres.identity_exponent();
    let one_sym = CrossedElem::one(pres);
    let one = CyclotomicNumber::one(m);
    let u = CrossedElem::from_unit(pres, a_lab);
    let l_field = pres.e_field();
    let mut lp_gens: Vec<u64> = l_field.stabilizer().to_vec();
    lp_gens.push(a2_lab);
    let l_prime = SubfieldDescriptor::fixed_field(m, &lp_gens);
    // A fixed element antisymmetric under the square automorphism.
    let delta = l_field
        .basis()
        .iter()
        .map(|b| b.sub(&b.galois(a2_lab)))
        .find(|d| !d.is_zero())?;

    let build_beta = |x: &CyclotomicNumber, y: &CyclotomicNumber| -> CrossedElem {
        let mut beta = CrossedElem::zero(m);
        if !x.is_zero() {
            beta = beta.add(&CrossedElem::from_coeff(pres, id_lab, x.clone()));
        }
        if !y.is_zero() {
            beta = beta.add(&CrossedElem::from_coeff(pres, a2_lab, y.clone()));
        }
        beta
    };
    let square = |x: &CyclotomicNumber, y: &CyclotomicNumber| -> CrossedElem {
        let bu = build_beta(x, y).mul(pres, &u);
        bu.mul(pres, &bu)
    };
    let a2_component = |e: &CrossedElem| -> CyclotomicNumber {
        e.coeffs()
            .get(&a2_lab)
            .cloned()
            .unwrap_or_else(|| CyclotomicNumber::zero(m))
    };
    let zero_field = CyclotomicNumber::zero(m);

    // Attempt to fix up a matched pair whose square is a central scalar.
    let finish = |x: &CyclotomicNumber,
                  y: &CyclotomicNumber|
     -> Option<(CrossedElem, CyclotomicNumber, CyclotomicNumber)> {
        let s = square(x, y);
        if s == one_sym {
            return Some((build_beta(x, y), x.clone(), y.clone()));
        }
        // A single identity-graded central value can be rescaled away by a
        // norm from the quadratic subfield.
        if s.coeffs().len() != 1 {
            return None;
        }
        let t = s.coeffs().get(&id_lab)?.clone();
        if !pres.center().contains(&t) {
            return None;
        }
        let values_cap = search_values_up_to(height_budget);
        let lp_basis = l_prime.basis();
        let mut found: Option<CyclotomicNumber> = None;
        for shell in 1..=height_budget {
            if found.is_some() {
                break;
            }
            for_each_shell_vector(lp_basis.len(), shell, &values_cap, &mut |coords| {
                let mut mu = CyclotomicNumber::zero(m);
                for (c, b) in coords.iter().zip(lp_basis) {
                    if !c.is_zero() {
                        mu = mu.add(&b.scale(c));
                    }
                }
                if mu.is_zero() {
                    return false;
                }
                let norm = mu.mul(&mu.galois(a_lab));
                if norm.mul(&t) == one {
                    found = Some(mu);
                    return true;
                }
                false
            });
        }
        let mu = found?;
        let xs = x.mul(&mu);
        let ys = y.mul(&mu);
        if square(&xs, &ys) == one_sym {
            Some((build_beta(&xs, &ys), xs, ys))
        } else {
            None
        }
    };

    // Coefficient bases for the staged grids.
    let lp_basis: Vec<CyclotomicNumber> = l_prime.basis().to_vec();
    let odd_basis: Vec<CyclotomicNumber> = lp_basis.iter().map(|b| b.mul(&delta)).collect();
    let full_basis: Vec<CyclotomicNumber> = l_field.basis().to_vec();
    let stages: [(&[CyclotomicNumber], &[CyclotomicNumber]); 5] = [
        (&odd_basis, &odd_basis),
        (&lp_basis, &lp_basis),
        (&odd_basis, &lp_basis),
        (&lp_basis, &odd_basis),
        (&full_basis, &full_basis),
    ];

    for (bx, by) in stages {
        // Exact-value join maps: component value -> coefficient values.
        let mut x_map: BTreeMap<String, Vec<CyclotomicNumber>> = BTreeMap::new();
        let mut y_map: BTreeMap<String, Vec<CyclotomicNumber>> = BTreeMap::new();
        // The zero candidates participate from the start.
        x_map.insert(value_key(&zero_field), vec![zero_field.clone()]);
        y_map.insert(value_key(&zero_field), vec![zero_field.clone()]);
        let mut budget_used = 0usize;
        let mut result: Option<(CrossedElem, CyclotomicNumber, CyclotomicNumber)> = None;
        'shells: for shell in 1..=height_budget {
            let values = search_values_up_to(shell);
            // New x-candidates at this shell: insert, then probe existing y.
            let make_val = |coords: &[Rational], basis: &[CyclotomicNumber]| {
                let mut v = CyclotomicNumber::zero(m);
                for (c, b) in coords.iter().zip(basis) {
                    if !c.is_zero() {
                        v = v.add(&b.scale(c));
                    }
                }
                v
            };
            let mut overflow = false;
            for_each_shell_vector(bx.len(), shell, &values, &mut |coords| {
                budget_used += 1;
                if budget_used > SEARCH_CANDIDATE_CAP {
                    overflow = true;
                    return true;
                }
                let x = make_val(coords, bx);
                let fx = a2_component(&square(&x, &zero_field));
                let key = value_key(&fx);
                if let Some(ys) = y_map.get(&key) {
                    for y in ys.clone() {
                        if let Some(hit) = finish(&x, &y) {
                            result = Some(hit);
                            return true;
                        }
                    }
                }
                x_map.entry(key).or_default().push(x);
                false
            });
            if result.is_some() || overflow {
                break 'shells;
            }
            for_each_shell_vector(by.len(), shell, &values, &mut |coords| {
                budget_used += 1;
                if budget_used > SEARCH_CANDIDATE_CAP {
                    overflow = true;
                    return true;
                }
                let y = make_val(coords, by);
                let gy = a2_component(&square(&zero_field, &y)).neg();
                let key = value_key(&gy);
                if let Some(xs) = x_map.get(&key) {
                    for x in xs.clone() {
                        if let Some(hit) = finish(&x, &y) {
                            result = Some(hit);
                            return true;
                        }
                    }
                }
                y_map.entry(key).or_default().push(y);
                false
            });
            if result.is_some() || overflow {
                break 'shells;
            }
        }
        if result.is_some() {
            return result;
        }
    }
    None
}

/// Matrix units of a presentation with prime Schur index `p`.
///
/// The pipeline:
/// 1. find a subfield of the presented field, minimal by degree, that is
///    confirmed split by the decision cascade with explicit trivialized
///    units (the fixed field of the identity always qualifies, so this
///    terminates);
/// 2. build the inner matrix-unit family over that subfield by the
///    normal-element construction;
/// 3. assemble a cyclic unit family for the splitting field inside the
///    centralizer of the inner family, normalizing the generator's power
///    scalar to `-1` when the index is two;
/// 4. descend one index-`p` step to a smaller subfield, dressing the
///    generator with a quadratic element so the dressed presentation has a
///    trivial factor set, and run the normal-element construction there;
/// 5. multiply the two commuting families into the corner family of the
///    presented algebra.
///
/// Every bounded search reports an honest `Unknown` stage when exhausted.
pub fn prime_index_matrix_units(
    group: &FiniteGroup,
    pres: &CrossedProductPresentation,
    decision: &SchurDecision,
    config: &DecisionConfig,
    overrides: &PrimeIndexOverrides,
) -> Result<(MatrixUnitSet, PrimeIndexReport), PrimeIndexError> {
    let p = match decision.verdict {
        SchurVerdict::Prime(p) => p,
        SchurVerdict::Split => {
            return Err(PrimeIndexError::Rejected {
                reason: String::from(
                    "the presentation is split; use the normal-element construction",
                ),
            })
        }
        SchurVerdict::Unknown => {
            return Err(PrimeIndexError::Rejected {
                reason: String::from("the Schur index is undecided"),
            })
        }
    };
    let m = pres.conductor();
    let gal: Vec<u64> = pres.gal().to_vec();
    let n_gal = gal.len() as u64;
    if n_gal == 1 {
        return Err(PrimeIndexError::Rejected {
            reason: String::from("a commutative presentation cannot carry a nontrivial index"),
        });
    }
    if !is_p_power(n_gal, p) {
        return Err(PrimeIndexError::Unknown {
            stage: String::from(
                "the automorphism group is not a p-group; decompose along Sylow parts first",
            ),
        });
    }
    let sub_config = DecisionConfig {
        oracle: None,
        component_key: None,
        ..config.clone()
    };

    // Step 1: a confirmed splitting subfield with trivialized units.
    let candidate_subgroups: Vec<Vec<u64>> = match &overrides.splitting_subgroup {
        Some(forced) => {
            let mut f = forced.clone();
            f.sort_unstable();
            f.dedup();
            vec![f]
        }
        None => label_subgroups(pres),
    };
    let mut chosen: Option<(
        Vec<u64>,
        CrossedProductPresentation,
        BTreeMap<u64, CyclotomicNumber>,
    )> = None;
    for u_set in candidate_subgroups {
        let restricted = pres
            .restrict_to_subgroup(group, &u_set)
            .map_err(PrimeIndexError::Presentation)?;
        let d = schur_decision(group, &restricted, &sub_config);
        if let SchurVerdict::Split = d.verdict {
            if let SchurWitness::TrivializedUnits { multipliers } = d.witness {
                chosen = Some((u_set, restricted, multipliers));
                break;
            }
        }
    }
    let (u_set, restricted, multipliers) = chosen.ok_or_else(|| PrimeIndexError::Unknown {
        stage: String::from("no splitting subfield with trivialized units within budget"),
    })?;
    let quot = n_gal / u_set.len() as u64;
    let p_r = quot as usize;

    // Step 2: the inner family over the splitting subfield.
    let trivialized_l = restricted
        .with_rescaled_units(group, &multipliers)
        .map_err(PrimeIndexError::Presentation)?;
    let l_units = split_abelian_matrix_units(
        group,
        &trivialized_l,
        overrides.l_normal_element.as_ref(),
        config.seed,
    )
    .map_err(PrimeIndexError::Split)?;
    let l_descriptor = restricted.center().clone();

    // Step 3: the centralizer of the inner family and a cyclic unit family
    // for the splitting field inside it.
    let cen: SubalgebraBasis = if u_set.len() == 1 {
        pres.carrier().clone()
    } else {
        let gens: Vec<GroupAlgebraElement> = l_units
            .units()
            .iter()
            .flat_map(|row| row.iter().cloned())
            .collect();
        let basis = centralizer_subspace(group, &gens, pres.carrier());
        SubalgebraBasis::new(group, pres.identity().clone(), basis)
    };
    let expected_cen = p_r * p_r * pres.center().degree();
    if cen.dimension() != expected_cen {
        return Err(PrimeIndexError::Structure {
            context: format!(
                "centralizer dimension {} differs from the expected {}",
                cen.dimension(),
                expected_cen
            ),
        });
    }
    let g_star = match overrides.generator_label {
        Some(a) => {
            if !gal.contains(&a) || coset_order_in(pres, &u_set, a) != quot {
                return Err(PrimeIndexError::Rejected {
                    reason: String::from(
                        "the forced generator label does not generate the quotient",
                    ),
                });
            }
            a
        }
        None => gal
            .iter()
            .copied()
            .filter(|&a| coset_order_in(pres, &u_set, a) == quot)
            .min()
            .ok_or_else(|| PrimeIndexError::Unknown {
                stage: String::from("the splitting-field automorphism group is not cyclic"),
            })?,
    };
    // Raw power exponents of the generator, in the parent's convention.
    let mut raws: Vec<u64> = Vec::with_capacity(p_r);
    let mut cur = pres.identity_exponent();
    for _ in 0..p_r {
        raws.push(cur);
        cur = pres.compose_exp(cur, g_star);
    }
    let labels: Vec<u64> = raws
        .iter()
        .map(|&e| canon_exp_in(&l_descriptor, e))
        .collect();
    let images: Vec<GroupAlgebraElement> = l_descriptor
        .basis()
        .iter()
        .map(|b| pres.embed(b))
        .collect();

    let q = p_r / p as usize;
    let mut normalizer: Option<CyclotomicNumber> = None;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x9e37_79b9);

    let assemble_family =
        |family: &[GroupAlgebraElement]| -> Result<CrossedProductPresentation, PrimeIndexError> {
            let mut units_map: BTreeMap<u64, GroupAlgebraElement> = BTreeMap::new();
            for (i, lab) in labels.iter().enumerate() {
                units_map.insert(*lab, family[i].clone());
            }
            CrossedProductPresentation::assemble(
                group,
                config.seed,
                m,
                l_descriptor.clone(),
                images.clone(),
                labels.clone(),
                units_map,
                pres.identity().clone(),
            )
            .map_err(PrimeIndexError::Presentation)
        };
    let powers_of = |u1: &GroupAlgebraElement| -> Vec<GroupAlgebraElement> {
        let mut fam: Vec<GroupAlgebraElement> = Vec::with_capacity(p_r);
        fam.push(pres.identity().clone());
        let mut acc = pres.identity().clone();
        for _ in 1..p_r {
            acc = acc.mul(group, u1);
            fam.push(acc.clone());
        }
        fam
    };

    let p_l: CrossedProductPresentation = if let Some(fam) = &overrides.u_family {
        if fam.len() != p_r {
            return Err(PrimeIndexError::Rejected {
                reason: format!(
                    "the supplied unit family has {} entries, expected {}",
                    fam.len(),
                    p_r
                ),
            });
        }
        if fam[0] != *pres.identity() {
            return Err(PrimeIndexError::Rejected {
                reason: String::from("the supplied unit family must start with the identity"),
            });
        }
        for u in fam {
            if !cen.contains(group, u) {
                return Err(PrimeIndexError::Rejected {
                    reason: String::from(
                        "a supplied unit lies outside the centralizer of the inner family",
                    ),
                });
            }
        }
        assemble_family(fam)?
    } else {
        let u1 = if u_set.len() == 1 {
            pres.unit(g_star).clone()
        } else {
            solve_unit_in(group, &cen, &images, &l_descriptor, g_star, &mut rng).ok_or_else(
                || PrimeIndexError::Unknown {
                    stage: String::from(
                        "no invertible unit realizing the splitting-field generator inside \
                         the centralizer",
                    ),
                },
            )?
        };
        let raw_pres = assemble_family(&powers_of(&u1))?;
        if q == 2 {
            // Normalize the generator's power scalar to -1 so the dressing
            // grids stay small. The ramification witness already carries a
            // suitable field element when the decision came from it.
            let lam = unit_power_scalar(&raw_pres, labels[1], p_r as u64);
            let minus_one = CyclotomicNumber::one(m).neg();
            if lam != minus_one {
                let orbit_norm = |x: &CyclotomicNumber| -> CyclotomicNumber {
                    let mut acc = CyclotomicNumber::one(m);
                    for &e in &raws {
                        acc = acc.mul(&x.galois(e));
                    }
                    acc
                };
                let mut dress: Option<CyclotomicNumber> = None;
                if let SchurWitness::Ramification {
                    normalizer: witness_x,
                    ..
                } = &decision.witness
                {
                    let x = witness_x.promote(m);
                    if l_descriptor.contains(&x) && orbit_norm(&x).mul(&lam) == minus_one {
                        dress = Some(x);
                    }
                }
                if dress.is_none() {
                    dress = norm_equation_solve(
                        &raw_pres,
                        labels[1],
                        p_r as u64,
                        &lam.neg(),
                        config.height_budget,
                    );
                }
                if let Some(x) = dress {
                    let dressed_u1 = u1.mul(group, &pres.embed(&x));
                    normalizer = Some(x);
                    assemble_family(&powers_of(&dressed_u1))?
                } else {
                    raw_pres
                }
            } else {
                raw_pres
            }
        } else {
            raw_pres
        }
    };
    if p_l.carrier().dimension() != cen.dimension() {
        return Err(PrimeIndexError::Structure {
            context: String::from(
                "the splitting field and its unit family do not exhaust the centralizer",
            ),
        });
    }

    // Step 4: descend one index-p step and trivialize by dressing.
    let (dressed, beta_coeffs): (
        CrossedProductPresentation,
        Option<(CyclotomicNumber, CyclotomicNumber)>,
    ) = if q == 1 {
        let d = p_l
            .restrict_to_subgroup(group, &[p_l.identity_exponent()])
            .map_err(PrimeIndexError::Presentation)?;
        (d, None)
    } else if q == 2 {
        let a_lab = labels[1];
        let a2_lab = labels[2];
        let (beta, x, y) =
            beta_search(&p_l, a_lab, a2_lab, config.height_budget).ok_or_else(|| {
                PrimeIndexError::Unknown {
                    stage: String::from(
                        "no quadratic dressing element within the height budget",
                    ),
                }
            })?;
        let w_sym = beta.mul(&p_l, &CrossedElem::from_unit(&p_l, a_lab));
        if w_sym.mul(&p_l, &w_sym) != CrossedElem::one(&p_l) {
            return Err(PrimeIndexError::Structure {
                context: String::from("the dressed generator does not square to the identity"),
            });
        }
        let w_gen = p_l.realize(group, &w_sym);
        let mut lp_gens: Vec<u64> = l_descriptor.stabilizer().to_vec();
        lp_gens.push(a2_lab);
        let l_prime = SubfieldDescriptor::fixed_field(m, &lp_gens);
        let lp_images: Vec<GroupAlgebraElement> = l_prime
            .basis()
            .iter()
            .map(|b| pres.embed(b))
            .collect();
        let lp_id = canon_exp_in(&l_prime, p_l.identity_exponent());
        let lp_gen = canon_exp_in(&l_prime, a_lab);
        let mut units_map: BTreeMap<u64, GroupAlgebraElement> = BTreeMap::new();
        units_map.insert(lp_id, pres.identity().clone());
        units_map.insert(lp_gen, w_gen);
        let d = CrossedProductPresentation::assemble(
            group,
            config.seed,
            m,
            l_prime,
            lp_images,
            vec![lp_id, lp_gen],
            units_map,
            pres.identity().clone(),
        )
        .map_err(PrimeIndexError::Presentation)?;
        (d, Some((x, y)))
    } else {
        return Err(PrimeIndexError::Unknown {
            stage: String::from("unit dressing beyond a quadratic tower"),
        });
    };
    // The dressed factor set must be trivial by construction.
    let one = CyclotomicNumber::one(m);
    for &a in dressed.gal() {
        for &b in dressed.gal() {
            if dressed.tau_value(a, b) != one {
                return Err(PrimeIndexError::Structure {
                    context: String::from("the dressed factor set is not trivial"),
                });
            }
        }
    }

    let cen_units = split_abelian_matrix_units(
        group,
        &dressed,
        overrides.normal_element.as_ref(),
        config.seed,
    )
    .map_err(PrimeIndexError::Split)?;

    // Step 5: the corner family of the whole presented algebra.
    let corner = assemble_component_units(group, &l_units, &cen_units)
        .map_err(PrimeIndexError::Assembly)?;
    let mut corner = corner;
    corner.provenance = UnitsProvenance::PrimeIndex {
        p,
        splitting_degree: p_r,
    };
    let report = PrimeIndexReport {
        p,
        splitting_labels: u_set,
        splitting_degree: p_r,
        generator_label: g_star,
        normalizer,
        beta: beta_coeffs,
        l_units,
        cen_units,
    };
    Ok((corner, report))
}

// ---------------------------------------------------------------------------
// The whole-component pipeline.
// ---------------------------------------------------------------------------

/// Budgets, seed, overrides, and sampling depth for the component pipeline.
#[derive(Clone, Debug)]
pub struct UnitsConfig {
    /// Decision-cascade configuration (budgets, seed, optional oracle).
    pub decision: DecisionConfig,
    /// Injected values for the prime-index pipeline.
    pub overrides: PrimeIndexOverrides,
    /// Number of seeded corner samples the final verification draws.
    pub corner_samples: usize,
}

impl UnitsConfig {
    /// Default budgets with the given seed.
    pub fn new(seed: u64) -> Self {
        UnitsConfig {
            decision: DecisionConfig::new(seed),
            overrides: PrimeIndexOverrides::default(),
            corner_samples: 50,
        }
    }
}

/// Failure of the component pipeline.
#[derive(Clone, Debug)]
pub enum UnitsError {
    /// Building or verifying the presentation failed.
    Presentation(PresentationError),
    /// The Schur decision did not settle; notes name the exhausted stages.
    Undecided {
        /// One note per exhausted stage.
        notes: Vec<String>,
    },
    /// The component is split but no trivialized units are available to
    /// drive the normal-element construction.
    TrivializationUnavailable,
    /// The split construction failed.
    Split(SplitUnitsError),
    /// The prime-index pipeline failed.
    Prime(PrimeIndexError),
    /// The Sylow decomposition failed.
    Sylow(SylowSplitError),
    /// A final verification failed.
    Verify(MatrixUnitFailure),
    /// The family size disagrees with the primitive-idempotent count.
    PrimitiveCount {
        /// Size found.
        found: usize,
        /// Size expected.
        expected: usize,
    },
}

impl fmt::Display for UnitsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitsError::Presentation(e) => write!(f, "presentation error: {e}"),
            UnitsError::Undecided { notes } => {
                write!(f, "Schur index undecided")?;
                for n in notes {
                    write!(f, "; {n}")?;
                }
                Ok(())
            }
            UnitsError::TrivializationUnavailable => {
                write!(f, "split component without trivialized units")
            }
            UnitsError::Split(e) => write!(f, "split construction error: {e}"),
            UnitsError::Prime(e) => write!(f, "prime-index pipeline error: {e}"),
            UnitsError::Sylow(e) => write!(f, "Sylow decomposition error: {e}"),
            UnitsError::Verify(e) => write!(f, "verification failed: {e}"),
            UnitsError::PrimitiveCount { found, expected } => {
                write!(f, "found {found} idempotents, expected {expected}")
            }
        }
    }
}

/// Everything the component pipeline produced.
#[derive(Clone, Debug)]
pub struct ComponentUnits {
    /// The verified presentation (scaffold and corner crossed product).
    pub presentation: ComponentPresentation,
    /// The Schur decision that routed the construction.
    pub decision: SchurDecision,
    /// The Schur index used (1 when split).
    pub index: u64,
    /// Corner-side family of the centralizer algebra.
    pub corner_units: MatrixUnitSet,
    /// The full component family, in the ambient group algebra.
    pub component_units: MatrixUnitSet,
    /// The prime-index report when that pipeline ran.
    pub prime_report: Option<PrimeIndexReport>,
}

/// Builds, decides, constructs, and verifies the complete matrix-unit
/// family of the component attached to a certified chain.
///
/// The primitive-idempotent count obeys `n = k * (d / index)` where `k` is
/// the transversal grid size and `d` the presented field degree; the final
/// family is checked entry by entry, its first corner must have dimension
/// `index^2 * [F:Q]`, and seeded nonzero corner samples must all be
/// invertible (primitivity).
pub fn component_matrix_units(
    group: &FiniteGroup,
    cert: &GsspCertificate,
    config: &UnitsConfig,
) -> Result<ComponentUnits, UnitsError> {
    let built =
        build_presentation(group, cert, config.decision.seed).map_err(UnitsError::Presentation)?;
    let decision = schur_decision(group, &built.pres, &config.decision);
    let (index, corner_units, prime_report) = match decision.verdict {
        SchurVerdict::Split => {
            let multipliers = match &decision.witness {
                SchurWitness::TrivializedUnits { multipliers } => multipliers.clone(),
                _ => return Err(UnitsError::TrivializationUnavailable),
            };
            let triv = built
                .pres
                .with_rescaled_units(group, &multipliers)
                .map_err(UnitsError::Presentation)?;
            let cu = split_abelian_matrix_units(
                group,
                &triv,
                config.overrides.normal_element.as_ref(),
                config.decision.seed,
            )
            .map_err(UnitsError::Split)?;
            (1u64, cu, None)
        }
        SchurVerdict::Prime(p) => {
            if is_p_power(built.pres.gal().len() as u64, p) {
                let (cu, rep) = prime_index_matrix_units(
                    group,
                    &built.pres,
                    &decision,
                    &config.decision,
                    &config.overrides,
                )
                .map_err(UnitsError::Prime)?;
                (p, cu, Some(rep))
            } else {
                // Composite automorphism group: factor along the Sylow
                // decomposition, solve each part, and recombine.
                let parts = sylow_split(group, &built.pres, p, config.decision.height_budget)
                    .map_err(UnitsError::Sylow)?;
                let split_units = split_abelian_matrix_units(
                    group,
                    &parts.split_part,
                    None,
                    config.decision.seed,
                )
                .map_err(UnitsError::Split)?;
                let p_decision = schur_decision(group, &parts.p_part, &config.decision);
                let (p_units, rep) = match p_decision.verdict {
                    SchurVerdict::Prime(pp) if pp == p => prime_index_matrix_units(
                        group,
                        &parts.p_part,
                        &p_decision,
                        &config.decision,
                        &config.overrides,
                    )
                    .map_err(UnitsError::Prime)?,
                    _ => {
                        return Err(UnitsError::Undecided {
                            notes: vec![String::from(
                                "the Sylow part did not confirm the prime index",
                            )],
                        })
                    }
                };
                let combined = assemble_component_units(group, &split_units, &p_units)
                    .map_err(UnitsError::Verify)?;
                (p, combined, Some(rep))
            }
        }
        SchurVerdict::Unknown => {
            let notes = match decision.witness {
                SchurWitness::Inconclusive { ref notes } => notes.clone(),
                _ => Vec::new(),
            };
            return Err(UnitsError::Undecided { notes });
        }
    };
    let b_set = transversal_matrix_units(group, &built.scaffold).map_err(UnitsError::Verify)?;
    let transported = transport_matrix_units(group, &built.scaffold, &corner_units);
    let full =
        assemble_component_units(group, &b_set, &transported).map_err(UnitsError::Verify)?;
    let k = built.scaffold.matrix_size() as u64;
    let d = built.pres.gal().len() as u64;
    if d % index != 0 {
        return Err(UnitsError::PrimitiveCount {
            found: full.n(),
            expected: 0,
        });
    }
    let expected_n = (k * (d / index)) as usize;
    if full.n() != expected_n {
        return Err(UnitsError::PrimitiveCount {
            found: full.n(),
            expected: expected_n,
        });
    }
    let corner_check = CornerCheck {
        expected_dimension: (index * index) as usize * built.pres.center().degree(),
        samples: config.corner_samples,
        seed: config.decision.seed,
    };
    verify_matrix_units(group, &full, Some(&corner_check)).map_err(UnitsError::Verify)?;
    Ok(ComponentUnits {
        presentation: built,
        decision,
        index,
        corner_units,
        component_units: full,
        prime_report,
    })
}
