//! On-disk JSON encodings for exact values: rationals as `"p/q"` strings,
//! cyclotomic numbers by conductor and power-basis coordinates, group
//! algebra elements as sparse coefficient maps, and the matrix-unit file.
//!
//! Every encoder walks deterministic containers (structs and `BTreeMap`s),
//! so equal inputs serialize to byte-identical JSON.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use wedderburn_core::cyclotomic::phi;
use wedderburn_core::{
    CyclotomicNumber, FiniteGroup, GroupAlgebraElement, MatrixUnitSet, Rational, UnitsProvenance,
};

/// Renders a rational as `numerator/denominator`, always with an explicit
/// positive denominator.
pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| format!("invalid numerator in rational {s:?}"))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| format!("invalid denominator in rational {s:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in rational {s:?}"));
    }
    Ok(Rational::new(n, d))
}

/// A cyclotomic number: conductor plus coordinates on the power basis
/// `1, zeta, ..., zeta^(phi(m)-1)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CycJson {
    pub conductor: u64,
    pub coords: Vec<String>,
}

pub fn cyc_to_json(x: &CyclotomicNumber) -> CycJson {
    CycJson {
        conductor: x.conductor(),
        coords: x.coords().iter().map(rational_to_string).collect(),
    }
}

pub fn cyc_from_json(j: &CycJson) -> Result<CyclotomicNumber, String> {
    if j.conductor == 0 {
        return Err(String::from("cyclotomic conductor must be positive"));
    }
    let expected = phi(j.conductor) as usize;
    if j.coords.len() != expected {
        return Err(format!(
            "cyclotomic number at conductor {} needs {} coordinates, found {}",
            j.conductor,
            expected,
            j.coords.len()
        ));
    }
    let mut coords = Vec::with_capacity(expected);
    for c in &j.coords {
        coords.push(parse_rational(c)?);
    }
    Ok(CyclotomicNumber::from_poly(j.conductor, coords))
}

/// A group algebra element: the order of its group (a consistency stamp)
/// and nonzero coefficients keyed by element index.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ElemJson {
    pub group: u32,
    pub terms: BTreeMap<String, String>,
}

pub fn elem_to_json(order: u32, e: &GroupAlgebraElement) -> ElemJson {
    let mut terms = BTreeMap::new();
    for (g, r) in e.terms() {
        if !r.is_zero() {
            terms.insert(g.to_string(), rational_to_string(r));
        }
    }
    ElemJson {
        group: order,
        terms,
    }
}

pub fn elem_from_json(j: &ElemJson, group: &FiniteGroup) -> Result<GroupAlgebraElement, String> {
    if j.group != group.order() {
        return Err(format!(
            "element is stamped with group order {}, but the group has order {}",
            j.group,
            group.order()
        ));
    }
    let mut terms: BTreeMap<u32, Rational> = BTreeMap::new();
    for (key, value) in &j.terms {
        let g: u32 = key
            .parse()
            .map_err(|_| format!("invalid element index {key:?}"))?;
        if g >= group.order() {
            return Err(format!(
                "element index {} is out of range for a group of order {}",
                g,
                group.order()
            ));
        }
        let r = parse_rational(value)?;
        if !r.is_zero() {
            terms.insert(g, r);
        }
    }
    Ok(GroupAlgebraElement::from_terms(terms))
}

/// Identifies the group a units file belongs to.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupStampJson {
    pub name: String,
    pub order: u32,
}

/// How a set of matrix units was constructed, with the exact field data
/// the construction solved for. Ignored by verification.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProvenanceJson {
    /// Conjugates of a corner idempotent along a subgroup transversal.
    TransversalGrid,
    /// Split crossed product: a normal element and the solved coefficients
    /// of the conjugating unit.
    SplitAbelian {
        normal_element: CycJson,
        alpha: Vec<CycJson>,
    },
    /// Division part of prime Schur index `p`, realized over a splitting
    /// subfield of the given degree.
    PrimeIndex { p: u64, splitting_degree: u64 },
    /// Kronecker grid of two commuting families.
    Product {
        left: Box<ProvenanceJson>,
        right: Box<ProvenanceJson>,
    },
}

pub fn provenance_to_json(p: &UnitsProvenance) -> ProvenanceJson {
    match p {
        UnitsProvenance::TransversalGrid => ProvenanceJson::TransversalGrid,
        UnitsProvenance::SplitAbelian {
            normal_element,
            alpha,
        } => ProvenanceJson::SplitAbelian {
            normal_element: cyc_to_json(normal_element),
            alpha: alpha.iter().map(cyc_to_json).collect(),
        },
        UnitsProvenance::PrimeIndex {
            p,
            splitting_degree,
        } => ProvenanceJson::PrimeIndex {
            p: *p,
            splitting_degree: *splitting_degree as u64,
        },
        UnitsProvenance::Product { left, right } => ProvenanceJson::Product {
            left: Box::new(provenance_to_json(left)),
            right: Box::new(provenance_to_json(right)),
        },
    }
}

/// The matrix-unit file: the component identity, the block size `n`, and
/// the full `n x n` grid of units (`units[i][j]` is `u_ij`; the diagonal
/// holds the primitive orthogonal idempotents).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixUnitSetJson {
    pub group: GroupStampJson,
    pub n: usize,
    pub identity: ElemJson,
    pub units: Vec<Vec<ElemJson>>,
    /// Optional human-readable note on how the units were built; ignored
    /// by verification.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
    /// Optional structured construction record; ignored by verification.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceJson>,
}

pub fn unit_set_to_json(name: &str, group: &FiniteGroup, set: &MatrixUnitSet) -> MatrixUnitSetJson {
    let order = group.order();
    let units = set
        .units()
        .iter()
        .map(|row| row.iter().map(|u| elem_to_json(order, u)).collect())
        .collect();
    MatrixUnitSetJson {
        group: GroupStampJson {
            name: name.to_string(),
            order,
        },
        n: set.n(),
        identity: elem_to_json(order, set.identity()),
        units,
        construction: Some(describe_provenance(set.provenance())),
        provenance: Some(provenance_to_json(set.provenance())),
    }
}

/// Short human description of a construction tree.
pub fn describe_provenance(p: &UnitsProvenance) -> String {
    match p {
        UnitsProvenance::TransversalGrid => String::from("transversal-grid"),
        UnitsProvenance::SplitAbelian { alpha, .. } => {
            format!("split-abelian(galois-degree={})", alpha.len())
        }
        UnitsProvenance::PrimeIndex {
            p,
            splitting_degree,
        } => format!("prime-index(p={p}, splitting-degree={splitting_degree})"),
        UnitsProvenance::Product { left, right } => format!(
            "product({}, {})",
            describe_provenance(left),
            describe_provenance(right)
        ),
    }
}

/// A permutation group given by generators: images of `0..degree` per
/// generator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFileJson {
    pub degree: u32,
    pub generators: Vec<Vec<u32>>,
    #[serde(default)]
    pub name: Option<String>,
}
