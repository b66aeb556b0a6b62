//! Subgroup pairs that realize simple components, and the inductive
//! centralizer chains that certify their matrix structure.
//!
//! A pair `(H, K)` with `K` normal in `H` and `H/K` cyclic realizes a simple
//! component of `QG` exactly when the induced character is irreducible. A
//! chain `H = H_0 <= H_1 <= ... <= H_n = G` certifies the component's
//! matrix decomposition when, at every level, `H_i` is normal in the
//! centralizer of the level idempotent inside `H_{i+1}` and the distinct
//! conjugates of that idempotent are mutually orthogonal.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use crate::algebra::{
    ideal_dimension, primitive_central_idempotent, GroupAlgebraElement, IdempotentError,
};
use crate::group::{FiniteGroup, Subgroup};
use crate::rational::Rational;

/// Why `(H, K)` is not a component-realizing pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShodaFailure {
    /// `K` is not a normal subgroup of `H`.
    NotNormal,
    /// `H/K` is not cyclic.
    QuotientNotCyclic,
    /// An element `g` outside `H` has `[H, g] intersect H` inside `K`,
    /// so the induced character cannot be irreducible.
    Escaping {
        /// The offending group element.
        witness: u32,
    },
}

impl fmt::Display for ShodaFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShodaFailure::NotNormal => write!(f, "K is not normal in H"),
            ShodaFailure::QuotientNotCyclic => write!(f, "H/K is not cyclic"),
            ShodaFailure::Escaping { witness } => write!(
                f,
                "element {} outside H has [H, g] meeting H inside K",
                witness
            ),
        }
    }
}

/// Checks the group-theoretic conditions for `(H, K)` to realize a simple
/// component: `K` normal in `H` with cyclic quotient, and every `g` in `G`
/// whose commutators `[H, g]` meet `H` inside `K` already lies in `H`.
pub fn is_shoda_pair(group: &FiniteGroup, h: &Subgroup, k: &Subgroup) -> Result<(), ShodaFailure> {
    if !k.is_subgroup_of(h) || !k.is_normal_in(group, h) {
        return Err(ShodaFailure::NotNormal);
    }
    if h.quotient_cyclic_generator(group, k).is_none() {
        return Err(ShodaFailure::QuotientNotCyclic);
    }
    for g in 0..group.order() {
        if h.contains(g) {
            continue;
        }
        let comm = h.commutator_with_element(group, g);
        let meets_inside_k = comm
            .members()
            .iter()
            .all(|&m| !h.contains(m) || k.contains(m));
        if meets_inside_k {
            return Err(ShodaFailure::Escaping { witness: g });
        }
    }
    Ok(())
}

/// A verified inductive chain for a component-realizing pair, together with
/// all data the matrix-unit construction consumes.
#[derive(Clone, Debug)]
pub struct GsspCertificate {
    /// The subgroup `H` carrying the linear character.
    pub h: Subgroup,
    /// The character kernel `K`, normal in `H` with cyclic quotient.
    pub k: Subgroup,
    /// Element of `H` whose coset generates `H/K`.
    pub lambda_generator: u32,
    /// The chain `H = chain[0] <= ... <= chain[n] = G`.
    pub chain: Vec<Subgroup>,
    /// Level centralizers `C_i` of the level idempotent inside `chain[i+1]`.
    pub centralizers: Vec<Subgroup>,
    /// Level indices `k_i = [chain[i+1] : C_i]`.
    pub level_indices: Vec<u32>,
    /// `k`, the product of the `k_i`: the size of the outer matrix block.
    pub matrix_size: u32,
    /// The product of the `|C_i / chain[i]|`: the degree of the maximal
    /// subfield over the center, equal to `[G:H] / k`.
    pub field_degree: u32,
    /// Left-coset representatives of `C_i` in `chain[i+1]`, identity first.
    pub level_transversals: Vec<Vec<u32>>,
    /// Products `t_0 t_1 ... t_{n-1}` over the level transversals, in
    /// row-major order (last level fastest); `transversal[0]` is the
    /// identity and the count is `k`.
    pub transversal: Vec<u32>,
    /// The idempotents `e_i` attached to the induced character at every
    /// chain level, ending with the component's central idempotent.
    pub level_idempotents: Vec<GroupAlgebraElement>,
}

impl GsspCertificate {
    /// The component's primitive central idempotent `e` in `QG`.
    pub fn component_idempotent(&self) -> &GroupAlgebraElement {
        self.level_idempotents
            .last()
            .expect("certificate always stores the top-level idempotent")
    }
}

/// Why a proposed chain failed verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainFailure {
    /// The chain is not of the required shape (wrong endpoints, not
    /// nested, or the pair data is inconsistent).
    Malformed(String),
    /// The character induced to `chain[level]` is reducible; at the top
    /// level this means `(H, K)` is not a component-realizing pair.
    Reducible {
        /// Chain level whose induced character is reducible.
        level: usize,
        /// Exact self inner product of that induced character.
        norm: Rational,
    },
    /// `chain[level]` is not normal in the centralizer of the level
    /// idempotent inside `chain[level + 1]`.
    NotNormalInCentralizer {
        /// The failing level.
        level: usize,
    },
    /// Two distinct conjugates of the level idempotent are not orthogonal.
    OverlappingConjugates {
        /// The failing level.
        level: usize,
        /// Conjugating element for the first idempotent.
        by_a: u32,
        /// Conjugating element for the second idempotent.
        by_b: u32,
    },
}

impl fmt::Display for ChainFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainFailure::Malformed(why) => write!(f, "malformed chain: {}", why),
            ChainFailure::Reducible { level, norm } => write!(
                f,
                "induced character at chain level {} is reducible (self inner product {})",
                level, norm
            ),
            ChainFailure::NotNormalInCentralizer { level } => write!(
                f,
                "chain level {} is not normal in the centralizer of its idempotent",
                level
            ),
            ChainFailure::OverlappingConjugates { level, by_a, by_b } => write!(
                f,
                "conjugates of the level-{} idempotent by {} and {} are not orthogonal",
                level, by_a, by_b
            ),
        }
    }
}

/// Elements of `amb` fixing `e` under conjugation.
fn conjugation_centralizer(
    group: &FiniteGroup,
    amb: &Subgroup,
    e: &GroupAlgebraElement,
) -> Subgroup {
    let members: Vec<u32> = amb
        .members()
        .iter()
        .copied()
        .filter(|&c| e.conjugate(group, c) == *e)
        .collect();
    Subgroup::from_members(group, members)
}

/// Verifies one chain transition: normality of `lower` in the centralizer
/// and mutual orthogonality of the distinct conjugates of `e_lower`.
fn check_transition(
    group: &FiniteGroup,
    level: usize,
    lower: &Subgroup,
    upper: &Subgroup,
    e_lower: &GroupAlgebraElement,
) -> Result<(Subgroup, Vec<u32>), ChainFailure> {
    let cen = conjugation_centralizer(group, upper, e_lower);
    if !lower.is_subgroup_of(&cen) || !lower.is_normal_in(group, &cen) {
        return Err(ChainFailure::NotNormalInCentralizer { level });
    }
    let transversal = cen.left_transversal(group, upper);
    // Right-coset representatives (inverses of the left ones) enumerate the
    // distinct conjugates exactly once.
    let conjugators: Vec<u32> = transversal.iter().map(|&r| group.inv(r)).collect();
    let conjugates: Vec<GroupAlgebraElement> = conjugators
        .iter()
        .map(|&c| e_lower.conjugate(group, c))
        .collect();
    for i in 0..conjugates.len() {
        for j in (i + 1)..conjugates.len() {
            assert!(
                conjugates[i] != conjugates[j],
                "coset representatives must give distinct conjugates"
            );
            if !conjugates[i].mul(group, &conjugates[j]).is_zero()
                || !conjugates[j].mul(group, &conjugates[i]).is_zero()
            {
                return Err(ChainFailure::OverlappingConjugates {
                    level,
                    by_a: conjugators[i],
                    by_b: conjugators[j],
                });
            }
        }
    }
    Ok((cen, transversal))
}

/// Verifies a proposed chain for `(H, K)` with the given quotient generator
/// and assembles the certificate consumed by the matrix-unit construction.
pub fn verify_strong_chain(
    group: &FiniteGroup,
    h: &Subgroup,
    k: &Subgroup,
    generator: u32,
    chain: &[Subgroup],
) -> Result<GsspCertificate, ChainFailure> {
    if chain.is_empty() {
        return Err(ChainFailure::Malformed(String::from("chain is empty")));
    }
    if chain[0].members() != h.members() {
        return Err(ChainFailure::Malformed(String::from(
            "chain must start at H",
        )));
    }
    if chain[chain.len() - 1].members() != group.whole().members() {
        return Err(ChainFailure::Malformed(String::from(
            "chain must end at the whole group",
        )));
    }
    for i in 0..chain.len() - 1 {
        if !chain[i].is_subgroup_of(&chain[i + 1]) {
            return Err(ChainFailure::Malformed(format!(
                "chain level {} is not contained in level {}",
                i,
                i + 1
            )));
        }
        if chain[i].order() == chain[i + 1].order() {
            return Err(ChainFailure::Malformed(format!(
                "chain levels {} and {} coincide",
                i,
                i + 1
            )));
        }
    }
    if !k.is_subgroup_of(h) || !k.is_normal_in(group, h) {
        return Err(ChainFailure::Malformed(String::from(
            "K must be normal in H",
        )));
    }
    if !h.contains(generator)
        || h.coset_order(group, k, generator) != k.index_in(h)
    {
        return Err(ChainFailure::Malformed(String::from(
            "generator's coset must generate the cyclic quotient H/K",
        )));
    }

    // Walk the chain in order: build each level idempotent (with an exact
    // irreducibility check) and verify the transition before moving up, so
    // a failure is reported at the first level where it occurs.
    let mut level_idempotents = Vec::with_capacity(chain.len());
    let mut centralizers = Vec::new();
    let mut level_indices = Vec::new();
    let mut level_transversals = Vec::new();
    let mut matrix_size: u32 = 1;
    let mut field_degree: u32 = 1;
    for (level, amb) in chain.iter().enumerate() {
        match primitive_central_idempotent(group, h, k, generator, amb) {
            Ok(e) => level_idempotents.push(e),
            Err(IdempotentError::Reducible { norm }) => {
                return Err(ChainFailure::Reducible { level, norm })
            }
        }
        if level == chain.len() - 1 {
            break;
        }
        let (cen, transversal) = check_transition(
            group,
            level,
            &chain[level],
            &chain[level + 1],
            &level_idempotents[level],
        )?;
        let k_i = cen.index_in(&chain[level + 1]);
        matrix_size *= k_i;
        field_degree *= cen.order() / chain[level].order();
        level_indices.push(k_i);
        level_transversals.push(transversal);
        centralizers.push(cen);
    }
    let index_g_h = h.index_in(&group.whole());
    assert!(
        matrix_size * field_degree == index_g_h,
        "level indices must factor [G:H]"
    );

    // Global transversal: products t_0 t_1 ... t_{n-1}, last level fastest.
    let mut transversal: Vec<u32> = vec![0];
    for level in &level_transversals {
        let mut next = Vec::with_capacity(transversal.len() * level.len());
        for &prefix in &transversal {
            for &t in level {
                next.push(group.mul(prefix, t));
            }
        }
        transversal = next;
    }
    assert!(transversal.len() == matrix_size as usize);
    assert!(transversal[0] == 0, "transversal must start at the identity");
    {
        let mut sorted = transversal.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert!(
            sorted.len() == transversal.len(),
            "transversal products must be distinct"
        );
    }

    Ok(GsspCertificate {
        h: h.clone(),
        k: k.clone(),
        lambda_generator: generator,
        chain: chain.to_vec(),
        centralizers,
        level_indices,
        matrix_size,
        field_degree,
        level_transversals,
        transversal,
        level_idempotents,
    })
}

/// Outcome of searching for a certifying chain.
#[derive(Clone, Debug)]
pub enum ChainSearch {
    /// A shortest certifying chain was found and verified.
    Found(GsspCertificate),
    /// No chain exists among the enumerated subgroups; `complete` tells
    /// whether the enumeration covered all subgroups above `H`.
    NoChain {
        /// True when every subgroup above `H` was considered.
        complete: bool,
    },
    /// The pair is not component-realizing, so no chain can exist.
    NotShoda(ShodaFailure),
}

/// Breadth-first search for a shortest certifying chain from `H` to `G`,
/// considering at most `max_subgroups` subgroups above `H`.
pub fn find_strong_chain(
    group: &FiniteGroup,
    h: &Subgroup,
    k: &Subgroup,
    generator: u32,
    max_subgroups: usize,
) -> ChainSearch {
    if let Err(failure) = is_shoda_pair(group, h, k) {
        return ChainSearch::NotShoda(failure);
    }
    let (mut nodes, complete) = group.subgroups_above(h, max_subgroups);
    nodes.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.members().cmp(b.members()))
    });
    let start = nodes
        .iter()
        .position(|s| s.members() == h.members())
        .expect("H itself is always enumerated");
    let goal = match nodes
        .iter()
        .position(|s| s.order() == group.order())
    {
        Some(i) => i,
        None => return ChainSearch::NoChain { complete },
    };

    // Lazily computed level idempotents per node.
    let mut idempotents: BTreeMap<usize, Option<GroupAlgebraElement>> = BTreeMap::new();
    let mut level_idempotent = |node: usize, nodes: &[Subgroup]| -> Option<GroupAlgebraElement> {
        idempotents
            .entry(node)
            .or_insert_with(|| {
                primitive_central_idempotent(group, h, k, generator, &nodes[node]).ok()
            })
            .clone()
    };

    let mut parent: Vec<Option<usize>> = vec![None; nodes.len()];
    let mut visited = vec![false; nodes.len()];
    visited[start] = true;
    let mut frontier = vec![start];
    let mut reached_goal = start == goal;
    while !reached_goal && !frontier.is_empty() {
        let mut next_frontier = Vec::new();
        for &cur in &frontier {
            let e_cur = match level_idempotent(cur, &nodes) {
                Some(e) => e,
                None => continue,
            };
            for (cand, sub) in nodes.iter().enumerate() {
                if visited[cand]
                    || sub.order() <= nodes[cur].order()
                    || !nodes[cur].is_subgroup_of(sub)
                {
                    continue;
                }
                if check_transition(group, 0, &nodes[cur], sub, &e_cur).is_err() {
                    continue;
                }
                visited[cand] = true;
                parent[cand] = Some(cur);
                next_frontier.push(cand);
                if cand == goal {
                    reached_goal = true;
                }
            }
        }
        frontier = next_frontier;
    }
    if !reached_goal {
        return ChainSearch::NoChain { complete };
    }
    let mut path = vec![goal];
    while let Some(p) = parent[*path.last().expect("path is nonempty")] {
        path.push(p);
    }
    path.reverse();
    let chain: Vec<Subgroup> = path.into_iter().map(|i| nodes[i].clone()).collect();
    match verify_strong_chain(group, h, k, generator, &chain) {
        Ok(cert) => ChainSearch::Found(cert),
        Err(failure) => panic!(
            "searched chain failed re-verification ({}); transition checks are inconsistent",
            failure
        ),
    }
}

/// A component-realizing pair together with its central idempotent.
#[derive(Clone, Debug)]
pub struct ShodaPairRecord {
    /// The subgroup carrying the linear character.
    pub h: Subgroup,
    /// The character kernel.
    pub k: Subgroup,
    /// Generator of the cyclic quotient `H/K`.
    pub generator: u32,
    /// The component's primitive central idempotent in `QG`.
    pub idempotent: GroupAlgebraElement,
    /// Dimension of the component `QG * e` over `Q`.
    pub dimension: u32,
}

/// Enumerates component-realizing pairs, keeping one representative per
/// distinct central idempotent. The flag reports whether the subgroup
/// enumeration was complete within `max_subgroups`.
pub fn enumerate_shoda_pairs(
    group: &FiniteGroup,
    max_subgroups: usize,
) -> (Vec<ShodaPairRecord>, bool) {
    let (mut subs, complete) = group.all_subgroups(max_subgroups);
    subs.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.members().cmp(b.members()))
    });
    let mut records: Vec<ShodaPairRecord> = Vec::new();
    for h in &subs {
        for k in &subs {
            if !k.is_subgroup_of(h) {
                continue;
            }
            if is_shoda_pair(group, h, k).is_err() {
                continue;
            }
            let generator = h
                .quotient_cyclic_generator(group, k)
                .expect("cyclic quotient was just checked");
            let idempotent =
                primitive_central_idempotent(group, h, k, generator, &group.whole())
                    .expect("component-realizing pairs induce irreducibly");
            if records.iter().any(|r| r.idempotent == idempotent) {
                continue;
            }
            let dimension = ideal_dimension(group, &idempotent);
            records.push(ShodaPairRecord {
                h: h.clone(),
                k: k.clone(),
                generator,
                idempotent,
                dimension,
            });
        }
    }
    (records, complete)
}
