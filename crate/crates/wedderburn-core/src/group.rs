//! Finite groups with eager multiplication tables and subgroup machinery.
//!
//! Elements are indices into a fixed enumeration with the identity at index
//! 0. Groups come from permutation generators (breadth-first closure) or from
//! structural builders (cyclic, direct, semidirect, metacyclic); all
//! downstream choices (transversals, coset generators, search order) are tied
//! to the enumeration order, which makes every pipeline decision
//! deterministic.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use alloc::{vec, string::String};

use crate::perm::Permutation;

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: u32,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl FiniteGroup {
    /// Builds a group from a flattened `order x order` table with
    /// `table[a * order + b] = a * b` and the identity at index 0.
    pub fn from_table(order: u32, table: Vec<u32>) -> Self {
        let n = order as usize;
        assert!(n > 0 && table.len() == n * n, "table size mismatch");
        // identity at 0
        for a in 0..n {
            assert!(table[a * n] == a as u32, "index 0 is not a left identity");
            assert!(table[a] == a as u32, "index 0 is not a right identity");
        }
        // Latin square
        let mut seen = vec![false; n];
        for a in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                let p = table[a * n + b] as usize;
                assert!(p < n && !seen[p], "row {} is not a permutation", a);
                seen[p] = true;
            }
        }
        // associativity: full check for small orders, pseudorandom sample
        // above that (builders validate their construction separately)
        if n <= 256 {
            for a in 0..n {
                for b in 0..n {
                    let ab = table[a * n + b] as usize;
                    for c in 0..n {
                        let bc = table[b * n + c] as usize;
                        assert!(
                            table[ab * n + c] == table[a * n + bc],
                            "associativity fails"
                        );
                    }
                }
            }
        } else {
            let mut state = 0x9e3779b97f4a7c15u64;
            for _ in 0..200_000 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = (state >> 33) as usize % n;
                let b = (state >> 17) as usize % n;
                let c = state as usize % n;
                let ab = table[a * n + b] as usize;
                let bc = table[b * n + c] as usize;
                assert!(table[ab * n + c] == table[a * n + bc], "associativity fails");
            }
        }
        let mut inv = vec![0u32; n];
        for a in 0..n {
            let b = table[a * n..(a + 1) * n]
                .iter()
                .position(|&p| p == 0)
                .expect("no inverse");
            inv[a] = b as u32;
        }
        FiniteGroup {
            order,
            mul: table,
            inv,
        }
    }

    /// Breadth-first enumeration of the group generated by permutations.
    /// Returns the group and the elements in enumeration order (identity
    /// first); generator images and their inverses are explored in the order
    /// given.
    pub fn from_permutations(gens: &[Permutation]) -> (Self, Vec<Permutation>) {
        assert!(!gens.is_empty(), "need at least one generator");
        let degree = gens[0].degree();
        let mut step_gens: Vec<Permutation> = Vec::new();
        for g in gens {
            assert!(g.degree() == degree, "generator degree mismatch");
            if !step_gens.contains(g) {
                step_gens.push(g.clone());
            }
            let gi = g.inverse();
            if !step_gens.contains(&gi) {
                step_gens.push(gi);
            }
        }
        let mut elements = vec![Permutation::identity(degree)];
        let mut index: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
        index.insert(elements[0].images().to_vec(), 0);
        // parent[x] = (p, s) with element x = element p * step_gens[s]
        let mut parent: Vec<(u32, u32)> = vec![(0, 0)];
        let mut cursor = 0usize;
        while cursor < elements.len() {
            for (slot, s) in step_gens.iter().enumerate() {
                let next = elements[cursor].compose(s);
                let key = next.images().to_vec();
                if !index.contains_key(&key) {
                    let idx = elements.len() as u32;
                    index.insert(key, idx);
                    elements.push(next);
                    parent.push((cursor as u32, slot as u32));
                }
            }
            cursor += 1;
        }
        let n = elements.len();
        // generator columns by permutation composition, then full rows by
        // the parent chase x = parent * s => g*x = (g*parent) * s
        let mut cols: Vec<Vec<u32>> = Vec::with_capacity(step_gens.len());
        for s in &step_gens {
            let col: Vec<u32> = elements
                .iter()
                .map(|e| index[e.compose(s).images()])
                .collect();
            cols.push(col);
        }
        let mut table = vec![0u32; n * n];
        for g in 0..n {
            table[g * n] = g as u32;
            for x in 1..n {
                let (p, s) = parent[x];
                let gp = table[g * n + p as usize] as usize;
                table[g * n + x] = cols[s as usize][gp];
            }
        }
        let group = FiniteGroup::from_table(n as u32, table);
        (group, elements)
    }

    /// Cyclic group of order `n`; element `i` is the i-th power of the
    /// generator (index 1).
    pub fn cyclic(n: u32) -> Self {
        let m = n as usize;
        let mut table = vec![0u32; m * m];
        for a in 0..m {
            for b in 0..m {
                table[a * m + b] = ((a + b) % m) as u32;
            }
        }
        FiniteGroup::from_table(n, table)
    }

    /// Direct product; element `(a, b)` has index `a * |B| + b`.
    pub fn direct_product(left: &FiniteGroup, right: &FiniteGroup) -> Self {
        let la = left.order as usize;
        let lb = right.order as usize;
        let n = la * lb;
        let mut table = vec![0u32; n * n];
        for a1 in 0..la {
            for b1 in 0..lb {
                let i1 = a1 * lb + b1;
                for a2 in 0..la {
                    for b2 in 0..lb {
                        let i2 = a2 * lb + b2;
                        let a = left.mul(a1 as u32, a2 as u32) as usize;
                        let b = right.mul(b1 as u32, b2 as u32) as usize;
                        table[i1 * n + i2] = (a * lb + b) as u32;
                    }
                }
            }
        }
        FiniteGroup::from_table(n as u32, table)
    }

    /// Semidirect product `N x| H` with product
    /// `(n1, h1)(n2, h2) = (n1 * act(h1, n2), h1 h2)`; element `(n, h)` has
    /// index `n * |H| + h`. `act` must satisfy `act(h, -)` an automorphism of
    /// `N` for each `h` and `act(h1 h2, -) = act(h1, act(h2, -))`, both of
    /// which are verified exhaustively.
    pub fn semidirect_product<A>(normal: &FiniteGroup, top: &FiniteGroup, act: A) -> Self
    where
        A: Fn(u32, u32) -> u32,
    {
        let ln = normal.order as usize;
        let lh = top.order as usize;
        for h in 0..lh as u32 {
            assert!(act(h, 0) == 0, "action does not fix the identity");
            for n1 in 0..ln as u32 {
                for n2 in 0..ln as u32 {
                    assert!(
                        act(h, normal.mul(n1, n2)) == normal.mul(act(h, n1), act(h, n2)),
                        "action by {} is not an automorphism",
                        h
                    );
                }
            }
        }
        for n in 0..ln as u32 {
            assert!(act(0, n) == n, "identity must act trivially");
        }
        for h1 in 0..lh as u32 {
            for h2 in 0..lh as u32 {
                let h12 = top.mul(h1, h2);
                for n in 0..ln as u32 {
                    assert!(
                        act(h12, n) == act(h1, act(h2, n)),
                        "action is not a homomorphism at ({}, {})",
                        h1,
                        h2
                    );
                }
            }
        }
        let size = ln * lh;
        let mut table = vec![0u32; size * size];
        for n1 in 0..ln {
            for h1 in 0..lh {
                let i1 = n1 * lh + h1;
                for n2 in 0..ln {
                    for h2 in 0..lh {
                        let i2 = n2 * lh + h2;
                        let n = normal.mul(n1 as u32, act(h1 as u32, n2 as u32)) as usize;
                        let h = top.mul(h1 as u32, h2 as u32) as usize;
                        table[i1 * size + i2] = (n * lh + h) as u32;
                    }
                }
            }
        }
        FiniteGroup::from_table(size as u32, table)
    }

    /// Metacyclic group `<a, b | a^m = 1, b^n = a^t, b^-1 a b = a^r>`;
    /// element `a^i b^j` has index `i * n + j`, so `a` is index `n` and `b`
    /// is index 1.
    pub fn metacyclic(m: u32, n: u32, t: u32, r: u32) -> Self {
        assert!(m >= 1 && n >= 1);
        assert!(mod_pow(r, n, m) == 1 % m, "r^n must be 1 mod m");
        assert!((t as u64 * (r as u64 + m as u64 - 1)) % m as u64 == 0, "t(r-1) must be 0 mod m");
        let size = (m * n) as usize;
        let mut table = vec![0u32; size * size];
        for i1 in 0..m as u64 {
            for j1 in 0..n as u64 {
                let x1 = (i1 * n as u64 + j1) as usize;
                let rj1 = mod_pow(r, j1 as u32, m) as u64;
                for i2 in 0..m as u64 {
                    for j2 in 0..n as u64 {
                        let x2 = (i2 * n as u64 + j2) as usize;
                        let carry = (j1 + j2) / n as u64;
                        let i = (i1 + i2 * rj1 + t as u64 * carry) % m as u64;
                        let j = (j1 + j2) % n as u64;
                        table[x1 * size + x2] = (i * n as u64 + j) as u32;
                    }
                }
            }
        }
        FiniteGroup::from_table(size as u32, table)
    }

    /// Group order.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Product of two element indices.
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order as usize + b as usize]
    }

    /// Inverse of an element index.
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// `t^-1 * g * t`.
    pub fn conjugate_element(&self, g: u32, t: u32) -> u32 {
        self.mul(self.mul(self.inv(t), g), t)
    }

    /// `g^e` for any integer exponent.
    pub fn power(&self, g: u32, e: i64) -> u32 {
        let base = if e < 0 { self.inv(g) } else { g };
        let mut k = e.unsigned_abs();
        let mut acc = 0u32;
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative order of an element.
    pub fn element_order(&self, g: u32) -> u32 {
        let mut x = g;
        let mut ord = 1;
        while x != 0 {
            x = self.mul(x, g);
            ord += 1;
        }
        ord
    }

    /// The right-regular permutation `m -> m * g`, a homomorphism under
    /// apply-left-then-right composition.
    pub fn regular_permutation(&self, g: u32) -> Permutation {
        Permutation::new((0..self.order).map(|m| self.mul(m, g)).collect())
    }

    /// The whole group as a subgroup.
    pub fn whole(&self) -> Subgroup {
        Subgroup {
            members: (0..self.order).collect(),
        }
    }

    /// The trivial subgroup.
    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { members: vec![0] }
    }

    /// Smallest subgroup containing `gens`.
    pub fn closure(&self, gens: &[u32]) -> Subgroup {
        let mut set = BTreeSet::new();
        set.insert(0u32);
        let mut frontier = vec![0u32];
        while let Some(x) = frontier.pop() {
            for &s in gens {
                assert!(s < self.order, "generator index out of range");
                let m = self.mul(x, s);
                if set.insert(m) {
                    frontier.push(m);
                }
            }
        }
        Subgroup {
            members: set.into_iter().collect(),
        }
    }

    /// All subgroups by closure extension, deduplicated, in first-discovery
    /// order starting from the trivial subgroup. The enumeration is complete
    /// when the flag is true; hitting `max_count` stops early.
    pub fn all_subgroups(&self, max_count: usize) -> (Vec<Subgroup>, bool) {
        self.subgroups_above(&self.trivial_subgroup(), max_count)
    }

    /// Smallest subgroup of `ambient` that contains `seed` and is normal in
    /// `ambient`.
    pub fn normal_closure(&self, ambient: &Subgroup, seed: &[u32]) -> Subgroup {
        let mut gens: BTreeSet<u32> = seed.iter().copied().collect();
        loop {
            let gen_list: Vec<u32> = gens.iter().copied().collect();
            let sub = self.closure(&gen_list);
            let mut grew = false;
            for &t in ambient.members() {
                for &s in sub.members() {
                    let c = self.conjugate_element(s, t);
                    if !sub.contains(c) && gens.insert(c) {
                        grew = true;
                    }
                }
            }
            if !grew {
                return sub;
            }
        }
    }

    /// All subgroups containing `base`, by closure extension. Complete when
    /// the flag is true.
    pub fn subgroups_above(&self, base: &Subgroup, max_count: usize) -> (Vec<Subgroup>, bool) {
        let start = self.closure(&base.members);
        let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
        seen.insert(start.members.clone());
        // each discovered subgroup keeps a small generating set so closures
        // of extensions stay cheap
        let mut gen_lists: Vec<Vec<u32>> = vec![base.members.clone()];
        let mut out = vec![start];
        let mut cursor = 0usize;
        while cursor < out.len() {
            for g in 0..self.order {
                if out[cursor].contains(g) {
                    continue;
                }
                let mut gens = gen_lists[cursor].clone();
                gens.push(g);
                let bigger = self.closure(&gens);
                if seen.insert(bigger.members.clone()) {
                    out.push(bigger);
                    gen_lists.push(gens);
                    if out.len() >= max_count {
                        return (out, false);
                    }
                }
            }
            cursor += 1;
        }
        (out, true)
    }
}

fn mod_pow(base: u32, mut exp: u32, m: u32) -> u32 {
    if m == 1 {
        return 0;
    }
    let mut acc: u64 = 1;
    let mut b = base as u64 % m as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m as u64;
        }
        b = b * b % m as u64;
        exp >>= 1;
    }
    acc as u32
}

/// A subgroup as a sorted set of element indices of its parent group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    members: Vec<u32>,
}

impl Subgroup {
    /// Wraps a member list, validating closure under the parent's product.
    pub fn from_members(group: &FiniteGroup, mut members: Vec<u32>) -> Self {
        members.sort_unstable();
        members.dedup();
        assert!(members.first() == Some(&0), "subgroup must contain the identity");
        for &a in &members {
            for &b in &members {
                let p = group.mul(a, b);
                assert!(
                    members.binary_search(&p).is_ok(),
                    "member set not closed under multiplication"
                );
            }
        }
        Subgroup { members }
    }

    /// Number of elements.
    pub fn order(&self) -> u32 {
        self.members.len() as u32
    }

    /// Sorted member indices.
    pub fn members(&self) -> &[u32] {
        &self.members
    }

    /// Membership test.
    pub fn contains(&self, g: u32) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    /// True iff `self` is contained in `other`.
    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    /// Index `[other : self]`; panics unless `self` is contained in `other`.
    pub fn index_in(&self, other: &Subgroup) -> u32 {
        assert!(self.is_subgroup_of(other), "not a subgroup");
        other.order() / self.order()
    }

    /// `t^-1 * self * t`.
    pub fn conjugate_by(&self, group: &FiniteGroup, t: u32) -> Subgroup {
        let mut members: Vec<u32> = self
            .members
            .iter()
            .map(|&s| group.conjugate_element(s, t))
            .collect();
        members.sort_unstable();
        Subgroup { members }
    }

    /// True iff every `ambient` element normalizes `self`.
    pub fn is_normal_in(&self, group: &FiniteGroup, ambient: &Subgroup) -> bool {
        ambient
            .members
            .iter()
            .all(|&t| self.members.iter().all(|&s| self.contains(group.conjugate_element(s, t))))
    }

    /// Normalizer of `self` in the whole group.
    pub fn normalizer(&self, group: &FiniteGroup) -> Subgroup {
        let members: Vec<u32> = (0..group.order())
            .filter(|&t| {
                self.members
                    .iter()
                    .all(|&s| self.contains(group.conjugate_element(s, t)))
            })
            .collect();
        Subgroup { members }
    }

    /// Elements of the whole group commuting with every member.
    pub fn centralizer(&self, group: &FiniteGroup) -> Subgroup {
        let members: Vec<u32> = (0..group.order())
            .filter(|&t| self.members.iter().all(|&s| group.mul(t, s) == group.mul(s, t)))
            .collect();
        Subgroup { members }
    }

    /// `[self, g] = <g^-1 h^-1 g h : h in self>`.
    pub fn commutator_with_element(&self, group: &FiniteGroup, g: u32) -> Subgroup {
        let gens: Vec<u32> = self
            .members
            .iter()
            .map(|&h| {
                group.mul(
                    group.mul(group.inv(g), group.inv(h)),
                    group.mul(g, h),
                )
            })
            .collect();
        group.closure(&gens)
    }

    /// Left-coset representatives of `self` in `ambient` (cosets `r * self`),
    /// ascending by element index, identity first.
    pub fn left_transversal(&self, group: &FiniteGroup, ambient: &Subgroup) -> Vec<u32> {
        assert!(self.is_subgroup_of(ambient), "transversal needs a subgroup");
        let mut covered = BTreeSet::new();
        let mut reps = Vec::new();
        for &h in &ambient.members {
            if covered.contains(&h) {
                continue;
            }
            reps.push(h);
            for &c in &self.members {
                covered.insert(group.mul(h, c));
            }
        }
        reps
    }

    /// A minimal-index element whose coset generates the cyclic quotient
    /// `self / k`, or `None` when the quotient is not cyclic. Panics when `k`
    /// is not normal in `self`.
    pub fn quotient_cyclic_generator(&self, group: &FiniteGroup, k: &Subgroup) -> Option<u32> {
        assert!(k.is_subgroup_of(self), "kernel must be a subgroup");
        assert!(k.is_normal_in(group, self), "kernel must be normal");
        let target = self.order() / k.order();
        for &h in &self.members {
            let mut power = h;
            let mut ord = 1u32;
            while !k.contains(power) {
                power = group.mul(power, h);
                ord += 1;
            }
            if ord == target {
                return Some(h);
            }
        }
        None
    }

    /// Order of the coset `g * k` in `self / k`.
    pub fn coset_order(&self, group: &FiniteGroup, k: &Subgroup, g: u32) -> u32 {
        assert!(self.contains(g));
        let mut power = g;
        let mut ord = 1u32;
        while !k.contains(power) {
            power = group.mul(power, g);
            ord += 1;
        }
        ord
    }
}

/// Renders a subgroup for diagnostics.
pub fn subgroup_label(s: &Subgroup) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    let _ = write!(out, "{{order {}}}", s.order());
    out
}
