//! Finite-group engine: explicit Cayley tables, conjugacy and
//! bi-conjugacy structure, centralizers, and bicyclic subgroups.
//!
//! A bicyclic subgroup is an abelian subgroup on at most two
//! generators; these are exactly the subgroups generated by a
//! commuting pair, and the counting quantities attached to them
//! (generating-pair counts, bi-conjugacy orbit sizes, joint
//! centralizer orders) are what the invariant formulas consume.
//!
//! Canonical choices throughout: the representative of a conjugacy
//! class, bi-conjugacy class, or subgroup class is the
//! lexicographically least element / pair / element list, so every
//! enumeration is deterministic.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Default limit on the group order accepted by the builders.
pub const DEFAULT_ORDER_CAP: usize = 512;

/// An explicitly enumerated finite group.
///
/// Elements are indices 0..n; all structure (inverses, element orders,
/// conjugacy classes, the exponent) is computed at construction and the
/// value is immutable afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    elem_order: Vec<usize>,
    exponent: usize,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from an explicit Cayley table and validates the
    /// group axioms.
    pub fn from_cayley(rows: &[Vec<usize>], cap: usize) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NotAGroup {
                detail: String::from("empty Cayley table"),
            });
        }
        if n > cap {
            return Err(Error::OrderCapExceeded { cap });
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup {
                    detail: format!("row {i} has length {} but the table has {n} rows", row.len()),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::NotAGroup {
                        detail: format!("entry ({i},{j}) = {v} is out of range"),
                    });
                }
                table.push(v);
            }
        }
        Self::finish(n, table)
    }

    /// Builds a group as the closure of a list of permutations, each
    /// given in cycle notation over 1-based points.
    pub fn from_permutation_generators(gens: &[Vec<Vec<usize>>], cap: usize) -> Result<Self> {
        let mut degree = 1usize;
        for cycles in gens {
            for cycle in cycles {
                for &p in cycle {
                    if p == 0 {
                        return Err(Error::NotAGroup {
                            detail: String::from("cycle points are 1-based; found 0"),
                        });
                    }
                    degree = degree.max(p);
                }
            }
        }
        let mut perms: Vec<Vec<usize>> = Vec::with_capacity(gens.len());
        for (gi, cycles) in gens.iter().enumerate() {
            let mut perm: Vec<usize> = (0..degree).collect();
            let mut seen = vec![false; degree];
            for cycle in cycles {
                for w in 0..cycle.len() {
                    let from = cycle[w] - 1;
                    let to = cycle[(w + 1) % cycle.len()] - 1;
                    if seen[from] {
                        return Err(Error::NotAGroup {
                            detail: format!("generator {gi} repeats point {}", from + 1),
                        });
                    }
                    seen[from] = true;
                    perm[from] = to;
                }
            }
            perms.push(perm);
        }

        // Breadth-first closure starting from the identity.
        let identity: Vec<usize> = (0..degree).collect();
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut elems: Vec<Vec<usize>> = Vec::new();
        index.insert(identity.clone(), 0);
        elems.push(identity);
        let mut queue: VecDeque<usize> = VecDeque::new();
        queue.push_back(0);
        while let Some(i) = queue.pop_front() {
            for g in &perms {
                // product (x * g)(p) = x(g(p))
                let x = &elems[i];
                let prod: Vec<usize> = (0..degree).map(|p| x[g[p]]).collect();
                if !index.contains_key(&prod) {
                    if elems.len() >= cap {
                        return Err(Error::OrderCapExceeded { cap });
                    }
                    index.insert(prod.clone(), elems.len());
                    elems.push(prod);
                    queue.push_back(elems.len() - 1);
                }
            }
        }

        let n = elems.len();
        let mut table = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                let prod: Vec<usize> = (0..degree).map(|p| elems[a][elems[b][p]]).collect();
                table[a * n + b] = *index.get(&prod).expect("closure is closed");
            }
        }
        Self::finish(n, table)
    }

    /// Validates the axioms and precomputes the derived structure.
    fn finish(n: usize, table: Vec<usize>) -> Result<Self> {
        let at = |a: usize, b: usize| table[a * n + b];

        // two-sided identity
        let mut identity = None;
        'search: for e in 0..n {
            for x in 0..n {
                if at(e, x) != x || at(x, e) != x {
                    continue 'search;
                }
            }
            identity = Some(e);
            break;
        }
        let identity = identity.ok_or_else(|| Error::NotAGroup {
            detail: String::from("no two-sided identity"),
        })?;

        // inverses
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            for y in 0..n {
                if at(x, y) == identity && at(y, x) == identity {
                    inverse[x] = y;
                    break;
                }
            }
            if inverse[x] == usize::MAX {
                return Err(Error::NotAGroup {
                    detail: format!("element {x} has no two-sided inverse"),
                });
            }
        }

        // associativity
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::NotAGroup {
                            detail: format!("associativity fails at ({a},{b},{c})"),
                        });
                    }
                }
            }
        }

        // element orders and exponent
        let mut elem_order = vec![0usize; n];
        let mut exponent = 1usize;
        for x in 0..n {
            let mut pow = x;
            let mut k = 1usize;
            while pow != identity {
                pow = at(pow, x);
                k += 1;
            }
            elem_order[x] = k;
            exponent = exponent.lcm(&k);
        }

        // conjugacy classes, ascending scan so the representative is
        // the least element of its class
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut orbit = BTreeSet::new();
            for k in 0..n {
                orbit.insert(at(at(k, g), inverse[k]));
            }
            let idx = classes.len();
            for &m in &orbit {
                class_of[m] = idx;
            }
            classes.push(orbit.into_iter().collect());
        }

        Ok(FiniteGroup {
            order: n,
            table,
            identity,
            inverse,
            elem_order,
            exponent,
            classes,
            class_of,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.elem_order[a]
    }

    /// The exponent: lcm of the element orders; the natural cyclotomic
    /// modulus for character values.
    pub fn exponent(&self) -> usize {
        self.exponent
    }

    /// k g k^{-1}.
    pub fn conjugate(&self, k: usize, g: usize) -> usize {
        self.mul(self.mul(k, g), self.inverse[k])
    }

    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_index_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    /// Least element of each conjugacy class, in class order.
    pub fn class_representatives(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    pub fn commutes(&self, g: usize, h: usize) -> bool {
        self.mul(g, h) == self.mul(h, g)
    }

    /// All ordered commuting pairs, in lexicographic order. The count
    /// equals |G| times the number of conjugacy classes.
    pub fn commuting_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for g in 0..self.order {
            for h in 0..self.order {
                if self.commutes(g, h) {
                    pairs.push((g, h));
                }
            }
        }
        pairs
    }

    /// The joint centralizer {k : kg = gk and kh = hk} of a commuting
    /// pair.
    pub fn centralizer_of_pair(&self, g: usize, h: usize) -> Result<Subgroup> {
        if !self.commutes(g, h) {
            return Err(Error::NotCommuting { g, h });
        }
        let elems: Vec<usize> = (0..self.order)
            .filter(|&k| self.commutes(k, g) && self.commutes(k, h))
            .collect();
        Ok(Subgroup { elems })
    }

    /// Orbits of the simultaneous-conjugation action on commuting
    /// pairs. Scanning pairs in lexicographic order makes each
    /// representative the least pair of its orbit.
    pub fn bi_conjugacy_classes(&self) -> Vec<BiConjugacyClass> {
        let n = self.order;
        let mut visited = vec![false; n * n];
        let mut out = Vec::new();
        for g in 0..n {
            for h in 0..n {
                if visited[g * n + h] || !self.commutes(g, h) {
                    continue;
                }
                let mut orbit = BTreeSet::new();
                for k in 0..n {
                    orbit.insert((self.conjugate(k, g), self.conjugate(k, h)));
                }
                for &(a, b) in &orbit {
                    visited[a * n + b] = true;
                }
                let centralizer = self
                    .centralizer_of_pair(g, h)
                    .expect("orbit members commute");
                debug_assert_eq!(orbit.len() * centralizer.order(), n);
                out.push(BiConjugacyClass {
                    rep: (g, h),
                    orbit_size: orbit.len(),
                    centralizer,
                });
            }
        }
        out
    }

    /// Closure of a seed set under the product; always a subgroup.
    pub fn subgroup_closure(&self, seeds: &[usize]) -> Subgroup {
        let mut member = vec![false; self.order];
        member[self.identity] = true;
        let mut elems = vec![self.identity];
        let mut queue: VecDeque<usize> = VecDeque::new();
        queue.push_back(self.identity);
        for &s in seeds {
            if !member[s] {
                member[s] = true;
                elems.push(s);
                queue.push_back(s);
            }
        }
        let gens: Vec<usize> = seeds.to_vec();
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                for prod in [self.mul(x, g), self.mul(g, x)] {
                    if !member[prod] {
                        member[prod] = true;
                        elems.push(prod);
                        queue.push_back(prod);
                    }
                }
            }
        }
        elems.sort_unstable();
        Subgroup { elems }
    }

    /// The subgroup generated by a commuting pair; abelian on at most
    /// two generators by construction.
    pub fn generated_bicyclic_subgroup(&self, g: usize, h: usize) -> Result<Subgroup> {
        if !self.commutes(g, h) {
            return Err(Error::NotCommuting { g, h });
        }
        Ok(self.subgroup_closure(&[g, h]))
    }

    pub fn is_abelian_subgroup(&self, sub: &Subgroup) -> bool {
        sub.elems
            .iter()
            .all(|&a| sub.elems.iter().all(|&b| self.commutes(a, b)))
    }

    /// {k x k^{-1} : x in H}, sorted.
    pub fn conjugate_subgroup(&self, sub: &Subgroup, k: usize) -> Subgroup {
        let mut elems: Vec<usize> = sub.elems.iter().map(|&x| self.conjugate(k, x)).collect();
        elems.sort_unstable();
        Subgroup { elems }
    }

    /// All distinct subgroups of the form <g,h> for commuting (g,h),
    /// together with their grouping into conjugacy classes.
    pub fn bicyclic_subgroups(&self) -> BicyclicSubgroups {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for (g, h) in self.commuting_pairs() {
            let sub = self.subgroup_closure(&[g, h]);
            seen.insert(sub.elems);
        }
        let mut distinct: Vec<Subgroup> = seen
            .iter()
            .map(|elems| Subgroup {
                elems: elems.clone(),
            })
            .collect();
        distinct.sort_by(|a, b| (a.order(), &a.elems).cmp(&(b.order(), &b.elems)));

        let mut assigned: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut classes: Vec<BicyclicClass> = Vec::new();
        for sub in &distinct {
            if assigned.contains_key(&sub.elems) {
                continue;
            }
            let mut orbit: BTreeSet<Vec<usize>> = BTreeSet::new();
            for k in 0..self.order {
                orbit.insert(self.conjugate_subgroup(sub, k).elems);
            }
            let rep = Subgroup {
                elems: orbit.iter().next().expect("orbit nonempty").clone(),
            };
            let idx = classes.len();
            let members: Vec<Subgroup> = orbit
                .iter()
                .map(|e| Subgroup { elems: e.clone() })
                .collect();
            for m in &members {
                assigned.insert(m.elems.clone(), idx);
                debug_assert!(seen.contains(&m.elems), "conjugate of bicyclic is bicyclic");
            }
            let generating_pairs = self
                .generating_pair_count(&rep)
                .expect("members are bicyclic");
            classes.push(BicyclicClass {
                rep,
                members,
                generating_pairs,
            });
        }
        BicyclicSubgroups {
            distinct,
            classes,
            class_lookup: assigned,
        }
    }

    /// Number of ordered pairs of H x H that generate H. Zero for an
    /// abelian subgroup means it needs more than two generators, which
    /// is rejected, as is any non-abelian input.
    pub fn generating_pair_count(&self, sub: &Subgroup) -> Result<usize> {
        if !self.is_abelian_subgroup(sub) {
            return Err(Error::NotBicyclic {
                detail: format!("subgroup {} is not abelian", sub.key()),
            });
        }
        let mut count = 0usize;
        for &a in &sub.elems {
            for &b in &sub.elems {
                if self.subgroup_closure(&[a, b]).elems == sub.elems {
                    count += 1;
                }
            }
        }
        if count == 0 {
            return Err(Error::NotBicyclic {
                detail: format!("subgroup {} needs more than two generators", sub.key()),
            });
        }
        Ok(count)
    }
}

/// A subgroup of a fixed parent group: a sorted element-index list
/// closed under the parent's product.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subgroup {
    elems: Vec<usize>,
}

impl Subgroup {
    /// Validates closure under product and inverse and membership of
    /// the identity.
    pub fn new(group: &FiniteGroup, mut elems: Vec<usize>) -> Result<Self> {
        elems.sort_unstable();
        elems.dedup();
        let sub = Subgroup { elems };
        if !sub.contains(group.identity()) {
            return Err(Error::InvalidModel {
                detail: format!("subgroup {} does not contain the identity", sub.key()),
            });
        }
        for &a in &sub.elems {
            if a >= group.order() {
                return Err(Error::InvalidModel {
                    detail: format!("subgroup element {a} is out of range"),
                });
            }
            if !sub.contains(group.inverse(a)) {
                return Err(Error::InvalidModel {
                    detail: format!("subgroup {} is not closed under inverse", sub.key()),
                });
            }
            for &b in &sub.elems {
                if !sub.contains(group.mul(a, b)) {
                    return Err(Error::InvalidModel {
                        detail: format!("subgroup {} is not closed under product", sub.key()),
                    });
                }
            }
        }
        Ok(sub)
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elems(&self) -> &[usize] {
        &self.elems
    }

    pub fn contains(&self, e: usize) -> bool {
        self.elems.binary_search(&e).is_ok()
    }

    /// Canonical string form: comma-joined sorted element indices.
    pub fn key(&self) -> String {
        let parts: Vec<String> = self.elems.iter().map(|e| format!("{e}")).collect();
        parts.join(",")
    }
}

/// An orbit of the simultaneous-conjugation action on commuting pairs.
#[derive(Clone, Debug)]
pub struct BiConjugacyClass {
    /// Lexicographically least pair of the orbit.
    pub rep: (usize, usize),
    pub orbit_size: usize,
    /// Joint centralizer of the representative; orbit size times its
    /// order equals the group order.
    pub centralizer: Subgroup,
}

/// A conjugacy class of bicyclic subgroups.
#[derive(Clone, Debug)]
pub struct BicyclicClass {
    /// Lexicographically least member.
    pub rep: Subgroup,
    /// All conjugates, sorted; every one arises as some <g,h>.
    pub members: Vec<Subgroup>,
    /// Ordered pairs of the representative generating it; conjugation
    /// keeps this count constant across members.
    pub generating_pairs: usize,
}

impl BicyclicClass {
    pub fn conjugate_count(&self) -> usize {
        self.members.len()
    }
}

/// The bicyclic subgroups of a group, both as distinct subgroups and
/// grouped into conjugacy classes.
#[derive(Clone, Debug)]
pub struct BicyclicSubgroups {
    pub distinct: Vec<Subgroup>,
    pub classes: Vec<BicyclicClass>,
    class_lookup: BTreeMap<Vec<usize>, usize>,
}

impl BicyclicSubgroups {
    /// Class index of a subgroup given by its sorted element list.
    pub fn class_of(&self, elems: &[usize]) -> Option<usize> {
        self.class_lookup.get(elems).copied()
    }
}
