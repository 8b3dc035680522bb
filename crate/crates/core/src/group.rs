//! Finite groups by explicit enumeration.
//!
//! Elements are indexed `0..order` in breadth-first discovery order from the
//! identity (index 0) under right multiplication by the sorted generators.
//! Permutations act on points from the right and compose left to right:
//! `x^(pq) = (x^p)^q`. Commutators are `[a,b] = a b a^-1 b^-1`.
//!
//! Small groups keep a full multiplication table; larger ones multiply through
//! their representation and look the product up by key.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, FiniteField};
use crate::report::{Report, Verdict};
use crate::words::{check_autocorrect, GroupOps, SequenceId, SequenceSpec};

pub const DEFAULT_ORDER_CAP: usize = 100_000;
/// Groups up to this order get a full multiplication table.
pub const TABLE_LIMIT: usize = 1024;

pub type Key = Vec<u32>;

#[derive(Clone)]
pub enum Repr {
    /// Image lists on `degree` points (0-based internally).
    Permutation { degree: usize },
    /// Row-major n x n matrices; projective groups store the scalar multiple
    /// whose first nonzero entry is 1.
    Matrix { field: FiniteField, n: usize, projective: bool },
    /// Keys are pairs of factor indices.
    Direct { left: Arc<FiniteGroup>, right: Arc<FiniteGroup> },
    /// Keys (g, a) with a indexing a group of automorphisms of `base`, each
    /// stored as a permutation of base indices;
    /// (g1,a1)(g2,a2) = (g1 a1(g2), a1 a2).
    Semidirect { base: Arc<FiniteGroup>, acting: Arc<FiniteGroup> },
}

impl Repr {
    fn identity(&self) -> Key {
        match self {
            Repr::Permutation { degree } => (0..*degree as u32).collect(),
            Repr::Matrix { n, .. } => {
                let mut k = vec![0; n * n];
                for i in 0..*n {
                    k[i * n + i] = 1;
                }
                k
            }
            Repr::Direct { .. } | Repr::Semidirect { .. } => vec![0, 0],
        }
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Key {
        match self {
            Repr::Permutation { .. } => a.iter().map(|&i| b[i as usize]).collect(),
            Repr::Matrix { field, n, projective } => {
                let n = *n;
                let mut c = vec![0u32; n * n];
                for i in 0..n {
                    for k in 0..n {
                        let x = a[i * n + k];
                        if x == 0 {
                            continue;
                        }
                        for j in 0..n {
                            let y = b[k * n + j];
                            if y != 0 {
                                c[i * n + j] = field.add(&c[i * n + j], &field.mul(&x, &y));
                            }
                        }
                    }
                }
                if *projective {
                    canonical_projective(field, &mut c);
                }
                c
            }
            Repr::Direct { left, right } => vec![left.mul(a[0], b[0]), right.mul(a[1], b[1])],
            Repr::Semidirect { base, acting } => {
                let moved = acting.key(a[1])[b[0] as usize];
                vec![base.mul(a[0], moved), acting.mul(b[1], a[1])]
            }
        }
    }

    fn validate(&self, key: &mut Key) -> Result<()> {
        match self {
            Repr::Permutation { degree } => {
                let mut seen = vec![false; *degree];
                if key.len() != *degree {
                    return Err(Error::InvalidElement(format!("expected {degree} images")));
                }
                for &i in key.iter() {
                    if i as usize >= *degree || seen[i as usize] {
                        return Err(Error::InvalidElement("not a bijection".into()));
                    }
                    seen[i as usize] = true;
                }
                Ok(())
            }
            Repr::Matrix { field, n, projective } => {
                if key.len() != n * n || key.iter().any(|&x| x >= field.order()) {
                    return Err(Error::InvalidElement("malformed matrix".into()));
                }
                if matrix_det(field, key, *n) == 0 {
                    return Err(Error::InvalidElement("singular matrix".into()));
                }
                if *projective {
                    canonical_projective(field, key);
                }
                Ok(())
            }
            Repr::Direct { left, right } => {
                if key.len() != 2 || key[0] as usize >= left.order() || key[1] as usize >= right.order() {
                    return Err(Error::InvalidElement("bad pair".into()));
                }
                Ok(())
            }
            Repr::Semidirect { base, acting } => {
                if key.len() != 2 || key[0] as usize >= base.order() || key[1] as usize >= acting.order() {
                    return Err(Error::InvalidElement("bad pair".into()));
                }
                Ok(())
            }
        }
    }
}

fn canonical_projective(field: &FiniteField, m: &mut [u32]) {
    if let Some(&lead) = m.iter().find(|&&x| x != 0) {
        if lead != 1 {
            let inv = field.inv(&lead).expect("nonzero");
            for x in m.iter_mut() {
                *x = field.mul(x, &inv);
            }
        }
    }
}

fn matrix_det(field: &FiniteField, m: &[u32], n: usize) -> u32 {
    let mut a: Vec<Vec<u32>> = m.chunks(n).map(<[u32]>::to_vec).collect();
    let mut det = 1u32;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| a[r][c] != 0) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            det = field.neg(&det);
        }
        det = field.mul(&det, &a[c][c]);
        let inv = field.inv(&a[c][c]).expect("nonzero pivot");
        for r in c + 1..n {
            if a[r][c] == 0 {
                continue;
            }
            let f = field.mul(&a[r][c], &inv);
            for j in c..n {
                let t = field.mul(&f, &a[c][j]);
                a[r][j] = field.sub(&a[r][j], &t);
            }
        }
    }
    det
}

#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    repr: Repr,
    elements: Vec<Key>,
    index: HashMap<Key, u32>,
    table: Option<Vec<u32>>,
    /// Pair groups: index of (i, j) at i * width + j.
    pairs: Option<(usize, Vec<u32>)>,
    inverse: Vec<u32>,
    generators: Vec<u32>,
    classes: OnceLock<Vec<Vec<u32>>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order())
    }
}

pub fn make_group(name: &str, repr: Repr, generators: Vec<Key>, cap: usize) -> Result<FiniteGroup> {
    FiniteGroup::generate(name, repr, generators, cap)
}

impl FiniteGroup {
    pub fn generate(name: &str, repr: Repr, generators: Vec<Key>, cap: usize) -> Result<Self> {
        let id = repr.identity();
        let mut gens = Vec::with_capacity(generators.len());
        for mut g in generators {
            repr.validate(&mut g)?;
            if g != id {
                gens.push(g);
            }
        }
        gens.sort();
        gens.dedup();

        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0u32);
        // inverse of each new element e*g is g^-1 e^-1, filled in after
        // generator inverses are known
        let mut parent: Vec<(u32, u32)> = vec![(0, u32::MAX)];
        let mut i = 0;
        while i < elements.len() {
            for (gi, g) in gens.iter().enumerate() {
                let p = repr.mul(&elements[i], g);
                if !index.contains_key(&p) {
                    if elements.len() >= cap {
                        return Err(Error::OrderExceedsCap(cap));
                    }
                    index.insert(p.clone(), elements.len() as u32);
                    elements.push(p);
                    parent.push((i as u32, gi as u32));
                }
            }
            i += 1;
        }
        let n = elements.len();
        let mut group = FiniteGroup {
            name: name.to_string(),
            repr,
            generators: gens.iter().map(|g| index[g]).collect(),
            elements,
            index,
            table: None,
            pairs: None,
            inverse: Vec::new(),
            classes: OnceLock::new(),
        };
        if n <= TABLE_LIMIT {
            let table: Vec<u32> = (0..n)
                .into_par_iter()
                .flat_map_iter(|a| {
                    let g = &group;
                    (0..n).map(move |b| g.index[&g.repr.mul(&g.elements[a], &g.elements[b])])
                })
                .collect();
            group.table = Some(table);
        } else if let Repr::Direct { right: other, .. } | Repr::Semidirect { acting: other, .. } = &group.repr {
            let width = other.order();
            let first = match &group.repr {
                Repr::Direct { left, .. } => left.order(),
                Repr::Semidirect { base, .. } => base.order(),
                _ => unreachable!(),
            };
            let mut dense = vec![u32::MAX; first * width];
            for (i, k) in group.elements.iter().enumerate() {
                dense[k[0] as usize * width + k[1] as usize] = i as u32;
            }
            group.pairs = Some((width, dense));
        }
        let gen_inv: Vec<u32> = group.generators.iter().map(|&g| group.power_inverse(g)).collect();
        let mut inverse = vec![0u32; n];
        for e in 1..n {
            let (p, gi) = parent[e];
            inverse[e] = group.mul(gen_inv[gi as usize], inverse[p as usize]);
        }
        group.inverse = inverse;
        Ok(group)
    }

    fn power_inverse(&self, a: u32) -> u32 {
        let mut prev = 0;
        let mut cur = a;
        while cur != 0 {
            prev = cur;
            cur = self.mul(cur, a);
        }
        prev
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn key(&self, a: u32) -> &Key {
        &self.elements[a as usize]
    }

    pub fn index_of(&self, key: &[u32]) -> Option<u32> {
        self.index.get(key).copied()
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.elements.len() + b as usize],
            None => {
                let k = self.repr.mul(&self.elements[a as usize], &self.elements[b as usize]);
                match &self.pairs {
                    Some((width, dense)) => dense[k[0] as usize * width + k[1] as usize],
                    None => self.index[&k],
                }
            }
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    /// g a g^-1
    pub fn conj(&self, g: u32, a: u32) -> u32 {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn comm(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn element_order(&self, a: u32) -> usize {
        let mut k = 1;
        let mut cur = a;
        while cur != 0 {
            cur = self.mul(cur, a);
            k += 1;
        }
        k
    }

    pub fn all(&self) -> impl Iterator<Item = u32> + '_ {
        0..self.elements.len() as u32
    }

    /// Conjugacy classes, each sorted, ordered by least member.
    pub fn conjugacy_classes(&self) -> &[Vec<u32>] {
        self.classes.get_or_init(|| self.classes_within(&self.all().collect::<Vec<_>>(), &self.generators))
    }

    /// Classes of the subgroup generated by `gens` whose elements are `members`.
    fn classes_within(&self, members: &[u32], gens: &[u32]) -> Vec<Vec<u32>> {
        let mut class_of = HashMap::new();
        let mut classes: Vec<Vec<u32>> = Vec::new();
        for &m in members {
            if class_of.contains_key(&m) {
                continue;
            }
            let id = classes.len();
            let mut class = vec![m];
            class_of.insert(m, id);
            let mut i = 0;
            while i < class.len() {
                let c = class[i];
                for &g in gens {
                    let d = self.conj(g, c);
                    if let std::collections::hash_map::Entry::Vacant(e) = class_of.entry(d) {
                        e.insert(id);
                        class.push(d);
                    }
                }
                i += 1;
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    pub fn class_reps(&self) -> Vec<u32> {
        self.conjugacy_classes().iter().map(|c| c[0]).collect()
    }

    /// Order together with the sorted multiset of class sizes; used as an
    /// isomorphism invariant.
    pub fn invariant(&self) -> (usize, Vec<usize>) {
        let mut sizes: Vec<usize> = self.conjugacy_classes().iter().map(Vec::len).collect();
        sizes.sort_unstable();
        (self.order(), sizes)
    }

    pub fn subgroup_invariant(&self, h: &Subgroup) -> (usize, Vec<usize>) {
        let gens = self.subgroup_generators(h);
        let mut sizes: Vec<usize> = self.classes_within(h.members(), &gens).iter().map(Vec::len).collect();
        sizes.sort_unstable();
        (h.order(), sizes)
    }

    pub fn format_element(&self, a: u32) -> String {
        let key = self.key(a);
        match &self.repr {
            Repr::Permutation { .. } => format_cycles(key),
            Repr::Matrix { field, n, .. } => {
                let rows: Vec<String> = key
                    .chunks(*n)
                    .map(|r| format!("[{}]", r.iter().map(|x| field.format(x)).collect::<Vec<_>>().join(",")))
                    .collect();
                format!("[{}]", rows.join(","))
            }
            Repr::Direct { left, right } => {
                format!("({}, {})", left.format_element(key[0]), right.format_element(key[1]))
            }
            Repr::Semidirect { base, .. } => {
                if key[1] == 0 {
                    base.format_element(key[0])
                } else {
                    format!("({}, a{})", base.format_element(key[0]), key[1])
                }
            }
        }
    }

    pub fn parse_element(&self, text: &str) -> Result<u32> {
        let mut key = match &self.repr {
            Repr::Permutation { degree } => parse_cycles(text, *degree)?,
            _ => return Err(Error::InvalidElement(format!("cannot parse {text:?} for {}", self.name))),
        };
        self.repr.validate(&mut key)?;
        self.index_of(&key)
            .ok_or_else(|| Error::InvalidElement(format!("{text} is not in {}", self.name)))
    }

    // -----------------------------------------------------------------------
    // Subgroups

    /// The subgroup generated by `gens`.
    pub fn generate_subgroup(&self, gens: &[u32]) -> Subgroup {
        let n = self.order();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut members = vec![0u32];
        let gens: Vec<u32> = gens.iter().copied().filter(|&g| g != 0).collect();
        let mut i = 0;
        while i < members.len() {
            let e = members[i];
            for &g in &gens {
                let p = self.mul(e, g);
                if !seen[p as usize] {
                    seen[p as usize] = true;
                    members.push(p);
                }
            }
            i += 1;
        }
        Subgroup::from_members(members)
    }

    /// A small generating set, chosen greedily in index order.
    pub fn subgroup_generators(&self, h: &Subgroup) -> Vec<u32> {
        if h.order() == self.order() && !self.generators.is_empty() {
            return self.generators.clone();
        }
        let mut gens = Vec::new();
        let mut cur = Subgroup::trivial();
        for &m in h.members() {
            if !cur.contains(m) {
                gens.push(m);
                cur = self.generate_subgroup(&gens);
                if cur.order() == h.order() {
                    break;
                }
            }
        }
        gens
    }

    /// Least subgroup containing `seeds` and normalized by `conj_gens`.
    pub fn normal_closure_in(&self, conj_gens: &[u32], seeds: &[u32]) -> Subgroup {
        let mut gens: Vec<u32> = Vec::new();
        let mut h = Subgroup::trivial();
        let mut queue: VecDeque<u32> = seeds.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            if h.contains(x) {
                continue;
            }
            gens.push(x);
            h = self.generate_subgroup(&gens);
            // conjugates of the new generator, and of earlier ones, must lie in h
            for &g in &gens {
                for &s in conj_gens {
                    let c = self.conj(s, g);
                    if !h.contains(c) {
                        queue.push_back(c);
                    }
                }
            }
        }
        h
    }

    pub fn normal_closure(&self, seeds: &[u32]) -> Subgroup {
        self.normal_closure_in(&self.generators, seeds)
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        let hg = self.subgroup_generators(h);
        self.generators
            .iter()
            .all(|&s| hg.iter().all(|&x| h.contains(self.conj(s, x))))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_members(self.all().collect())
    }

    /// [A, B] for subgroups normalized by `ambient`.
    fn commutator_subgroup(&self, ambient: &[u32], a: &[u32], b: &[u32]) -> Subgroup {
        let seeds: Vec<u32> = a
            .iter()
            .flat_map(|&x| b.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.comm(x, y))
            .collect();
        self.normal_closure_in(ambient, &seeds)
    }

    pub fn derived_series(&self, h: &Subgroup) -> Vec<Subgroup> {
        let mut chain = vec![h.clone()];
        loop {
            let last = chain.last().expect("nonempty");
            if last.order() == 1 {
                break;
            }
            let g = self.subgroup_generators(last);
            let next = self.commutator_subgroup(&g, &g, &g);
            let stable = next.order() == last.order();
            if !stable {
                chain.push(next);
            } else {
                break;
            }
        }
        chain
    }

    pub fn is_solvable(&self, h: &Subgroup) -> bool {
        self.derived_series(h).last().is_some_and(|s| s.order() == 1)
    }

    pub fn is_nilpotent(&self, h: &Subgroup) -> bool {
        let hg = self.subgroup_generators(h);
        let mut cur = h.clone();
        loop {
            if cur.order() == 1 {
                return true;
            }
            let cg = self.subgroup_generators(&cur);
            let next = self.commutator_subgroup(&hg, &hg, &cg);
            if next.order() == cur.order() {
                return false;
            }
            cur = next;
        }
    }

    /// Union of the classes whose normal closure satisfies `pred`.
    fn radical_by(&self, pred: impl Fn(&Subgroup) -> bool + Sync) -> Subgroup {
        let classes = self.conjugacy_classes();
        let keep: Vec<bool> = classes
            .par_iter()
            .map(|c| pred(&self.normal_closure(&[c[0]])))
            .collect();
        let mut members: Vec<u32> = classes
            .iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .flat_map(|(c, _)| c.iter().copied())
            .collect();
        members.sort_unstable();
        Subgroup::from_members(members)
    }

    /// Largest solvable normal subgroup: the elements whose normal closure is
    /// solvable.
    pub fn solvable_radical(&self) -> Subgroup {
        self.radical_by(|n| self.is_solvable(n))
    }

    /// Largest nilpotent normal subgroup.
    pub fn fitting_subgroup(&self) -> Subgroup {
        self.radical_by(|n| self.is_nilpotent(n))
    }

    /// Post-hoc checks: the set is a normal solvable subgroup and no element
    /// outside it generates, together with it, a solvable normal subgroup.
    pub fn verify_solvable_radical(&self, r: &Subgroup) -> bool {
        let closed = self.generate_subgroup(&self.subgroup_generators(r)) == *r;
        if !closed || !self.is_normal(r) || !self.is_solvable(r) {
            return false;
        }
        let rg = self.subgroup_generators(r);
        self.class_reps().iter().filter(|&&x| !r.contains(x)).all(|&x| {
            let mut seeds = rg.clone();
            seeds.push(x);
            !self.is_solvable(&self.normal_closure(&seeds))
        })
    }

    pub fn verify_fitting(&self, f: &Subgroup) -> bool {
        let closed = self.generate_subgroup(&self.subgroup_generators(f)) == *f;
        closed && self.is_normal(f) && self.is_nilpotent(f)
    }

    /// G/N as a permutation group on the right cosets of N, with the image of
    /// every element of G.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, Vec<u32>)> {
        if !self.is_normal(n) {
            return Err(Error::InvalidElement("quotient by a non-normal subgroup".into()));
        }
        let mut coset = vec![u32::MAX; self.order()];
        let mut reps = Vec::new();
        for g in self.all() {
            if coset[g as usize] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(g);
            for &m in n.members() {
                coset[self.mul(m, g) as usize] = id;
            }
        }
        let image_key = |g: u32| -> Key { reps.iter().map(|&r| coset[self.mul(r, g) as usize]).collect() };
        let gens: Vec<Key> = self.generators.iter().map(|&g| image_key(g)).collect();
        let q = FiniteGroup::generate(
            &format!("{}/N", self.name),
            Repr::Permutation { degree: reps.len() },
            gens,
            self.order(),
        )?;
        let map = self
            .all()
            .map(|g| q.index_of(&image_key(g)).expect("image lies in the quotient"))
            .collect();
        Ok((q, map))
    }

    pub fn to_json(&self) -> Result<Value> {
        let gens = &self.generators;
        Ok(match &self.repr {
            Repr::Permutation { degree } => json!({
                "representation": "permutation",
                "degree": degree,
                "generators": gens.iter().map(|&g| format_cycles(self.key(g))).collect::<Vec<_>>(),
            }),
            Repr::Matrix { field, n, projective } => json!({
                "representation": "matrix",
                "field": serde_json::to_value(field.spec()).expect("serializable"),
                "dimension": n,
                "modulo_center": projective,
                "generators": gens
                    .iter()
                    .map(|&g| {
                        self.key(g)
                            .chunks(*n)
                            .map(|r| r.iter().map(|x| field.format(x)).collect::<Vec<_>>())
                            .collect::<Vec<_>>()
                    })
                    .collect::<Vec<_>>(),
            }),
            Repr::Direct { left, right } => json!({
                "representation": "product",
                "factors": [left.to_json()?, right.to_json()?],
            }),
            Repr::Semidirect { .. } => {
                return Err(Error::BadParams {
                    model: self.name.clone(),
                    reason: "semidirect products have no file representation".into(),
                })
            }
        })
    }
}

impl GroupOps for FiniteGroup {
    type Elem = u32;
    fn identity(&self) -> u32 {
        0
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        FiniteGroup::mul(self, *a, *b)
    }
    fn inv(&self, a: &u32) -> u32 {
        FiniteGroup::inv(self, *a)
    }
    fn commutator(&self, a: &u32, b: &u32) -> u32 {
        self.comm(*a, *b)
    }
}

/// A subgroup (or, for Engel-like sets, any subset) as sorted indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: Vec<u32>,
}

impl Subgroup {
    pub fn trivial() -> Self {
        Subgroup { members: vec![0] }
    }

    pub fn from_members(mut members: Vec<u32>) -> Self {
        members.sort_unstable();
        members.dedup();
        Subgroup { members }
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }
}

// ---------------------------------------------------------------------------
// Cycle notation

pub fn format_cycles(images: &[u32]) -> String {
    let mut seen = vec![false; images.len()];
    let mut out = String::new();
    for start in 0..images.len() {
        if seen[start] || images[start] as usize == start {
            continue;
        }
        let mut cycle = vec![start + 1];
        seen[start] = true;
        let mut i = images[start] as usize;
        while i != start {
            seen[i] = true;
            cycle.push(i + 1);
            i = images[i] as usize;
        }
        out.push('(');
        out.push_str(&cycle.iter().map(usize::to_string).collect::<Vec<_>>().join(" "));
        out.push(')');
    }
    if out.is_empty() {
        "()".to_string()
    } else {
        out
    }
}

/// Parses "(1 2)(3 4 5)" or "(1,2)" on `degree` points (1-based); "()" is
/// the identity. Cycles compose left to right.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Key> {
    let syntax = |reason: &str| Error::syntax(text, reason);
    let mut perm: Key = (0..degree as u32).collect();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| syntax("expected '('"))?;
        let end = body.find(')').ok_or_else(|| syntax("unclosed cycle"))?;
        let points: Vec<usize> = body[..end]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().map_err(|_| syntax("bad point")))
            .collect::<Result<_>>()?;
        if points.iter().any(|&p| p == 0 || p > degree) {
            return Err(Error::InvalidElement(format!("point out of range 1..={degree} in {text}")));
        }
        let mut sorted = points.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != points.len() {
            return Err(syntax("repeated point in cycle"));
        }
        let mut cycle: Key = (0..degree as u32).collect();
        for (i, &p) in points.iter().enumerate() {
            cycle[p - 1] = (points[(i + 1) % points.len()] - 1) as u32;
        }
        perm = perm.iter().map(|&i| cycle[i as usize]).collect();
        rest = body[end + 1..].trim_start();
    }
    Ok(perm)
}

// ---------------------------------------------------------------------------
// Products and automorphisms

pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup, cap: usize) -> Result<FiniteGroup> {
    if a.order().saturating_mul(b.order()) > cap {
        return Err(Error::OrderExceedsCap(cap));
    }
    let gens: Vec<Key> = a
        .generators()
        .iter()
        .map(|&g| vec![g, 0])
        .chain(b.generators().iter().map(|&h| vec![0, h]))
        .collect();
    FiniteGroup::generate(
        &format!("{}*{}", a.name(), b.name()),
        Repr::Direct {
            left: Arc::new(a.clone()),
            right: Arc::new(b.clone()),
        },
        gens,
        cap,
    )
}

/// An automorphism as the image of every element index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    images: Vec<u32>,
}

impl Automorphism {
    pub fn identity(g: &FiniteGroup) -> Self {
        Automorphism {
            images: g.all().collect(),
        }
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    /// Extends generator images homomorphically along the enumeration and
    /// verifies the result on the full table.
    pub fn from_generator_images(g: &FiniteGroup, gen_images: &[u32]) -> Result<Self> {
        if gen_images.len() != g.generators().len() {
            return Err(Error::NotAnAutomorphism("one image per generator required".into()));
        }
        let n = g.order();
        let mut images = vec![u32::MAX; n];
        images[0] = 0;
        let mut queue = VecDeque::from([0u32]);
        while let Some(e) = queue.pop_front() {
            for (&s, &t) in g.generators().iter().zip(gen_images) {
                let p = g.mul(e, s);
                let img = g.mul(images[e as usize], t);
                if images[p as usize] == u32::MAX {
                    images[p as usize] = img;
                    queue.push_back(p);
                } else if images[p as usize] != img {
                    return Err(Error::NotAnAutomorphism("generator images violate a relation".into()));
                }
            }
        }
        let aut = Automorphism { images };
        aut.verify(g)?;
        Ok(aut)
    }

    /// x -> h^-1 x h computed on permutation keys; h need not lie in G.
    pub fn permutation_conjugation(g: &FiniteGroup, h: &[u32]) -> Result<Self> {
        let Repr::Permutation { degree } = g.repr() else {
            return Err(Error::NotAnAutomorphism("not a permutation group".into()));
        };
        if h.len() != *degree {
            return Err(Error::NotAnAutomorphism("degree mismatch".into()));
        }
        let mut hinv = vec![0u32; h.len()];
        for (i, &j) in h.iter().enumerate() {
            hinv[j as usize] = i as u32;
        }
        let images = g
            .all()
            .map(|x| {
                let k = g.key(x);
                // right action: h^-1 x h sends i to h(x(hinv(i)))
                let c: Key = (0..h.len()).map(|i| h[k[hinv[i] as usize] as usize]).collect();
                g.index_of(&c)
                    .ok_or_else(|| Error::NotAnAutomorphism("conjugate leaves the group".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let aut = Automorphism { images };
        aut.verify(g)?;
        Ok(aut)
    }

    /// (a, b) -> (b, a) on a direct square.
    pub fn swap(g: &FiniteGroup) -> Result<Self> {
        let Repr::Direct { left, right } = g.repr() else {
            return Err(Error::NotAnAutomorphism("swap needs a direct product".into()));
        };
        if left.elements != right.elements {
            return Err(Error::NotAnAutomorphism("factors differ".into()));
        }
        let images = g
            .all()
            .map(|x| {
                let k = g.key(x);
                g.index_of(&[k[1], k[0]]).expect("swapped pair")
            })
            .collect();
        let aut = Automorphism { images };
        aut.verify(g)?;
        Ok(aut)
    }

    pub fn verify(&self, g: &FiniteGroup) -> Result<()> {
        let n = g.order();
        let mut hit = vec![false; n];
        for &i in &self.images {
            if i as usize >= n || hit[i as usize] {
                return Err(Error::NotAnAutomorphism("not a bijection".into()));
            }
            hit[i as usize] = true;
        }
        let bad = (0..n as u32).into_par_iter().find_first(|&a| {
            (0..n as u32).any(|b| self.apply(g.mul(a, b)) != g.mul(self.apply(a), self.apply(b)))
        });
        match bad {
            Some(a) => Err(Error::NotAnAutomorphism(format!(
                "not multiplicative at {}",
                g.format_element(a)
            ))),
            None => Ok(()),
        }
    }
}

/// G ⋊ A where A is generated by the given automorphisms.
pub fn semidirect_product(g: &FiniteGroup, automorphisms: &[Automorphism], cap: usize) -> Result<FiniteGroup> {
    for a in automorphisms {
        a.verify(g)?;
    }
    let acting = FiniteGroup::generate(
        "A",
        Repr::Permutation { degree: g.order() },
        automorphisms.iter().map(|a| a.images.clone()).collect(),
        cap,
    )?;
    if g.order().saturating_mul(acting.order()) > cap {
        return Err(Error::OrderExceedsCap(cap));
    }
    let gens: Vec<Key> = g
        .generators()
        .iter()
        .map(|&x| vec![x, 0])
        .chain(acting.generators().iter().map(|&a| vec![0, a]))
        .collect();
    FiniteGroup::generate(
        &format!("{}:A{}", g.name(), acting.order()),
        Repr::Semidirect {
            base: Arc::new(g.clone()),
            acting: Arc::new(acting),
        },
        gens,
        cap,
    )
}

// ---------------------------------------------------------------------------
// Engel-like sets and identities

fn config_json(seq: &SequenceSpec) -> Value {
    json!({ "seq": seq.id, "conj": seq.conj })
}

/// Whether the step map of `seq` uses x (if not, one functional graph per y
/// serves every x).
fn step_uses_x(seq: &SequenceSpec) -> bool {
    matches!(seq.id, SequenceId::WGroup | SequenceId::UBggkpp)
}

/// Decides for every start value whether the orbit of `f` reaches the
/// identity (a fixed point of every step). Returns the verdicts for `starts`
/// and the number of map evaluations.
fn reaches_identity_memo(n: usize, starts: impl Iterator<Item = u32>, f: impl Fn(u32) -> u32) -> (bool, u64) {
    // 0 unknown, 1 on the current path, 2 reaches 1, 3 does not
    let mut status = vec![0u8; n];
    status[0] = 2;
    let mut steps = 0u64;
    let mut path = Vec::new();
    for s in starts {
        let mut c = s;
        path.clear();
        let result = loop {
            match status[c as usize] {
                0 => {
                    status[c as usize] = 1;
                    path.push(c);
                    c = f(c);
                    steps += 1;
                }
                1 => break 3,
                r => break r,
            }
        };
        for &p in &path {
            status[p as usize] = result;
        }
        if result == 3 {
            return (false, steps);
        }
    }
    (true, steps)
}

/// Orbit of a single pair; `stamp` marks visited states for this pair.
fn orbit_reaches_identity(start: u32, visited: &mut [u32], stamp: u32, f: impl Fn(u32) -> u32) -> (bool, u64) {
    let mut c = start;
    let mut steps = 0;
    loop {
        if c == 0 {
            return (true, steps);
        }
        if visited[c as usize] == stamp {
            return (false, steps);
        }
        visited[c as usize] = stamp;
        c = f(c);
        steps += 1;
    }
}

/// `{g : for all a the sequence u_n(a, g) reaches 1}`, decided exactly by
/// orbit analysis.
pub fn engel_like_set(g: &FiniteGroup, seq: &SequenceSpec) -> Result<(Subgroup, Report)> {
    if seq.kind() != crate::words::SequenceKind::Group {
        return Err(Error::WrongSequenceKind(seq.id.to_string()));
    }
    let n = g.order();
    let uses_x = step_uses_x(seq);
    let per_y: Vec<(bool, u64)> = (0..n as u32)
        .into_par_iter()
        .map_init(
            || (vec![0u32; n], 0u32),
            |(visited, stamp), y| {
                if uses_x {
                    let mut steps = 0;
                    for a in 0..n as u32 {
                        *stamp += 1;
                        let start = seq.group_seed(g, &a, &y);
                        let (ok, s) = orbit_reaches_identity(start, visited, *stamp, |c| seq.group_step(g, &c, &a, &y));
                        steps += s;
                        if !ok {
                            return (false, steps);
                        }
                    }
                    (true, steps)
                } else {
                    let starts = (0..n as u32).map(|a| seq.group_seed(g, &a, &y));
                    reaches_identity_memo(n, starts, |c| seq.group_step(g, &c, &0, &y))
                }
            },
        )
        .collect();
    let members: Vec<u32> = per_y
        .iter()
        .enumerate()
        .filter(|(_, (ok, _))| *ok)
        .map(|(i, _)| i as u32)
        .collect();
    let set = Subgroup::from_members(members);
    let mut report = Report::new("engel-set", Verdict::Holds);
    report.inputs = json!({ "group": g.name(), "order": n, "seq": config_json(seq) });
    report.iterations = per_y.iter().map(|(_, s)| s).sum();
    report.details = json!({ "size": set.order() });
    Ok((set, report))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Full,
    ClassReps,
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Strategy::Full),
            "class-reps" => Ok(Strategy::ClassReps),
            _ => Err(Error::syntax(s, "expected full or class-reps")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityResult {
    /// Least m <= n with u_m an identity.
    pub least: Option<usize>,
    /// Least pair in scan order with u_n(x,y) != 1.
    pub witness: Option<(u32, u32)>,
    pub pairs: u64,
}

/// Least k <= n with u_k(x,y) = 1.
fn first_trivial(g: &FiniteGroup, seq: &SequenceSpec, x: u32, y: u32, n: usize) -> Option<usize> {
    let mut c = seq.group_seed(g, &x, &y);
    for k in 1..=n {
        if k > 1 {
            c = seq.group_step(g, &c, &x, &y);
        }
        if c == 0 {
            return Some(k);
        }
    }
    None
}

/// Decides whether u_n(x,y) = 1 identically. With class representatives the
/// x range shrinks to one element per class; u_n(gxg^-1, gyg^-1) is the
/// conjugate of u_n(x,y), so nothing is lost.
pub fn identity_holds(g: &FiniteGroup, seq: &SequenceSpec, n: usize, strategy: Strategy) -> Result<(IdentityResult, Report)> {
    if seq.kind() != crate::words::SequenceKind::Group {
        return Err(Error::WrongSequenceKind(seq.id.to_string()));
    }
    let xs: Vec<u32> = match strategy {
        Strategy::Full => g.all().collect(),
        Strategy::ClassReps => g.class_reps(),
    };
    let order = g.order() as u64;
    let total = xs.len() as u64 * order;
    let pair = |i: u64| (xs[(i / order) as usize], (i % order) as u32);
    let failing = (0..total)
        .into_par_iter()
        .find_first(|&i| {
            let (x, y) = pair(i);
            first_trivial(g, seq, x, y, n).is_none()
        });
    let result = match failing {
        Some(i) => IdentityResult {
            least: None,
            witness: Some(pair(i)),
            pairs: i + 1,
        },
        None => {
            let least = (0..total)
                .into_par_iter()
                .map(|i| {
                    let (x, y) = pair(i);
                    first_trivial(g, seq, x, y, n).expect("no failing pair")
                })
                .max()
                .unwrap_or(1);
            IdentityResult {
                least: Some(least),
                witness: None,
                pairs: total,
            }
        }
    };
    let verdict = if result.witness.is_some() {
        Verdict::Fails
    } else {
        Verdict::Holds
    };
    let mut report = Report::new("identity", verdict);
    report.inputs = json!({
        "group": g.name(),
        "order": g.order(),
        "seq": config_json(seq),
        "n": n,
        "strategy": strategy,
    });
    if let Some((x, y)) = result.witness {
        report.witness = Some(json!({ "x": g.format_element(x), "y": g.format_element(y) }));
    }
    report.iterations = result.pairs;
    report.details = json!({ "least_n": result.least });
    Ok((result, report))
}

// ---------------------------------------------------------------------------
// CR-radical

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotypicComponent {
    /// Order and class-size multiset of the simple factor.
    pub simple_invariant: (usize, Vec<usize>),
    /// Number of simple factors.
    pub factors: usize,
    pub subgroup: Subgroup,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrRadical {
    pub radical: Subgroup,
    pub minimal_normal: Vec<Subgroup>,
    pub components: Vec<IsotypicComponent>,
}

/// Minimal normal subgroups of `h` under conjugation by `conj_gens` (which
/// must normalize h).
fn minimal_normal_in(g: &FiniteGroup, h: &Subgroup, conj_gens: &[u32]) -> Vec<Subgroup> {
    let mut closures: Vec<Subgroup> = Vec::new();
    for class in g.classes_within(h.members(), conj_gens).iter().skip(1) {
        let c = g.normal_closure_in(conj_gens, &[class[0]]);
        if !closures.contains(&c) {
            closures.push(c);
        }
    }
    let mut minimal: Vec<Subgroup> = closures
        .iter()
        .filter(|c| !closures.iter().any(|d| d.order() < c.order() && d.is_subset(c)))
        .cloned()
        .collect();
    minimal.sort_by(|a, b| a.members().cmp(b.members()));
    minimal
}

/// Product of the minimal normal subgroups of a group with trivial solvable
/// radical, grouped into isotypic components by the invariant of one simple
/// factor.
pub fn cr_radical(g: &FiniteGroup) -> Result<CrRadical> {
    let r = g.solvable_radical();
    if r.order() > 1 {
        return Err(Error::NotSemisimple(r.order()));
    }
    // minimal normal subgroups are normal closures of single elements; one
    // element per class suffices
    let mut closures: Vec<Subgroup> = Vec::new();
    for rep in g.class_reps().into_iter().skip(1) {
        let c = g.normal_closure(&[rep]);
        if !closures.contains(&c) {
            closures.push(c);
        }
    }
    let mut minimal: Vec<Subgroup> = closures
        .iter()
        .filter(|c| !closures.iter().any(|d| d.order() < c.order() && d.is_subset(c)))
        .cloned()
        .collect();
    minimal.sort_by(|a, b| a.members().cmp(b.members()));

    let mut components: Vec<IsotypicComponent> = Vec::new();
    for m in &minimal {
        let mg = g.subgroup_generators(m);
        let simple = minimal_normal_in(g, m, &mg)
            .into_iter()
            .next()
            .expect("nontrivial minimal normal subgroup");
        let inv = g.subgroup_invariant(&simple);
        let factors = factor_count(m.order(), inv.0);
        match components.iter_mut().find(|c| c.simple_invariant == inv) {
            Some(c) => {
                let mut seeds = g.subgroup_generators(&c.subgroup);
                seeds.extend(mg);
                c.subgroup = g.generate_subgroup(&seeds);
                c.factors += factors;
            }
            None => components.push(IsotypicComponent {
                simple_invariant: inv,
                factors,
                subgroup: m.clone(),
            }),
        }
    }
    let seeds: Vec<u32> = minimal.iter().flat_map(|m| g.subgroup_generators(m)).collect();
    let radical = g.generate_subgroup(&seeds);
    Ok(CrRadical {
        radical,
        minimal_normal: minimal,
        components,
    })
}

fn factor_count(total: usize, simple: usize) -> usize {
    let mut k = 0;
    let mut t = total;
    while t > 1 && t.is_multiple_of(simple) {
        t /= simple;
        k += 1;
    }
    k
}

// ---------------------------------------------------------------------------
// Engel automorphisms

/// Evaluates u_n(g, σ) inside G ⋊ ⟨σ⟩. Every iterate must lie in the G
/// factor; a violation is reported as an error.
pub fn engel_automorphism_test(g: &FiniteGroup, sigma: &Automorphism, seq: &SequenceSpec, cap: usize) -> Result<Report> {
    let ac = check_autocorrect(seq, 10)?;
    if ac.verdict != Verdict::Holds {
        return Err(Error::SequenceNotAutocorrect(seq.id.to_string()));
    }
    let h = semidirect_product(g, std::slice::from_ref(sigma), cap)?;
    let Repr::Semidirect { acting, .. } = h.repr() else {
        unreachable!("semidirect product")
    };
    let sigma_idx = acting
        .index_of(sigma.images())
        .expect("sigma lies in the acting group");
    let s = h.index_of(&[0, sigma_idx]).expect("sigma in the holomorph");
    let n = h.order();
    let outside = std::sync::atomic::AtomicU64::new(0);
    let in_g = |c: u32| h.key(c)[1] == 0;
    let results: Vec<(bool, u64)> = (0..g.order() as u32)
        .into_par_iter()
        .map_init(
            || vec![0u32; n],
            |visited, x| {
                let xg = h.index_of(&[x, 0]).expect("G embeds");
                let start = seq.group_seed(&h, &xg, &s);
                if !in_g(start) {
                    outside.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                }
                // stamps are x + 1, unique per start
                orbit_reaches_identity(start, visited, x + 1, |c| {
                    let next = seq.group_step(&h, &c, &xg, &s);
                    if !in_g(next) {
                        outside.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    }
                    next
                })
            },
        )
        .collect();
    let violations = outside.load(std::sync::atomic::Ordering::Relaxed);
    if violations > 0 {
        return Err(Error::SequenceNotAutocorrect(format!(
            "{}: {violations} iterates left the G factor",
            seq.id
        )));
    }
    let witness = results.iter().position(|(ok, _)| !ok);
    let verdict = if witness.is_some() {
        Verdict::NotEngel
    } else {
        Verdict::Engel
    };
    let mut report = Report::new("engel-automorphism", verdict);
    report.inputs = json!({ "group": g.name(), "order": g.order(), "seq": config_json(seq) });
    if let Some(w) = witness {
        report.witness = Some(json!({ "g": g.format_element(w as u32) }));
    }
    report.iterations = results.iter().map(|(_, s)| s).sum();
    report.details = json!({ "holomorph_order": n, "steps_outside_g": violations });
    Ok(report)
}

// ---------------------------------------------------------------------------
// JSON ingestion

fn schema(location: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::SchemaError {
        location: location.into(),
        reason: reason.into(),
    }
}

fn validation(location: impl Into<String>, source: Error) -> Error {
    Error::ValidationError {
        location: location.into(),
        source: Box::new(source),
    }
}

pub fn group_from_json(value: &Value, origin: &str) -> Result<FiniteGroup> {
    group_from_json_capped(value, origin, DEFAULT_ORDER_CAP)
}

pub fn group_from_json_capped(value: &Value, origin: &str, cap: usize) -> Result<FiniteGroup> {
    let obj = value.as_object().ok_or_else(|| schema(origin, "expected an object"))?;
    let rep = obj
        .get("representation")
        .and_then(Value::as_str)
        .ok_or_else(|| schema(origin, "missing \"representation\""))?;
    let gens_of = |key: &str| -> Result<&Vec<Value>> {
        obj.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| schema(origin, format!("missing array \"{key}\"")))
    };
    let name = obj
        .get("name")
        .and_then(Value::as_str)
        .unwrap_or(origin)
        .to_string();
    match rep {
        "permutation" => {
            let degree = obj
                .get("degree")
                .and_then(Value::as_u64)
                .ok_or_else(|| schema(origin, "missing \"degree\""))? as usize;
            let gens = gens_of("generators")?
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let loc = format!("{origin}: generators[{i}]");
                    let s = v.as_str().ok_or_else(|| schema(&loc, "expected cycle notation string"))?;
                    parse_cycles(s, degree).map_err(|e| validation(loc, e))
                })
                .collect::<Result<Vec<_>>>()?;
            FiniteGroup::generate(&name, Repr::Permutation { degree }, gens, cap).map_err(|e| validation(origin, e))
        }
        "matrix" => {
            let spec: FieldSpec = serde_json::from_value(obj.get("field").cloned().unwrap_or(Value::Null))
                .map_err(|e| schema(format!("{origin}: field"), e.to_string()))?;
            let field = match crate::field::make_field(&spec).map_err(|e| validation(format!("{origin}: field"), e))? {
                crate::field::AnyField::Finite(f) => f,
                crate::field::AnyField::Rationals(_) => {
                    return Err(schema(format!("{origin}: field"), "matrix groups need a finite field"))
                }
            };
            let projective = obj.get("modulo_center").and_then(Value::as_bool).unwrap_or(false);
            let mut dim = obj.get("dimension").and_then(Value::as_u64).map(|d| d as usize);
            let mut gens = Vec::new();
            for (i, v) in gens_of("generators")?.iter().enumerate() {
                let loc = format!("{origin}: generators[{i}]");
                let rows = v.as_array().ok_or_else(|| schema(&loc, "expected a list of rows"))?;
                let n = *dim.get_or_insert(rows.len());
                if rows.len() != n {
                    return Err(schema(&loc, format!("expected {n} rows")));
                }
                let mut key = Vec::with_capacity(n * n);
                for (r, row) in rows.iter().enumerate() {
                    let row = row.as_array().filter(|r| r.len() == n).ok_or_else(|| schema(format!("{loc}[{r}]"), format!("expected {n} entries")))?;
                    for (c, x) in row.iter().enumerate() {
                        let text = match x {
                            Value::String(s) => s.clone(),
                            Value::Number(num) => num.to_string(),
                            _ => return Err(schema(format!("{loc}[{r}][{c}]"), "expected scalar text")),
                        };
                        key.push(field.parse(&text).map_err(|e| validation(format!("{loc}[{r}][{c}]"), e))?);
                    }
                }
                gens.push(key);
            }
            let n = dim.ok_or_else(|| schema(origin, "cannot infer the matrix dimension"))?;
            FiniteGroup::generate(&name, Repr::Matrix { field, n, projective }, gens, cap).map_err(|e| validation(origin, e))
        }
        "product" => {
            let factors = gens_of("factors")?;
            let mut groups = factors
                .iter()
                .enumerate()
                .map(|(i, f)| group_from_json_capped(f, &format!("{origin}: factors[{i}]"), cap))
                .collect::<Result<Vec<_>>>()?;
            if groups.is_empty() {
                return Err(schema(origin, "product needs at least one factor"));
            }
            let mut acc = groups.remove(0);
            for f in groups {
                acc = direct_product(&acc, &f, cap).map_err(|e| validation(origin, e))?;
            }
            acc.set_name(name);
            Ok(acc)
        }
        other => Err(schema(origin, format!("unknown representation {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: usize) -> FiniteGroup {
        let cycle = format!("({})", (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" "));
        FiniteGroup::generate(
            "S",
            Repr::Permutation { degree: n },
            vec![parse_cycles("(1 2)", n).unwrap(), parse_cycles(&cycle, n).unwrap()],
            DEFAULT_ORDER_CAP,
        )
        .unwrap()
    }

    #[test]
    fn cycles_round_trip() {
        let p = parse_cycles("(1 2 3)(4 5)", 5).unwrap();
        assert_eq!(format_cycles(&p), "(1 2 3)(4 5)");
        assert_eq!(format_cycles(&parse_cycles("()", 3).unwrap()), "()");
        // left to right: (1 2) then (1 3) sends 1 -> 2, 2 -> 1 -> 3, 3 -> 1
        assert_eq!(format_cycles(&parse_cycles("(1 2)(1 3)", 3).unwrap()), "(1 2 3)");
        assert!(parse_cycles("(1 4)", 3).is_err());
    }

    #[test]
    fn s4_basics() {
        let g = sym(4);
        assert_eq!(g.order(), 24);
        assert_eq!(g.conjugacy_classes().len(), 5);
        for a in g.all() {
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
        let v4_seed = g.parse_element("(1 2)(3 4)").unwrap();
        let v4 = g.normal_closure(&[v4_seed]);
        assert_eq!(v4.order(), 4);
        assert_eq!(g.fitting_subgroup(), v4);
        assert_eq!(g.solvable_radical().order(), 24);
        assert!(g.verify_solvable_radical(&g.solvable_radical()));
        assert!(g.verify_fitting(&v4));
        let (set, _) = engel_like_set(&g, &SequenceId::EGroup.spec()).unwrap();
        assert_eq!(set, v4);
    }

    #[test]
    fn commutator_in_s3_is_a_three_cycle() {
        let g = sym(3);
        let a = g.parse_element("(1 2)").unwrap();
        let b = g.parse_element("(1 3)").unwrap();
        let e1 = SequenceId::EGroup.spec().group_seed(&g, &a, &b);
        assert_eq!(g.element_order(e1), 3);
    }

    #[test]
    fn trivial_group() {
        let g = FiniteGroup::generate("1", Repr::Permutation { degree: 3 }, vec![], 10).unwrap();
        assert_eq!(g.order(), 1);
        for id in SequenceId::GROUP {
            let (r, _) = identity_holds(&g, &id.spec(), 1, Strategy::Full).unwrap();
            assert_eq!(r.least, Some(1));
        }
        assert_eq!(g.normal_closure(&[]).order(), 1);
    }

    #[test]
    fn order_cap() {
        let err = FiniteGroup::generate(
            "S5",
            Repr::Permutation { degree: 5 },
            vec![parse_cycles("(1 2)", 5).unwrap(), parse_cycles("(1 2 3 4 5)", 5).unwrap()],
            100,
        )
        .unwrap_err();
        assert_eq!(err, Error::OrderExceedsCap(100));
    }

    #[test]
    fn quotient_s4_by_v4() {
        let g = sym(4);
        let v4 = g.fitting_subgroup();
        let (q, map) = g.quotient(&v4).unwrap();
        assert_eq!(q.order(), 6);
        assert_eq!(map.len(), 24);
        for a in g.all() {
            for b in g.all() {
                assert_eq!(map[g.mul(a, b) as usize], q.mul(map[a as usize], map[b as usize]));
            }
        }
    }

    #[test]
    fn semidirect_by_identity_is_isomorphic() {
        let g = sym(3);
        let h = semidirect_product(&g, &[Automorphism::identity(&g)], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(h.invariant(), g.invariant());
    }

    #[test]
    fn bad_automorphism_rejected() {
        let g = sym(3);
        // send both generators to the transposition: not bijective
        let t = g.generators()[0];
        let images = vec![t; g.generators().len()];
        assert!(matches!(
            Automorphism::from_generator_images(&g, &images),
            Err(Error::NotAnAutomorphism(_))
        ));
    }
}
