//! Finite permutation groups stored as a full element enumeration.
//!
//! Elements are sorted lexicographically by image array and addressed by
//! their index ([`Elem`]), so index order is the canonical order used for
//! every "minimal member" in the crate. The identity is always index 0.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{is_power_of, Permutation};

pub type Elem = u32;

pub const DEFAULT_CAP: usize = 200_000;
/// Groups up to this order get a precomputed Cayley table.
const TABLE_LIMIT: usize = 2600;

pub struct FiniteGroup {
    name: String,
    degree: usize,
    generators: Vec<Permutation>,
    generator_elems: Vec<Elem>,
    elements: Vec<Permutation>,
    lookup: HashMap<Permutation, Elem>,
    inverses: Vec<Elem>,
    orders: Vec<u32>,
    table: Option<Vec<Elem>>,
    classes: OnceLock<ClassData>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjClass {
    /// Least member (by element index).
    pub representative: Elem,
    pub members: Vec<Elem>,
    pub size: usize,
    pub element_order: u32,
}

struct ClassData {
    classes: Vec<ConjClass>,
    class_of: Vec<u32>,
    /// `transporter[x]` conjugates `x` to the least member of its class.
    transporter: Vec<Elem>,
    centralizers: Vec<OnceLock<Vec<Elem>>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("order", &self.order())
            .finish()
    }
}

impl FiniteGroup {
    /// Enumerates the closure of `gens`. Fails if the order exceeds `cap`.
    pub fn generate(gens: &[Permutation], cap: usize) -> Result<FiniteGroup> {
        Self::generate_named("custom", gens, cap)
    }

    pub fn generate_named(name: &str, gens: &[Permutation], cap: usize) -> Result<FiniteGroup> {
        let degree = gens
            .first()
            .map(Permutation::degree)
            .ok_or_else(|| Error::BadParameters("empty generator list".into()))?;
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        let id = Permutation::identity(degree);
        let mut seen: HashMap<Permutation, ()> = HashMap::new();
        seen.insert(id.clone(), ());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = x.then(g);
                if !seen.contains_key(&y) {
                    if seen.len() >= cap {
                        return Err(Error::ClosureExceedsCap { cap });
                    }
                    seen.insert(y.clone(), ());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_keys().collect();
        elements.sort();
        Ok(Self::from_sorted(name, degree, gens.to_vec(), elements))
    }

    fn from_sorted(name: &str, degree: usize, generators: Vec<Permutation>, elements: Vec<Permutation>) -> Self {
        let lookup: HashMap<Permutation, Elem> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as Elem))
            .collect();
        let generator_elems: Vec<Elem> = generators.iter().map(|g| lookup[g]).collect();
        let inverses: Vec<Elem> = elements.iter().map(|p| lookup[&p.inverse()]).collect();
        let orders: Vec<u32> = elements.iter().map(|p| p.order() as u32).collect();
        let mut group = FiniteGroup {
            name: name.to_string(),
            degree,
            generators,
            generator_elems,
            elements,
            lookup,
            inverses,
            orders,
            table: None,
            classes: OnceLock::new(),
        };
        if group.order() <= TABLE_LIMIT {
            group.table = Some(group.build_table());
        }
        group
    }

    /// Cayley table built from right-multiplication by generators along a
    /// BFS spanning tree, so only `n * |gens|` permutation products are formed.
    fn build_table(&self) -> Vec<Elem> {
        let n = self.order();
        let right: Vec<Vec<Elem>> = self
            .generators
            .iter()
            .map(|g| self.elements.iter().map(|x| self.lookup[&x.then(g)]).collect())
            .collect();
        let mut table = vec![0 as Elem; n * n];
        for a in 0..n {
            table[a * n] = a as Elem;
        }
        let mut visited = vec![false; n];
        visited[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(b) = queue.pop_front() {
            for r in &right {
                let c = r[b] as usize;
                if visited[c] {
                    continue;
                }
                visited[c] = true;
                for a in 0..n {
                    table[a * n + c] = r[table[a * n + b] as usize];
                }
                queue.push_back(c);
            }
        }
        table
    }

    pub fn set_name(&mut self, name: &str) {
        self.name = name.to_string();
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn generator_elems(&self) -> &[Elem] {
        &self.generator_elems
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn identity(&self) -> Elem {
        0
    }

    #[inline]
    pub fn perm(&self, e: Elem) -> &Permutation {
        &self.elements[e as usize]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<Elem> {
        self.lookup.get(p).copied()
    }

    pub fn elem(&self, p: &Permutation) -> Result<Elem> {
        self.index_of(p).ok_or(Error::NotInGroup)
    }

    /// Parses cycle notation in this group's degree and looks it up.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        self.elem(&Permutation::parse(s, self.degree)?)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.table {
            Some(t) => t[a as usize * self.order() + b as usize],
            None => self.lookup[&self.perm(a).then(self.perm(b))],
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a as usize]
    }

    /// `c a c^-1`.
    #[inline]
    pub fn conj(&self, a: Elem, c: Elem) -> Elem {
        self.mul(self.mul(c, a), self.inv(c))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        let o = self.order_of(a) as u64;
        let mut e = e % o;
        let mut base = a;
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn product(&self, elems: &[Elem]) -> Elem {
        elems.iter().fold(0, |acc, &x| self.mul(acc, x))
    }

    #[inline]
    pub fn order_of(&self, a: Elem) -> u32 {
        self.orders[a as usize]
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn commutes(&self, a: Elem, b: Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn closure(&self, gens: &[Elem]) -> Vec<Elem> {
        let n = self.order();
        let mut inside = vec![false; n];
        inside[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        let gens: Vec<Elem> = gens.iter().copied().filter(|&g| g != 0).collect();
        while i < out.len() {
            let x = out[i];
            i += 1;
            for &g in &gens {
                let y = self.mul(x, g);
                if !inside[y as usize] {
                    inside[y as usize] = true;
                    out.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Whether `gens` generate the whole group; stops as soon as it can tell.
    pub fn generates(&self, gens: &[Elem]) -> bool {
        let n = self.order();
        let mut inside = vec![false; n];
        inside[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            i += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y as usize] {
                    inside[y as usize] = true;
                    out.push(y);
                    if out.len() == n {
                        return true;
                    }
                }
            }
        }
        out.len() == n
    }

    /// Smallest subgroup containing `gens` and closed under conjugation by the group.
    pub fn normal_closure(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut current: Vec<Elem> = gens.to_vec();
        loop {
            let sub = self.closure(&current);
            let mut member = vec![false; self.order()];
            for &x in &sub {
                member[x as usize] = true;
            }
            let mut added = false;
            for h in current.clone() {
                for &s in &self.generator_elems {
                    let c = self.conj(h, s);
                    if !member[c as usize] {
                        member[c as usize] = true;
                        current.push(c);
                        added = true;
                    }
                }
            }
            if !added {
                return sub;
            }
        }
    }

    pub fn is_normal(&self, sub: &[Elem]) -> bool {
        let mut member = vec![false; self.order()];
        for &x in sub {
            member[x as usize] = true;
        }
        sub.iter()
            .all(|&x| self.generator_elems.iter().all(|&s| member[self.conj(x, s) as usize]))
    }

    pub fn derived_subgroup(&self) -> Vec<Elem> {
        let gens = &self.generator_elems;
        let mut comms = Vec::new();
        for &a in gens {
            for &b in gens {
                let c = self.commutator(a, b);
                if c != 0 {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms)
    }

    /// True iff the group has no `Z/p` quotient, i.e. `p` does not divide `|G/G'|`.
    pub fn is_p_perfect(&self, p: u64) -> bool {
        let ab = self.order() / self.derived_subgroup().len();
        !(ab as u64).is_multiple_of(p)
    }

    pub fn center(&self) -> Vec<Elem> {
        (0..self.order() as Elem)
            .filter(|&x| self.generator_elems.iter().all(|&s| self.commutes(x, s)))
            .collect()
    }

    /// Elements of the center whose order is a power of `p`.
    pub fn p_center(&self, p: u64) -> Vec<Elem> {
        self.center()
            .into_iter()
            .filter(|&x| is_power_of(self.order_of(x) as u64, p))
            .collect()
    }

    pub fn centralizer_of(&self, g: Elem) -> Vec<Elem> {
        (0..self.order() as Elem).filter(|&x| self.commutes(x, g)).collect()
    }

    /// Elements commuting with every element of `set`.
    pub fn centralizer_of_set(&self, set: &[Elem]) -> Vec<Elem> {
        (0..self.order() as Elem)
            .filter(|&x| set.iter().all(|&g| self.commutes(x, g)))
            .collect()
    }

    /// Closure of `elems` with the usual predicates attached.
    pub fn subgroup_query(&self, elems: &[Elem]) -> SubgroupInfo {
        let elements = self.closure(elems);
        let center = elements
            .iter()
            .copied()
            .filter(|&x| elements.iter().all(|&y| self.commutes(x, y)))
            .collect();
        SubgroupInfo {
            order: elements.len(),
            elements,
            center,
        }
    }

    /// The largest normal `p`-subgroup `O_p(G)`: the union of the classes whose
    /// normal closure is a `p`-group.
    pub fn largest_normal_p_subgroup(&self, p: u64) -> Vec<Elem> {
        let mut out = Vec::new();
        for class in self.conjugacy_classes() {
            if !is_power_of(class.element_order as u64, p) {
                continue;
            }
            let nc = self.normal_closure(&[class.representative]);
            if is_power_of(nc.len() as u64, p) {
                out.extend_from_slice(&class.members);
            }
        }
        out.sort_unstable();
        out
    }

    /// Frattini subgroup of a `p`-subgroup `u`: generated by its `p`-th powers and commutators.
    pub fn p_group_frattini(&self, u: &[Elem], p: u64) -> Vec<Elem> {
        let mut gens: Vec<Elem> = u.iter().map(|&x| self.pow(x, p)).filter(|&x| x != 0).collect();
        for &a in u {
            for &b in u {
                let c = self.commutator(a, b);
                if c != 0 {
                    gens.push(c);
                }
            }
        }
        gens.sort_unstable();
        gens.dedup();
        self.closure(&gens)
    }

    fn class_data(&self) -> &ClassData {
        self.classes.get_or_init(|| self.compute_classes())
    }

    fn compute_classes(&self) -> ClassData {
        let n = self.order();
        let mut class_of = vec![u32::MAX; n];
        let mut transporter = vec![0 as Elem; n];
        let mut raw: Vec<ConjClass> = Vec::new();
        for start in 0..n as Elem {
            if class_of[start as usize] != u32::MAX {
                continue;
            }
            let id = raw.len() as u32;
            class_of[start as usize] = id;
            transporter[start as usize] = 0;
            let mut members = vec![start];
            let mut i = 0;
            while i < members.len() {
                let x = members[i];
                i += 1;
                for &s in &self.generator_elems {
                    let y = self.conj(x, s);
                    if class_of[y as usize] == u32::MAX {
                        class_of[y as usize] = id;
                        transporter[y as usize] = self.mul(transporter[x as usize], self.inv(s));
                        members.push(y);
                    }
                }
            }
            members.sort_unstable();
            raw.push(ConjClass {
                representative: start,
                size: members.len(),
                members,
                element_order: self.order_of(start),
            });
        }
        let mut perm: Vec<usize> = (0..raw.len()).collect();
        perm.sort_by_key(|&i| (raw[i].size, raw[i].representative));
        let mut new_id = vec![0u32; raw.len()];
        for (new, &old) in perm.iter().enumerate() {
            new_id[old] = new as u32;
        }
        for c in class_of.iter_mut() {
            *c = new_id[*c as usize];
        }
        let classes: Vec<ConjClass> = perm.into_iter().map(|i| raw[i].clone()).collect();
        let centralizers = (0..classes.len()).map(|_| OnceLock::new()).collect();
        ClassData {
            classes,
            class_of,
            transporter,
            centralizers,
        }
    }

    /// Conjugacy classes ordered by size, then least member.
    pub fn conjugacy_classes(&self) -> &[ConjClass] {
        &self.class_data().classes
    }

    pub fn class_of(&self, e: Elem) -> usize {
        self.class_data().class_of[e as usize] as usize
    }

    /// An element `t` with `t e t^-1` the least member of the class of `e`.
    pub fn transporter(&self, e: Elem) -> Elem {
        self.class_data().transporter[e as usize]
    }

    /// Centralizer of the least member of class `class`, cached.
    pub fn class_centralizer(&self, class: usize) -> &[Elem] {
        let data = self.class_data();
        data.centralizers[class].get_or_init(|| self.centralizer_of(data.classes[class].representative))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SubgroupInfo {
    pub order: usize,
    pub elements: Vec<Elem>,
    pub center: Vec<Elem>,
}

impl SubgroupInfo {
    pub fn is_p_group(&self, p: u64) -> bool {
        is_power_of(self.order as u64, p)
    }

    /// Order coprime to `p`.
    pub fn is_p_prime(&self, p: u64) -> bool {
        !(self.order as u64).is_multiple_of(p)
    }
}
