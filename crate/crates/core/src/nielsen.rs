//! Nielsen classes: enumeration, canonical forms under conjugation, and
//! quotients by supplied automorphisms.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::hom::GroupHom;
use crate::perm::gcd;

pub const MIN_RANK: usize = 3;
pub const MAX_RANK: usize = 8;

pub type Tuple = Vec<Elem>;

/// Conjugacy classes with multiplicities, keyed by class index in
/// [`FiniteGroup::conjugacy_classes`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassMultiset {
    pub entries: Vec<(usize, usize)>,
}

impl ClassMultiset {
    pub fn new(g: &FiniteGroup, mut entries: Vec<(usize, usize)>) -> Result<ClassMultiset> {
        entries.retain(|&(_, m)| m > 0);
        entries.sort_unstable();
        let mut merged: Vec<(usize, usize)> = Vec::new();
        for (c, m) in entries {
            if c >= g.conjugacy_classes().len() {
                return Err(Error::UnknownClass(format!("class index {c}")));
            }
            if g.conjugacy_classes()[c].representative == 0 {
                return Err(Error::UnknownClass("identity class".into()));
            }
            match merged.last_mut() {
                Some((last, lm)) if *last == c => *lm += m,
                _ => merged.push((c, m)),
            }
        }
        let cm = ClassMultiset { entries: merged };
        let r = cm.r();
        if !(MIN_RANK..=MAX_RANK).contains(&r) {
            return Err(Error::RankOutOfRange {
                r,
                min: MIN_RANK,
                max: MAX_RANK,
            });
        }
        Ok(cm)
    }

    /// Parses selectors such as `"3+:2,3-:2"`, `"2:4"` or `"(1 2 3):2"`.
    ///
    /// `ORDER+` and `ORDER-` pick the first and second class of that element
    /// order in class order; a bare `ORDER` must be unambiguous.
    pub fn parse(g: &FiniteGroup, s: &str) -> Result<ClassMultiset> {
        let mut entries = Vec::new();
        let items = split_top_level(s);
        if items.is_empty() {
            return Err(Error::Parse("empty class selector".into()));
        }
        for item in items {
            let (sel, mult) = match item.rfind(':') {
                Some(i) if !item[i + 1..].contains(')') => {
                    let m = item[i + 1..]
                        .trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad multiplicity in {item:?}")))?;
                    (item[..i].trim(), m)
                }
                _ => (item.trim(), 1),
            };
            entries.push((select_class(g, sel)?, mult));
        }
        ClassMultiset::new(g, entries)
    }

    pub fn r(&self) -> usize {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    /// Class indices with multiplicity, ascending.
    pub fn expanded(&self) -> Vec<usize> {
        self.entries
            .iter()
            .flat_map(|&(c, m)| std::iter::repeat_n(c, m))
            .collect()
    }

    /// Every distinct ordering of the multiset, in lexicographic order.
    pub fn orderings(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut counts: Vec<(usize, usize)> = self.entries.clone();
        let mut cur = Vec::with_capacity(self.r());
        fn rec(counts: &mut [(usize, usize)], cur: &mut Vec<usize>, r: usize, out: &mut Vec<Vec<usize>>) {
            if cur.len() == r {
                out.push(cur.clone());
                return;
            }
            for i in 0..counts.len() {
                if counts[i].1 > 0 {
                    counts[i].1 -= 1;
                    cur.push(counts[i].0);
                    rec(counts, cur, r, out);
                    cur.pop();
                    counts[i].1 += 1;
                }
            }
        }
        let r = self.r();
        rec(&mut counts, &mut cur, r, &mut out);
        out
    }

    pub fn contains_tuple(&self, g: &FiniteGroup, tuple: &[Elem]) -> bool {
        let mut classes: Vec<usize> = tuple.iter().map(|&x| g.class_of(x)).collect();
        classes.sort_unstable();
        classes == self.expanded()
    }

    pub fn label(&self, g: &FiniteGroup) -> String {
        self.entries
            .iter()
            .map(|&(c, m)| format!("{}:{}", class_label(g, c), m))
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if ch == ',' && depth == 0 {
            if !cur.trim().is_empty() {
                out.push(cur.trim().to_string());
            }
            cur.clear();
        } else {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

fn select_class(g: &FiniteGroup, sel: &str) -> Result<usize> {
    if sel.starts_with('(') {
        let e = g.parse_elem(sel).map_err(|_| Error::UnknownClass(sel.to_string()))?;
        return Ok(g.class_of(e));
    }
    let (digits, sign) = match sel.chars().last() {
        Some('+') => (&sel[..sel.len() - 1], Some(0)),
        Some('-') => (&sel[..sel.len() - 1], Some(1)),
        _ => (sel, None),
    };
    let order: u32 = digits
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad class selector {sel:?}")))?;
    let candidates: Vec<usize> = g
        .conjugacy_classes()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.element_order == order)
        .map(|(i, _)| i)
        .collect();
    match sign {
        Some(k) => candidates.get(k).copied().ok_or_else(|| Error::UnknownClass(sel.to_string())),
        None if candidates.len() == 1 => Ok(candidates[0]),
        None if candidates.is_empty() => Err(Error::UnknownClass(sel.to_string())),
        None => Err(Error::UnknownClass(format!("{sel} is ambiguous; add + or -"))),
    }
}

/// `ORDER`, `ORDER+` or `ORDER-` for a class, matching the selector grammar.
pub fn class_label(g: &FiniteGroup, class: usize) -> String {
    let order = g.conjugacy_classes()[class].element_order;
    let same: Vec<usize> = g
        .conjugacy_classes()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.element_order == order)
        .map(|(i, _)| i)
        .collect();
    match same.iter().position(|&c| c == class) {
        _ if same.len() == 1 => format!("{order}"),
        Some(0) => format!("{order}+"),
        Some(1) => format!("{order}-"),
        _ => g.perm(g.conjugacy_classes()[class].representative).to_cycle_string(),
    }
}

/// Lexicographic minimum of the tuple over simultaneous conjugation by `g`.
pub fn canonical(g: &FiniteGroup, tuple: &[Elem]) -> Tuple {
    let t = g.transporter(tuple[0]);
    let base: Tuple = tuple.iter().map(|&x| g.conj(x, t)).collect();
    let cent = g.class_centralizer(g.class_of(tuple[0]));
    let mut best = base.clone();
    let mut cand = vec![0 as Elem; base.len()];
    for &c in cent {
        if c == 0 {
            continue;
        }
        let mut better = false;
        let mut i = 1;
        while i < base.len() {
            let y = g.conj(base[i], c);
            cand[i] = y;
            if y < best[i] {
                better = true;
                break;
            }
            if y > best[i] {
                break;
            }
            i += 1;
        }
        if better {
            best[0] = base[0];
            best[1..=i].copy_from_slice(&cand[1..=i]);
            for j in i + 1..base.len() {
                best[j] = g.conj(base[j], c);
            }
        }
    }
    best
}

pub fn is_nielsen_tuple(g: &FiniteGroup, cm: &ClassMultiset, tuple: &[Elem]) -> bool {
    tuple.len() == cm.r() && g.product(tuple) == 0 && cm.contains_tuple(g, tuple) && g.generates(tuple)
}

/// An element of `ni(G, C)` modulo conjugation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InnerClass {
    pub canonical: Tuple,
    /// Number of tuples in the conjugation class, `|G| / |Z(G)|`.
    pub orbit_size: usize,
}

/// Every tuple of `ni(G, C)`, by backtracking over class orderings with the
/// last entry forced by product-one. Intended for small cases.
pub fn enumerate_nielsen(g: &FiniteGroup, cm: &ClassMultiset) -> Vec<Tuple> {
    let mut out = Vec::new();
    for ordering in cm.orderings() {
        let mut cur = Vec::with_capacity(ordering.len());
        backtrack(g, &ordering, 0, 0, &mut cur, &mut |t| {
            if g.generates(t) {
                out.push(t.to_vec());
            }
        });
    }
    out.sort();
    out
}

fn backtrack(
    g: &FiniteGroup,
    ordering: &[usize],
    depth: usize,
    prod: Elem,
    cur: &mut Vec<Elem>,
    emit: &mut dyn FnMut(&[Elem]),
) {
    let r = ordering.len();
    if depth == r - 1 {
        let last = g.inv(prod);
        if g.class_of(last) == ordering[r - 1] {
            cur.push(last);
            emit(cur);
            cur.pop();
        }
        return;
    }
    for &x in &g.conjugacy_classes()[ordering[depth]].members {
        cur.push(x);
        backtrack(g, ordering, depth + 1, g.mul(prod, x), cur, emit);
        cur.pop();
    }
}

/// Canonical representatives of the given tuples, deduplicated and sorted.
pub fn inner_classes(g: &FiniteGroup, tuples: &[Tuple]) -> Vec<InnerClass> {
    let orbit_size = g.order() / g.center().len();
    let set: HashSet<Tuple> = tuples.iter().map(|t| canonical(g, t)).collect();
    let mut out: Vec<InnerClass> = set
        .into_iter()
        .map(|canonical| InnerClass { canonical, orbit_size })
        .collect();
    out.sort_by(|a, b| a.canonical.cmp(&b.canonical));
    out
}

/// `ni(G, C)^inn` directly: the first entry is pinned to its class minimum,
/// so only centralizer orbits need deduplicating. Orderings run in parallel.
pub fn inner_nielsen(g: &FiniteGroup, cm: &ClassMultiset) -> Vec<InnerClass> {
    let orderings = cm.orderings();
    let found: Vec<Vec<Tuple>> = orderings
        .par_iter()
        .map(|ordering| {
            let first = g.conjugacy_classes()[ordering[0]].representative;
            let mut seen: HashSet<Tuple> = HashSet::new();
            let mut keep = Vec::new();
            let mut cur = vec![first];
            backtrack(g, ordering, 1, first, &mut cur, &mut |t| {
                let c = canonical(g, t);
                if !seen.contains(&c) {
                    if g.generates(&c) {
                        keep.push(c.clone());
                    }
                    seen.insert(c);
                }
            });
            keep
        })
        .collect();
    let orbit_size = g.order() / g.center().len();
    let mut out: Vec<InnerClass> = found
        .into_iter()
        .flatten()
        .map(|canonical| InnerClass { canonical, orbit_size })
        .collect();
    out.sort_by(|a, b| a.canonical.cmp(&b.canonical));
    out
}

/// Index of canonical tuples for fast lookup.
pub fn index_of_canonicals(inner: &[InnerClass]) -> HashMap<Tuple, usize> {
    inner.iter().enumerate().map(|(i, c)| (c.canonical.clone(), i)).collect()
}

/// Checks that `alpha` is an automorphism of `g` permuting the classes of `cm`.
pub fn check_automorphism(g: &Arc<FiniteGroup>, cm: &ClassMultiset, alpha: &GroupHom) -> Result<()> {
    if alpha.source().elements() != g.elements() || alpha.target().elements() != g.elements() {
        return Err(Error::NotAnAutomorphism);
    }
    if alpha.kernel().len() != 1 || !alpha.is_surjective() {
        return Err(Error::NotAnAutomorphism);
    }
    let mut image: Vec<usize> = cm
        .expanded()
        .iter()
        .map(|&c| g.class_of(alpha.apply(g.conjugacy_classes()[c].representative)))
        .collect();
    image.sort_unstable();
    if image != cm.expanded() {
        return Err(Error::ClassNotPreserved);
    }
    Ok(())
}

/// Union-find merge of points under a list of maps on point indices.
pub(crate) fn merge_points(n: usize, images: impl Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in images(i) {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

/// Inner classes merged under the entrywise action of the given automorphisms.
/// Each group lists inner-class indices; groups are ordered by least member.
pub fn absolute_classes(
    g: &Arc<FiniteGroup>,
    cm: &ClassMultiset,
    inner: &[InnerClass],
    autos: &[GroupHom],
) -> Result<Vec<Vec<usize>>> {
    for a in autos {
        check_automorphism(g, cm, a)?;
    }
    let index = index_of_canonicals(inner);
    let images = |i: usize| -> Vec<usize> {
        autos
            .iter()
            .map(|a| {
                let t: Tuple = inner[i].canonical.iter().map(|&x| a.apply(x)).collect();
                index[&canonical(g, &t)]
            })
            .collect()
    };
    Ok(merge_points(inner.len(), images))
}

/// True iff raising each class of `cm` to the `n`-th power permutes the multiset.
///
/// `n` must be prime to the element orders occurring in `cm`.
pub fn check_rationality(g: &FiniteGroup, cm: &ClassMultiset, n: u64) -> Result<bool> {
    let exponent = cm
        .entries
        .iter()
        .fold(1u64, |acc, &(c, _)| crate::perm::lcm(acc, g.conjugacy_classes()[c].element_order as u64));
    if gcd(n, exponent) != 1 {
        return Err(Error::BadParameters(format!("{n} is not prime to the class orders")));
    }
    let mut powered: Vec<usize> = cm
        .expanded()
        .iter()
        .map(|&c| g.class_of(g.pow(g.conjugacy_classes()[c].representative, n)))
        .collect();
    powered.sort_unstable();
    Ok(powered == cm.expanded())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;
    use crate::presets::parse_and_make;

    fn group(s: &str) -> Arc<FiniteGroup> {
        parse_and_make(s, DEFAULT_CAP).unwrap().group
    }

    #[test]
    fn selectors() {
        let a4 = group("A(4)");
        let cm = ClassMultiset::parse(&a4, "3+:2,3-:2").unwrap();
        assert_eq!(cm.r(), 4);
        assert_eq!(cm.entries.len(), 2);
        assert_eq!(cm.label(&a4), "3+:2,3-:2");
        assert!(matches!(ClassMultiset::parse(&a4, "3:4"), Err(Error::UnknownClass(_))));
        assert!(matches!(ClassMultiset::parse(&a4, "2:2"), Err(Error::RankOutOfRange { .. })));
        assert!(ClassMultiset::parse(&a4, "").is_err());
        let explicit = ClassMultiset::parse(&a4, "(1 2 3):2,(1 3 2):2").unwrap();
        assert_eq!(explicit, cm);
        assert_eq!(cm.orderings().len(), 6);
    }

    #[test]
    fn rank_limit() {
        let a4 = group("A(4)");
        assert!(matches!(
            ClassMultiset::parse(&a4, "3+:5,3-:4"),
            Err(Error::RankOutOfRange { r: 9, .. })
        ));
    }

    #[test]
    fn z3_six_inner_classes() {
        let g = group("C(3)");
        let cm = ClassMultiset::parse(&g, "3+:2,3-:2").unwrap();
        assert_eq!(inner_nielsen(&g, &cm).len(), 6);
    }

    #[test]
    fn s3_involutions() {
        let g = group("D(3)");
        let cm = ClassMultiset::parse(&g, "2:4").unwrap();
        let fast = inner_nielsen(&g, &cm);
        assert_eq!(fast.len(), 4);
        assert_eq!(inner_classes(&g, &enumerate_nielsen(&g, &cm)), fast);
    }

    #[test]
    fn fast_path_agrees_with_full_enumeration_on_a4() {
        let g = group("A(4)");
        let cm = ClassMultiset::parse(&g, "3+:2,3-:2").unwrap();
        let all = enumerate_nielsen(&g, &cm);
        let slow = inner_classes(&g, &all);
        let fast = inner_nielsen(&g, &cm);
        assert_eq!(slow, fast);
        assert_eq!(fast.len(), 30);
        assert_eq!(all.len(), 30 * 12);
        for t in &all {
            assert!(is_nielsen_tuple(&g, &cm, t));
        }
    }

    #[test]
    fn canonical_is_conjugation_invariant() {
        let g = group("A(4)");
        let cm = ClassMultiset::parse(&g, "3+:2,3-:2").unwrap();
        for t in enumerate_nielsen(&g, &cm) {
            let c = canonical(&g, &t);
            assert_eq!(canonical(&g, &c), c);
            for h in 0..g.order() as Elem {
                let u: Tuple = t.iter().map(|&x| g.conj(x, h)).collect();
                assert_eq!(canonical(&g, &u), c);
                assert!(c <= u);
            }
        }
    }

    #[test]
    fn equal_involutions_do_not_generate() {
        let g = group("D(9)");
        let x = g.parse_elem("(2 9)(3 8)(4 7)(5 6)").unwrap();
        let cm = ClassMultiset::parse(&g, "2:4").unwrap();
        assert!(!is_nielsen_tuple(&g, &cm, &[x, x, x, x]));
    }

    #[test]
    fn not_p_perfect_gives_nothing() {
        let g = group("C(6)");
        let cm = ClassMultiset::parse(&g, "3+:2,3-:2").unwrap();
        assert!(inner_nielsen(&g, &cm).is_empty());
    }

    #[test]
    fn rationality() {
        let a4 = group("A(4)");
        let cm = ClassMultiset::parse(&a4, "3+:2,3-:2").unwrap();
        assert!(check_rationality(&a4, &cm, 2).unwrap());
        assert!(check_rationality(&a4, &cm, 1).unwrap());
        let lop = ClassMultiset::parse(&a4, "3+:3").unwrap();
        assert!(!check_rationality(&a4, &lop, 2).unwrap());
        assert!(check_rationality(&a4, &cm, 3).is_err());
        let a5 = group("A(5)");
        let c = ClassMultiset::parse(&a5, "5+:1,5+:1,5+:1").unwrap();
        assert!(!check_rationality(&a5, &c, 2).unwrap());
        assert!(check_rationality(&a5, &c, 4).unwrap());
    }

    #[test]
    fn identity_automorphism_changes_nothing() {
        let g = group("A(4)");
        let cm = ClassMultiset::parse(&g, "3+:2,3-:2").unwrap();
        let inner = inner_nielsen(&g, &cm);
        let groups = absolute_classes(&g, &cm, &inner, &[GroupHom::identity(g.clone())]).unwrap();
        assert_eq!(groups.len(), inner.len());
    }
}
