//! The braid action on Nielsen tuples, reduced classes for `r = 4`, and the
//! orbits of `M4bar = <gamma_inf, gamma_1>` together with their cusps.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::hom::GroupHom;
use crate::nielsen::{self, canonical, ClassMultiset, InnerClass, Tuple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BraidGen {
    /// 1-based: `q_i` twists positions `i` and `i + 1`.
    pub index: usize,
    pub inverse: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BraidWord(pub Vec<BraidGen>);

impl BraidWord {
    pub fn q(i: usize) -> BraidWord {
        BraidWord(vec![BraidGen { index: i, inverse: false }])
    }

    pub fn q_inv(i: usize) -> BraidWord {
        BraidWord(vec![BraidGen { index: i, inverse: true }])
    }

    pub fn then(mut self, other: &BraidWord) -> BraidWord {
        self.0.extend_from_slice(&other.0);
        self
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord(
            self.0
                .iter()
                .rev()
                .map(|g| BraidGen {
                    index: g.index,
                    inverse: !g.inverse,
                })
                .collect(),
        )
    }

    /// `q_1 q_2 ... q_{r-1}`.
    pub fn shift(r: usize) -> BraidWord {
        BraidWord((1..r).map(|index| BraidGen { index, inverse: false }).collect())
    }

    pub fn gamma_zero() -> BraidWord {
        BraidWord::q(1).then(&BraidWord::q(2))
    }

    pub fn gamma_one() -> BraidWord {
        BraidWord::shift(4)
    }

    pub fn gamma_inf() -> BraidWord {
        BraidWord::q(2)
    }

    pub fn max_index(&self) -> usize {
        self.0.iter().map(|g| g.index).max().unwrap_or(0)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|g| {
                if g.inverse {
                    format!("q{}^-1", g.index)
                } else {
                    format!("q{}", g.index)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    /// Accepts `q1 q2 q3^-1`, `q1q2`, and the names `sh`, `gamma0`, `gamma1`, `gammaInf`.
    fn from_str(s: &str) -> Result<BraidWord> {
        let mut word = BraidWord::default();
        for tok in s.split_whitespace() {
            match tok {
                "1" => {}
                "sh" | "gamma1" => word = word.then(&BraidWord::gamma_one()),
                "gamma0" => word = word.then(&BraidWord::gamma_zero()),
                "gammaInf" => word = word.then(&BraidWord::gamma_inf()),
                _ => {
                    let mut rest = tok;
                    while !rest.is_empty() {
                        let body = rest
                            .strip_prefix('q')
                            .ok_or_else(|| Error::Parse(format!("bad braid token {tok:?}")))?;
                        let digits = body.chars().take_while(|c| c.is_ascii_digit()).count();
                        let index: usize = body[..digits]
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad braid token {tok:?}")))?;
                        if index == 0 {
                            return Err(Error::Parse("braid generators start at q1".into()));
                        }
                        rest = &body[digits..];
                        let inverse = rest.starts_with("^-1");
                        if inverse {
                            rest = &rest[3..];
                        }
                        word.0.push(BraidGen { index, inverse });
                    }
                }
            }
        }
        Ok(word)
    }
}

/// `q_i: (g_i, g_{i+1}) -> (g_i g_{i+1} g_i^-1, g_i)`, its inverse
/// `(g_i, g_{i+1}) -> (g_{i+1}, g_{i+1}^-1 g_i g_{i+1})`, applied left to right.
pub fn apply_braid(g: &FiniteGroup, tuple: &[Elem], word: &BraidWord) -> Result<Tuple> {
    if word.max_index() >= tuple.len() {
        return Err(Error::BadParameters(format!(
            "braid word {word} needs more than {} entries",
            tuple.len()
        )));
    }
    let mut t = tuple.to_vec();
    for gen in &word.0 {
        let i = gen.index - 1;
        let (a, b) = (t[i], t[i + 1]);
        if gen.inverse {
            t[i] = b;
            t[i + 1] = g.conj(a, g.inv(b));
        } else {
            t[i] = g.conj(b, a);
            t[i + 1] = a;
        }
    }
    Ok(t)
}

/// A class of `ni(G, C)^{inn,rd}`: inner classes merged by `Q''`.
#[derive(Debug, Clone, Serialize)]
pub struct ReducedClass {
    /// Least inner canonical in the class.
    pub canonical: Tuple,
    /// Inner class indices in the `Q''` orbit.
    pub inner_members: Vec<usize>,
    pub q_length: usize,
}

/// Inner classes grouped into `Q'' = <sh^2, q1 q3^-1>` orbits.
pub fn reduced_classes(g: &FiniteGroup, inner: &[InnerClass]) -> Result<(Vec<ReducedClass>, Vec<usize>)> {
    if let Some(c) = inner.first() {
        if c.canonical.len() != 4 {
            return Err(Error::RankNotFour(c.canonical.len()));
        }
    }
    let index = nielsen::index_of_canonicals(inner);
    let sh2 = BraidWord::shift(4).then(&BraidWord::shift(4));
    let q13 = BraidWord::q(1).then(&BraidWord::q_inv(3));
    let words = [sh2, q13];
    let step = |i: usize| -> Vec<usize> {
        words
            .iter()
            .map(|w| {
                let t = apply_braid(g, &inner[i].canonical, w).expect("rank 4");
                index[&canonical(g, &t)]
            })
            .collect()
    };
    let groups = nielsen::merge_points(inner.len(), step);
    let mut out: Vec<ReducedClass> = groups
        .into_iter()
        .map(|members| ReducedClass {
            canonical: inner[members[0]].canonical.clone(),
            q_length: members.len(),
            inner_members: members,
        })
        .collect();
    out.sort_by(|a, b| a.canonical.cmp(&b.canonical));
    let mut inner_to_reduced = vec![0; inner.len()];
    for (ri, rc) in out.iter().enumerate() {
        for &m in &rc.inner_members {
            inner_to_reduced[m] = ri;
        }
    }
    Ok((out, inner_to_reduced))
}

#[derive(Debug, Clone, Serialize)]
pub struct CuspOrbit {
    /// Positions within the braid orbit, in `gamma_inf` cycle order from the least.
    pub members: Vec<usize>,
    pub width: usize,
    pub label: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct BraidOrbit {
    /// Reduced class indices, ascending.
    pub members: Vec<usize>,
    /// Induced permutations on positions in `members`.
    pub gamma_zero: Vec<u32>,
    pub gamma_one: Vec<u32>,
    pub gamma_inf: Vec<u32>,
    pub cusps: Vec<CuspOrbit>,
}

impl BraidOrbit {
    pub fn degree(&self) -> usize {
        self.members.len()
    }

    pub fn position(&self, reduced: usize) -> Option<usize> {
        self.members.binary_search(&reduced).ok()
    }

    pub fn cusp_of(&self, pos: usize) -> usize {
        self.cusps
            .iter()
            .position(|c| c.members.contains(&pos))
            .expect("cusps partition the orbit")
    }
}

/// Everything about `ni(G, C)` at `r = 4`: inner and reduced classes,
/// `gamma` actions, braid orbits and cusps.
#[derive(Debug, Clone)]
pub struct Hurwitz {
    pub group: Arc<FiniteGroup>,
    pub classes: ClassMultiset,
    pub inner: Vec<InnerClass>,
    pub inner_index: HashMap<Tuple, usize>,
    pub reduced: Vec<ReducedClass>,
    pub inner_to_reduced: Vec<usize>,
    pub gamma_zero: Vec<u32>,
    pub gamma_one: Vec<u32>,
    pub gamma_inf: Vec<u32>,
    pub orbits: Vec<BraidOrbit>,
    pub orbit_of: Vec<usize>,
}

impl Hurwitz {
    pub fn compute(group: Arc<FiniteGroup>, classes: ClassMultiset) -> Result<Hurwitz> {
        let inner = nielsen::inner_nielsen(&group, &classes);
        Self::from_inner(group, classes, inner)
    }

    pub fn from_inner(group: Arc<FiniteGroup>, classes: ClassMultiset, inner: Vec<InnerClass>) -> Result<Hurwitz> {
        if classes.r() != 4 {
            return Err(Error::RankNotFour(classes.r()));
        }
        let g = &*group;
        let (reduced, inner_to_reduced) = reduced_classes(g, &inner)?;
        let inner_index = nielsen::index_of_canonicals(&inner);
        let act = |w: &BraidWord| -> Vec<u32> {
            reduced
                .iter()
                .map(|rc| {
                    let t = apply_braid(g, &rc.canonical, w).expect("rank 4");
                    inner_to_reduced[inner_index[&canonical(g, &t)]] as u32
                })
                .collect()
        };
        let gamma_zero = act(&BraidWord::gamma_zero());
        let gamma_one = act(&BraidWord::gamma_one());
        let gamma_inf = act(&BraidWord::gamma_inf());
        let orbit_sets = nielsen::merge_points(reduced.len(), |i| {
            vec![gamma_one[i] as usize, gamma_inf[i] as usize]
        });
        let mut orbit_sets = orbit_sets;
        orbit_sets.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        let mut orbit_of = vec![0; reduced.len()];
        let mut orbits = Vec::new();
        for (oi, members) in orbit_sets.into_iter().enumerate() {
            for &m in &members {
                orbit_of[m] = oi;
            }
            let local = |perm: &[u32]| -> Vec<u32> {
                members
                    .iter()
                    .map(|&m| members.binary_search(&(perm[m] as usize)).expect("orbit closed") as u32)
                    .collect()
            };
            let gz = local(&gamma_zero);
            let go = local(&gamma_one);
            let gi = local(&gamma_inf);
            let cusps = cusp_orbits(&gi, oi);
            orbits.push(BraidOrbit {
                members,
                gamma_zero: gz,
                gamma_one: go,
                gamma_inf: gi,
                cusps,
            });
        }
        Ok(Hurwitz {
            group,
            classes,
            inner,
            inner_index,
            reduced,
            inner_to_reduced,
            gamma_zero,
            gamma_one,
            gamma_inf,
            orbits,
            orbit_of,
        })
    }

    /// Reduced class of an arbitrary tuple in the Nielsen class.
    pub fn reduced_of(&self, tuple: &[Elem]) -> Option<usize> {
        let c = canonical(&self.group, tuple);
        self.inner_index.get(&c).map(|&i| self.inner_to_reduced[i])
    }

    /// The tuple representing position `pos` of orbit `orbit`.
    pub fn tuple(&self, orbit: usize, pos: usize) -> &Tuple {
        &self.reduced[self.orbits[orbit].members[pos]].canonical
    }

    /// Every inner canonical in the reduced class at `pos` of `orbit`.
    pub fn combined_class(&self, orbit: usize, pos: usize) -> impl Iterator<Item = &Tuple> {
        let rc = &self.reduced[self.orbits[orbit].members[pos]];
        rc.inner_members.iter().map(move |&i| &self.inner[i].canonical)
    }

    /// Reduced classes merged under automorphisms of the group (absolute-reduced classes).
    pub fn absolute_reduced(&self, autos: &[GroupHom]) -> Result<Vec<Vec<usize>>> {
        let abs = nielsen::absolute_classes(&self.group, &self.classes, &self.inner, autos)?;
        let mut images: Vec<Vec<usize>> = vec![Vec::new(); self.reduced.len()];
        for group in &abs {
            let r0 = self.inner_to_reduced[group[0]];
            for &i in group {
                images[self.inner_to_reduced[i]].push(r0);
            }
        }
        Ok(nielsen::merge_points(self.reduced.len(), |i| images[i].clone()))
    }
}

/// `gamma_inf` cycles of a braid orbit, ordered by width then least member.
pub fn cusp_orbits(gamma_inf: &[u32], orbit_index: usize) -> Vec<CuspOrbit> {
    let n = gamma_inf.len();
    let mut seen = vec![false; n];
    let mut cusps = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut members = vec![start];
        seen[start] = true;
        let mut x = gamma_inf[start] as usize;
        while x != start {
            seen[x] = true;
            members.push(x);
            x = gamma_inf[x] as usize;
        }
        cusps.push(members);
    }
    cusps.sort_by(|a, b| a.len().cmp(&b.len()).then(a[0].cmp(&b[0])));
    cusps
        .into_iter()
        .enumerate()
        .map(|(ci, members)| CuspOrbit {
            width: members.len(),
            label: format!("O_{{{},{}}}", orbit_index + 1, ci + 1),
            members,
        })
        .collect()
}

/// Orbits of `<q_1, ..., q_{r-1}>` on inner classes, for any rank.
pub fn inner_braid_orbits(g: &FiniteGroup, inner: &[InnerClass]) -> Vec<Vec<usize>> {
    let Some(first) = inner.first() else {
        return Vec::new();
    };
    let r = first.canonical.len();
    let index = nielsen::index_of_canonicals(inner);
    let mut orbits = nielsen::merge_points(inner.len(), |i| {
        (1..r)
            .map(|k| {
                let t = apply_braid(g, &inner[i].canonical, &BraidWord::q(k)).expect("index in range");
                index[&canonical(g, &t)]
            })
            .collect()
    });
    orbits.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    orbits
}

pub fn compose_perm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().map(|&x| b[x as usize]).collect()
}

pub fn is_identity_perm(a: &[u32]) -> bool {
    a.iter().enumerate().all(|(i, &x)| i == x as usize)
}

pub fn fixed_points(a: &[u32]) -> usize {
    a.iter().enumerate().filter(|(i, &x)| *i == x as usize).count()
}

/// `degree - #cycles`.
pub fn perm_index(a: &[u32]) -> usize {
    let n = a.len();
    let mut seen = vec![false; n];
    let mut cycles = 0;
    for i in 0..n {
        if !seen[i] {
            cycles += 1;
            let mut x = i;
            while !seen[x] {
                seen[x] = true;
                x = a[x] as usize;
            }
        }
    }
    n - cycles
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;
    use crate::presets::parse_and_make;

    fn a4() -> Arc<FiniteGroup> {
        parse_and_make("A(4)", DEFAULT_CAP).unwrap().group
    }

    fn tup(g: &FiniteGroup, s: &[&str]) -> Tuple {
        s.iter().map(|x| g.parse_elem(x).unwrap()).collect()
    }

    #[test]
    fn word_parsing() {
        let w: BraidWord = "q1 q2 q3^-1".parse().unwrap();
        assert_eq!(w.to_string(), "q1 q2 q3^-1");
        assert_eq!("q1q2q3".parse::<BraidWord>().unwrap(), BraidWord::shift(4));
        assert_eq!("sh".parse::<BraidWord>().unwrap(), BraidWord::gamma_one());
        assert!("x1".parse::<BraidWord>().is_err());
        assert!("q0".parse::<BraidWord>().is_err());
    }

    #[test]
    fn twist_example() {
        let g = a4();
        let t = tup(&g, &["(1 2 3)", "(1 3 2)", "(1 4 3)", "(1 3 4)"]);
        let out = apply_braid(&g, &t, &BraidWord::q(2)).unwrap();
        assert_eq!(out, tup(&g, &["(1 2 3)", "(1 2 4)", "(1 3 2)", "(1 3 4)"]));
        assert_eq!(apply_braid(&g, &t, &BraidWord::default()).unwrap(), t);
        let back = apply_braid(&g, &out, &BraidWord::q_inv(2)).unwrap();
        assert_eq!(back, t);
        assert!(apply_braid(&g, &t, &BraidWord::q(4)).is_err());
    }

    #[test]
    fn q_check_identities() {
        let g = a4();
        let t = tup(&g, &["(1 2 3)", "(1 3 2)", "(1 3 4)", "(1 4 3)"]);
        let sh2 = BraidWord::shift(4).then(&BraidWord::shift(4));
        let c = g.parse_elem("(1 3)(2 4)").unwrap();
        let expect: Tuple = t.iter().map(|&x| g.conj(x, c)).collect();
        assert_eq!(apply_braid(&g, &t, &sh2).unwrap(), expect);
    }

    #[test]
    fn a4_level_zero_shape() {
        let g = a4();
        let cm = ClassMultiset::parse(&g, "3+:2,3-:2").unwrap();
        let h = Hurwitz::compute(g, cm).unwrap();
        assert_eq!(h.inner.len(), 30);
        assert_eq!(h.reduced.len(), 15);
        assert!(h.reduced.iter().all(|r| r.q_length == 2));
        let sizes: Vec<usize> = h.orbits.iter().map(BraidOrbit::degree).collect();
        assert_eq!(sizes, vec![9, 6]);
        let widths: Vec<Vec<usize>> = h
            .orbits
            .iter()
            .map(|o| o.cusps.iter().map(|c| c.width).collect())
            .collect();
        assert_eq!(widths, vec![vec![2, 3, 4], vec![1, 1, 4]]);
    }

    #[test]
    fn rank_three_rejected_for_reduction() {
        let g = parse_and_make("A(5)", DEFAULT_CAP).unwrap().group;
        let cm = ClassMultiset::parse(&g, "5+:1,5-:1,3:1").unwrap();
        assert_eq!(Hurwitz::compute(g, cm).unwrap_err(), Error::RankNotFour(3));
    }

    #[test]
    fn perm_helpers() {
        assert_eq!(perm_index(&[1, 2, 0, 3]), 2);
        assert_eq!(fixed_points(&[1, 0, 2]), 1);
        assert!(is_identity_perm(&compose_perm(&[1, 0], &[1, 0])));
    }
}
