//! Group families used throughout the examples, and the natural maps between them.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::hom::GroupHom;
use crate::lifting::CentralExtension;
use crate::perm::{gcd, is_prime, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum GroupSpec {
    Alternating(usize),
    Symmetric(usize),
    Cyclic(usize),
    Dihedral(usize),
    /// `(Z/m)^2 x| {+-1}` on `m^2` points.
    SemidirectV2PM(usize),
    /// `(Z/m)^2 x| Z/3`, the generator acting by `(x, y) -> (y, -x - y)`.
    SemidirectV2Z3(usize),
    /// `(Z/m)^2` acting on itself by translation.
    Translations(usize),
    Heisenberg(usize),
    /// `SL(2, q)` for `q` in {3, 5}, with its projection to `A_{q+1}`.
    CentralExt(u64),
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Custom(Vec<String>),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Alternating(n) => write!(f, "A({n})"),
            GroupSpec::Symmetric(n) => write!(f, "S({n})"),
            GroupSpec::Cyclic(n) => write!(f, "C({n})"),
            GroupSpec::Dihedral(m) => write!(f, "D({m})"),
            GroupSpec::SemidirectV2PM(m) => write!(f, "V2xPM({m})"),
            GroupSpec::SemidirectV2Z3(m) => write!(f, "V2xZ3({m})"),
            GroupSpec::Translations(m) => write!(f, "V2({m})"),
            GroupSpec::Heisenberg(p) => write!(f, "Heis({p})"),
            GroupSpec::CentralExt(q) => write!(f, "SL2({q})"),
            GroupSpec::Product(a, b) => write!(f, "{a} x {b}"),
            GroupSpec::Custom(gens) => write!(f, "custom[{}]", gens.join(",")),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((a, b)) = split_product(s) {
            return Ok(GroupSpec::Product(Box::new(a.parse()?), Box::new(b.parse()?)));
        }
        if let Some(body) = s.strip_prefix("custom[").and_then(|r| r.strip_suffix(']')) {
            let gens: Vec<String> = split_generators(body);
            if gens.is_empty() {
                return Err(Error::Parse("custom group needs generators".into()));
            }
            return Ok(GroupSpec::Custom(gens));
        }
        let open = s.find('(').ok_or_else(|| Error::Parse(format!("unrecognized group spec {s:?}")))?;
        let tag = &s[..open];
        let arg = s[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("missing ')' in {s:?}")))?;
        let n: usize = arg
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad parameter in {s:?}")))?;
        let spec = match tag {
            "A" => GroupSpec::Alternating(n),
            "S" => GroupSpec::Symmetric(n),
            "C" => GroupSpec::Cyclic(n),
            "D" => GroupSpec::Dihedral(n),
            "V2xPM" => GroupSpec::SemidirectV2PM(n),
            "V2xZ3" => GroupSpec::SemidirectV2Z3(n),
            "V2" => GroupSpec::Translations(n),
            "Heis" => GroupSpec::Heisenberg(n),
            "SL2" => GroupSpec::CentralExt(n as u64),
            _ => return Err(Error::Parse(format!("unknown group family {tag:?}"))),
        };
        Ok(spec)
    }
}

fn split_product(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    let bytes = s.as_bytes();
    for i in 0..bytes.len() {
        match bytes[i] {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            b' ' if depth == 0 && s[i..].starts_with(" x ") => return Some((&s[..i], &s[i + 3..])),
            _ => {}
        }
    }
    None
}

fn split_generators(body: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in body.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' | ';' if depth == 0 => {
                if !cur.trim().is_empty() {
                    out.push(cur.trim().to_string());
                }
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

/// A constructed group together with the extension data some families carry.
#[derive(Debug, Clone)]
pub struct Preset {
    pub spec: GroupSpec,
    pub group: Arc<FiniteGroup>,
    pub extension: Option<CentralExtension>,
}

impl GroupSpec {
    pub fn expected_order(&self) -> Option<usize> {
        let fact = |n: usize| (1..=n).product::<usize>();
        Some(match self {
            GroupSpec::Alternating(n) => fact(*n) / 2,
            GroupSpec::Symmetric(n) => fact(*n),
            GroupSpec::Cyclic(n) => *n,
            GroupSpec::Dihedral(m) => 2 * m,
            GroupSpec::SemidirectV2PM(m) => 2 * m * m,
            GroupSpec::SemidirectV2Z3(m) => 3 * m * m,
            GroupSpec::Translations(m) => m * m,
            GroupSpec::Heisenberg(p) => p * p * p,
            GroupSpec::CentralExt(3) => 24,
            GroupSpec::CentralExt(5) => 120,
            GroupSpec::Product(a, b) => a.expected_order()? * b.expected_order()?,
            _ => return None,
        })
    }

    /// Permutation generators, in the order the preset maps rely on.
    pub fn generators(&self) -> Result<Vec<Permutation>> {
        match self {
            GroupSpec::Alternating(n) => {
                let n = *n;
                if n < 3 {
                    return Err(Error::BadParameters(format!("A({n}) needs n >= 3")));
                }
                let mut gens = vec![Permutation::from_cycles(n, &[vec![0, 1, 2]])?];
                if n > 3 {
                    let start = if n % 2 == 1 { 0 } else { 1 };
                    gens.push(Permutation::from_cycles(n, &[(start..n).collect()])?);
                }
                Ok(gens)
            }
            GroupSpec::Symmetric(n) => {
                let n = *n;
                if n < 2 {
                    return Err(Error::BadParameters(format!("S({n}) needs n >= 2")));
                }
                Ok(vec![
                    Permutation::from_cycles(n, &[vec![0, 1]])?,
                    Permutation::from_cycles(n, &[(0..n).collect()])?,
                ])
            }
            GroupSpec::Cyclic(n) => {
                let n = *n;
                if n < 2 {
                    return Err(Error::BadParameters(format!("C({n}) needs n >= 2")));
                }
                Ok(vec![Permutation::from_cycles(n, &[(0..n).collect()])?])
            }
            GroupSpec::Dihedral(m) => {
                let m = *m;
                if m < 3 {
                    return Err(Error::BadParameters(format!("D({m}) needs m >= 3")));
                }
                let rot = (0..m).map(|i| ((i + 1) % m) as u32).collect();
                let refl = (0..m).map(|i| ((m - i) % m) as u32).collect();
                Ok(vec![
                    Permutation::from_images_unchecked(rot),
                    Permutation::from_images_unchecked(refl),
                ])
            }
            GroupSpec::SemidirectV2PM(m) => {
                let m = check_modulus(*m, 3)?;
                Ok(vec![
                    lattice_map(m, |x, y| (x + 1, y)),
                    lattice_map(m, |x, y| (x, y + 1)),
                    lattice_map(m, |x, y| (m - x, m - y)),
                ])
            }
            GroupSpec::SemidirectV2Z3(m) => {
                let m = check_modulus(*m, 2)?;
                Ok(vec![
                    lattice_map(m, |x, y| (x + 1, y)),
                    lattice_map(m, |x, y| (x, y + 1)),
                    lattice_map(m, |x, y| (y, 2 * m - x - y)),
                ])
            }
            GroupSpec::Translations(m) => {
                let m = check_modulus(*m, 2)?;
                Ok(vec![lattice_map(m, |x, y| (x + 1, y)), lattice_map(m, |x, y| (x, y + 1))])
            }
            GroupSpec::Heisenberg(p) => {
                let p = *p;
                if !is_prime(p as u64) {
                    return Err(Error::BadParameters(format!("Heis({p}) needs a prime")));
                }
                Ok(vec![heisenberg_right(p, 1, 0), heisenberg_right(p, 0, 1)])
            }
            GroupSpec::CentralExt(q) => {
                let (mats, _) = sl2_elements(*q)?;
                Ok(vec![
                    sl2_right_action(&mats, *q, [1, 1, 0, 1]),
                    sl2_right_action(&mats, *q, [0, *q - 1, 1, 0]),
                ])
            }
            GroupSpec::Product(a, b) => {
                let ga = a.generators()?;
                let gb = b.generators()?;
                let (da, db) = (ga[0].degree(), gb[0].degree());
                let mut out = Vec::new();
                for g in &ga {
                    let mut im: Vec<u32> = g.images().to_vec();
                    im.extend((da..da + db).map(|i| i as u32));
                    out.push(Permutation::from_images_unchecked(im));
                }
                for g in &gb {
                    let mut im: Vec<u32> = (0..da as u32).collect();
                    im.extend(g.images().iter().map(|&i| i + da as u32));
                    out.push(Permutation::from_images_unchecked(im));
                }
                Ok(out)
            }
            GroupSpec::Custom(gens) => {
                let parsed = gens
                    .iter()
                    .map(|s| Permutation::parse_auto(s))
                    .collect::<Result<Vec<_>>>()?;
                let degree = parsed.iter().map(Permutation::degree).max().unwrap_or(1);
                parsed
                    .iter()
                    .map(|p| {
                        let mut im = p.images().to_vec();
                        im.extend((p.degree()..degree).map(|i| i as u32));
                        Permutation::from_images(im)
                    })
                    .collect()
            }
        }
    }
}

fn check_modulus(m: usize, min: usize) -> Result<usize> {
    if m < min {
        return Err(Error::BadParameters(format!("modulus {m} must be at least {min}")));
    }
    Ok(m)
}

fn lattice_map(m: usize, f: impl Fn(usize, usize) -> (usize, usize)) -> Permutation {
    let images = (0..m * m)
        .map(|i| {
            let (x, y) = f(i / m, i % m);
            ((x % m) * m + (y % m)) as u32
        })
        .collect();
    Permutation::from_images_unchecked(images)
}

/// Point permutation `(x, y) -> (x, y) M` for a matrix over `Z/m`, row-vector convention.
pub fn lattice_matrix(m: usize, mat: [[usize; 2]; 2]) -> Result<Permutation> {
    let p = lattice_map(m, |x, y| {
        (
            (x * mat[0][0] + y * mat[1][0]) % m,
            (x * mat[0][1] + y * mat[1][1]) % m,
        )
    });
    Permutation::from_images(p.images().to_vec()).map_err(|_| Error::BadParameters("matrix is not invertible".into()))
}

/// `M(x, y, z)` with `x, y` above the diagonal and `z` in the corner; `(x,y,z)(x',y',z') = (x+x', y+y', z+z'+xy')`.
fn heisenberg_right(p: usize, a: usize, b: usize) -> Permutation {
    let idx = |x: usize, y: usize, z: usize| ((x % p) * p * p + (y % p) * p + (z % p)) as u32;
    let images = (0..p * p * p)
        .map(|i| {
            let (x, y, z) = (i / (p * p), (i / p) % p, i % p);
            idx(x + a, y + b, z + x * b)
        })
        .collect();
    Permutation::from_images_unchecked(images)
}

type Mat = [u64; 4];

fn sl2_elements(q: u64) -> Result<(Vec<Mat>, HashMap<Mat, usize>)> {
    if q != 3 && q != 5 {
        return Err(Error::BadParameters(format!("SL2({q}) preset exists for q = 3, 5")));
    }
    let mut mats = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    if (a * d + q * q - b * c) % q == 1 {
                        mats.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    let index = mats.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    Ok((mats, index))
}

fn mat_mul(x: Mat, y: Mat, q: u64) -> Mat {
    [
        (x[0] * y[0] + x[1] * y[2]) % q,
        (x[0] * y[1] + x[1] * y[3]) % q,
        (x[2] * y[0] + x[3] * y[2]) % q,
        (x[2] * y[1] + x[3] * y[3]) % q,
    ]
}

fn sl2_right_action(mats: &[Mat], q: u64, g: Mat) -> Permutation {
    let index: HashMap<Mat, usize> = mats.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let images = mats.iter().map(|&m| index[&mat_mul(m, g, q)] as u32).collect();
    Permutation::from_images_unchecked(images)
}

pub fn make_group(spec: &GroupSpec, cap: usize) -> Result<Preset> {
    let gens = spec.generators()?;
    let group = Arc::new(FiniteGroup::generate_named(&spec.to_string(), &gens, cap)?);
    let extension = match spec {
        GroupSpec::CentralExt(q) => Some(sl2_extension(group.clone(), *q, cap)?),
        _ => None,
    };
    Ok(Preset {
        spec: spec.clone(),
        group,
        extension,
    })
}

pub fn parse_and_make(s: &str, cap: usize) -> Result<Preset> {
    make_group(&s.parse()?, cap)
}

fn sl2_extension(r: Arc<FiniteGroup>, q: u64, cap: usize) -> Result<CentralExtension> {
    let (n, images) = match q {
        3 => (4, ["(2 3 4)", "(1 2)(3 4)"]),
        _ => (5, ["(1 2 3 4 5)", "(2 3)(4 5)"]),
    };
    let target = make_group(&GroupSpec::Alternating(n), cap)?.group;
    let imgs = images
        .iter()
        .map(|s| Permutation::parse(s, n))
        .collect::<Result<Vec<_>>>()?;
    let proj = GroupHom::from_perms(r.clone(), target, &imgs)?;
    let (mats, _) = sl2_elements(q)?;
    let minus_one = r.elem(&sl2_right_action(&mats, q, [q - 1, 0, 0, q - 1]))?;
    CentralExtension::new(proj, minus_one, 2)
}

/// The spin-type extension `SL(2, q) -> A_n` whose base has the same elements as `g`, if any.
pub fn spin_extension_for(g: &FiniteGroup, cap: usize) -> Result<Option<CentralExtension>> {
    let q = match (g.degree(), g.order()) {
        (4, 12) => 3,
        (5, 60) => 5,
        _ => return Ok(None),
    };
    let ext = make_group(&GroupSpec::CentralExt(q), cap)?.extension;
    Ok(ext.filter(|e| e.base().elements() == g.elements()))
}

/// The natural surjection between two presets of the same family, if there is one.
pub fn preset_map(source: &Preset, target: &Preset) -> Result<GroupHom> {
    let src = source.group.clone();
    let tgt = target.group.clone();
    let same_family_gens = |tgt: &Arc<FiniteGroup>| tgt.generator_elems().to_vec();
    match (&source.spec, &target.spec) {
        (a, b) if a == b => Ok(GroupHom::identity(src)),
        (GroupSpec::Dihedral(m), GroupSpec::Dihedral(n))
        | (GroupSpec::SemidirectV2PM(m), GroupSpec::SemidirectV2PM(n))
        | (GroupSpec::SemidirectV2Z3(m), GroupSpec::SemidirectV2Z3(n))
        | (GroupSpec::Translations(m), GroupSpec::Translations(n))
        | (GroupSpec::Cyclic(m), GroupSpec::Cyclic(n))
            if m % n == 0 =>
        {
            GroupHom::new(src, tgt.clone(), same_family_gens(&tgt))
        }
        (GroupSpec::Heisenberg(p), GroupSpec::Translations(m)) if p == m => {
            GroupHom::new(src, tgt.clone(), same_family_gens(&tgt))
        }
        (GroupSpec::CentralExt(_), _) => {
            let ext = source
                .extension
                .as_ref()
                .ok_or_else(|| Error::BadParameters("missing extension data".into()))?;
            if ext.base().elements() != tgt.elements() {
                return Err(Error::BadParameters(format!("{} does not cover {}", source.spec, target.spec)));
            }
            let imgs: Vec<Elem> = ext
                .projection()
                .generator_images()
                .iter()
                .map(|&y| tgt.elem(ext.base().perm(y)))
                .collect::<Result<_>>()?;
            GroupHom::new(src, tgt, imgs)
        }
        (GroupSpec::Product(a, b), _) if **a == target.spec => {
            let na = a.generators()?.len();
            let nb = b.generators()?.len();
            let mut imgs = same_family_gens(&tgt);
            imgs.truncate(na);
            imgs.extend(std::iter::repeat_n(0, nb));
            GroupHom::new(src, tgt, imgs)
        }
        _ => Err(Error::BadParameters(format!(
            "no preset map {} -> {}",
            source.spec, target.spec
        ))),
    }
}

/// Automorphisms of `V2xPM(m)` induced by generators of `GL_2(Z/m)`, as conjugations
/// by point permutations of the lattice.
pub fn gl2_automorphisms(preset: &Preset) -> Result<Vec<GroupHom>> {
    let m = match preset.spec {
        GroupSpec::SemidirectV2PM(m) | GroupSpec::SemidirectV2Z3(m) | GroupSpec::Translations(m) => m,
        _ => return Err(Error::BadParameters("GL2 action needs a lattice preset".into())),
    };
    let mut mats = vec![[[1, 1], [0, 1]], [[0, m - 1], [1, 0]]];
    for u in 2..m {
        if gcd(u as u64, m as u64) == 1 {
            mats.push([[u, 0], [0, 1]]);
        }
    }
    let g = &preset.group;
    mats.into_iter()
        .map(|mat| {
            let c = lattice_matrix(m, mat)?;
            let cinv = c.inverse();
            let imgs = g
                .generators()
                .iter()
                .map(|s| g.elem(&cinv.then(s).then(&c)))
                .collect::<Result<Vec<_>>>()
                .map_err(|_| Error::NotAnAutomorphism)?;
            GroupHom::new(g.clone(), g.clone(), imgs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;

    fn build(s: &str) -> Preset {
        parse_and_make(s, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn spec_round_trip() {
        for s in ["A(5)", "D(9)", "V2xPM(9)", "V2xZ3(5)", "Heis(3)", "SL2(3)", "C(2)", "A(4) x C(2)"] {
            assert_eq!(s.parse::<GroupSpec>().unwrap().to_string(), s);
        }
        let c: GroupSpec = "custom[(1 2 3),(2 3 4)]".parse().unwrap();
        assert_eq!(c, GroupSpec::Custom(vec!["(1 2 3)".into(), "(2 3 4)".into()]));
        assert!("Q(3)".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn orders_match_families() {
        for s in [
            "A(4)", "A(5)", "S(4)", "C(6)", "D(9)", "D(27)", "V2xPM(3)", "V2xPM(9)", "V2xZ3(2)", "V2xZ3(5)", "V2xZ3(7)",
            "Heis(3)", "Heis(5)", "SL2(3)", "SL2(5)", "V2(3)", "A(4) x C(2)",
        ] {
            let p = build(s);
            assert_eq!(Some(p.group.order()), p.spec.expected_order(), "{s}");
        }
    }

    #[test]
    fn custom_matches_a4() {
        let p = build("custom[(1 2 3),(2 3 4)]");
        assert_eq!(p.group.order(), 12);
    }

    #[test]
    fn v2z3_at_two_looks_like_a4() {
        let p = build("V2xZ3(2)");
        let sizes: Vec<usize> = p.group.conjugacy_classes().iter().map(|c| c.size).collect();
        assert_eq!(sizes, vec![1, 3, 4, 4]);
    }

    #[test]
    fn dihedral_odd_involutions() {
        for m in [3, 9, 25] {
            let g = build(&format!("D({m})")).group;
            let inv = (1..g.order() as Elem).filter(|&x| g.order_of(x) == 2).count();
            assert_eq!(inv, m);
        }
    }

    #[test]
    fn v2pm_outside_translations_is_involution() {
        let g = build("V2xPM(9)").group;
        let translations = g.closure(&g.generator_elems()[..2]);
        assert_eq!(translations.len(), 81);
        for x in 0..g.order() as Elem {
            if translations.binary_search(&x).is_err() {
                assert_eq!(g.order_of(x), 2);
            }
        }
    }

    #[test]
    fn z3_action_has_char_poly_x2_x_1() {
        // M = [[0,-1],[1,-1]]: trace -1 and determinant 1.
        for m in [2usize, 5, 7] {
            let g = build(&format!("V2xZ3({m})")).group;
            let alpha = g.perm(g.generator_elems()[2]);
            // (x, y) sits at index x*m + y; rows of M are the images of e1, e2.
            assert_eq!(alpha.apply(m), m - 1);
            assert_eq!(alpha.apply(1), 2 * m - 1);
            // alpha^2 + alpha + 1 = 0 on translations: t * alpha(t) * alpha^2(t) = 1.
            let t = g.generator_elems()[0];
            let a = g.generator_elems()[2];
            let ainv = g.inv(a);
            let t1 = g.conj(t, ainv);
            let t2 = g.conj(t1, ainv);
            assert_eq!(g.product(&[t, t1, t2]), 0);
        }
    }

    #[test]
    fn sl2_extensions() {
        for (q, base) in [(3u64, 12usize), (5, 60)] {
            let p = build(&format!("SL2({q})"));
            let e = p.extension.unwrap();
            assert_eq!(e.base().order(), base);
            assert_eq!(e.kernel_order(), 2);
            assert!(e.projection().is_surjective());
            assert_eq!(e.projection().kernel().len(), 2);
            assert!(e.projection().verify_exhaustive());
        }
    }

    #[test]
    fn spin_extension_lookup() {
        let a4 = build("A(4)").group;
        assert!(spin_extension_for(&a4, DEFAULT_CAP).unwrap().is_some());
        let d9 = build("D(9)").group;
        assert!(spin_extension_for(&d9, DEFAULT_CAP).unwrap().is_none());
    }

    #[test]
    fn family_maps() {
        for (a, b) in [
            ("D(27)", "D(9)"),
            ("V2xPM(9)", "V2xPM(3)"),
            ("Heis(3)", "V2(3)"),
            ("SL2(3)", "A(4)"),
            ("A(4) x C(2)", "A(4)"),
        ] {
            let m = preset_map(&build(a), &build(b)).unwrap();
            assert!(m.is_surjective(), "{a} -> {b}");
            assert!(m.verify_exhaustive(), "{a} -> {b}");
        }
        assert!(preset_map(&build("D(9)"), &build("D(5)")).is_err());
    }

    #[test]
    fn gl2_acts_by_automorphisms() {
        let p = build("V2xPM(3)");
        let autos = gl2_automorphisms(&p).unwrap();
        assert_eq!(autos.len(), 3);
        for a in &autos {
            assert!(a.is_surjective());
        }
    }
}
