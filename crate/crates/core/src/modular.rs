//! Cusp data for the classical modular curves X(m), X0(m), X1(m), viewed as
//! covers of the j-line, plus the congruence screen built on it.
//!
//! Widths come from the orbits of `T = [[1,1],[0,1]]` acting on row vectors:
//! on projective lines over `Z/m` for X0, on vectors of exact order `m` up to
//! sign for X1. Every cusp of X(m) has width `m`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::hom::GroupHom;
use crate::perm::{gcd, lcm, Permutation};

pub const TABLE_VERSION: &str = "v1";
pub const MAX_LEVEL: u64 = 128;
const EMBEDDED: &str = include_str!("../data/modular_cusps_v1.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModularCurve {
    pub family: String,
    pub level: u64,
    pub degree: u64,
    /// width -> number of cusps of that width.
    pub widths: BTreeMap<u64, u64>,
}

impl ModularCurve {
    pub fn name(&self) -> String {
        format!("{}({})", self.family, self.level)
    }
}

fn primes_of(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// `[PSL_2(Z) : image of Gamma(m)]`.
pub fn psl2_order(m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut sl = m * m * m;
    for p in primes_of(m) {
        sl = sl / (p * p) * (p * p - 1);
    }
    if m == 2 {
        sl
    } else {
        sl / 2
    }
}

fn t_orbit_widths(m: u64, class_of: &[u32], classes: usize) -> BTreeMap<u64, u64> {
    let mut seen = vec![false; classes];
    let mut widths = BTreeMap::new();
    let mm = m as usize;
    let rep: Vec<usize> = {
        let mut r = vec![usize::MAX; classes];
        for (v, &c) in class_of.iter().enumerate() {
            if c != u32::MAX && r[c as usize] == usize::MAX {
                r[c as usize] = v;
            }
        }
        r
    };
    for c0 in 0..classes {
        if seen[c0] {
            continue;
        }
        let mut len = 0;
        let mut v = rep[c0];
        loop {
            let c = class_of[v] as usize;
            if seen[c] {
                break;
            }
            seen[c] = true;
            len += 1;
            let (x, y) = (v / mm, v % mm);
            v = x * mm + (x + y) % mm;
        }
        *widths.entry(len as u64).or_insert(0) += 1;
    }
    widths
}

/// Groups vectors of exact order `m` under multiplication by the given scalars.
fn vector_classes(m: u64, scalars: &[u64]) -> (Vec<u32>, usize) {
    let mm = m as usize;
    let mut class_of = vec![u32::MAX; mm * mm];
    let mut count = 0u32;
    for v in 0..mm * mm {
        let (x, y) = ((v / mm) as u64, (v % mm) as u64);
        if gcd(gcd(x, y), m) != 1 || class_of[v] != u32::MAX {
            continue;
        }
        for &u in scalars {
            let w = ((u * x) % m) as usize * mm + ((u * y) % m) as usize;
            class_of[w] = count;
        }
        count += 1;
    }
    (class_of, count as usize)
}

pub fn curve_x(m: u64) -> ModularCurve {
    let degree = psl2_order(m);
    ModularCurve {
        family: "X".into(),
        level: m,
        degree,
        widths: BTreeMap::from([(m, degree / m)]),
    }
}

pub fn curve_x0(m: u64) -> ModularCurve {
    let units: Vec<u64> = (0..m.max(2)).filter(|&u| gcd(u, m) == 1).map(|u| u % m.max(1)).collect();
    let (class_of, n) = vector_classes(m, &units);
    ModularCurve {
        family: "X0".into(),
        level: m,
        degree: n as u64,
        widths: t_orbit_widths(m, &class_of, n),
    }
}

pub fn curve_x1(m: u64) -> ModularCurve {
    let signs = [1, m - 1];
    let (class_of, n) = vector_classes(m, &signs);
    ModularCurve {
        family: "X1".into(),
        level: m,
        degree: n as u64,
        widths: t_orbit_widths(m, &class_of, n),
    }
}

pub fn generate_table(max_level: u64) -> Vec<ModularCurve> {
    let mut out = Vec::new();
    for m in 1..=max_level {
        out.push(curve_x(m));
        out.push(curve_x0(m));
        out.push(curve_x1(m));
    }
    out
}

fn render_widths(w: &BTreeMap<u64, u64>) -> String {
    w.iter().map(|(k, v)| format!("{k}^{v}")).collect::<Vec<_>>().join(" ")
}

pub fn render_table(curves: &[ModularCurve]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# modular_cusps {TABLE_VERSION}: level, family, degree over the j-line, cusp widths as width^count");
    let _ = writeln!(s, "level\tfamily\tdegree\twidths");
    for c in curves {
        let _ = writeln!(s, "{}\t{}\t{}\t{}", c.level, c.family, c.degree, render_widths(&c.widths));
    }
    s
}

pub fn parse_table(text: &str) -> Result<Vec<ModularCurve>> {
    let mut out = Vec::new();
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).skip(1) {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 {
            return Err(Error::Parse(format!("bad table row {line:?}")));
        }
        let num = |s: &str| s.parse::<u64>().map_err(|_| Error::Parse(format!("bad number {s:?}")));
        let mut widths = BTreeMap::new();
        for part in cols[3].split_whitespace() {
            let (w, c) = part
                .split_once('^')
                .ok_or_else(|| Error::Parse(format!("bad width entry {part:?}")))?;
            widths.insert(num(w)?, num(c)?);
        }
        out.push(ModularCurve {
            family: cols[1].to_string(),
            level: num(cols[0])?,
            degree: num(cols[2])?,
            widths,
        });
    }
    Ok(out)
}

/// The shipped table.
pub fn table() -> Vec<ModularCurve> {
    parse_table(EMBEDDED).expect("embedded table parses")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "kebab-case")]
pub enum Verdict {
    ConsistentWith(Vec<String>),
    Fails(String),
}

impl Verdict {
    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CongruenceScreen {
    /// lcm of the cusp widths.
    pub level: u64,
    pub degree: u64,
    pub widths: Vec<u64>,
    pub degree_divides_psl2: bool,
    pub same_degree: Vec<String>,
    pub verdict: Verdict,
    /// Whether the `gamma` action factors through `SL_2(Z/N)`; `None` when
    /// that group exceeds the cap.
    pub factors_through_level: Option<bool>,
}

/// Width-table screen for a `j`-line cover of the given degree and cusp widths.
pub fn congruence_screen(degree: u64, widths: &[u64]) -> CongruenceScreen {
    let level = widths.iter().fold(1, |a, &w| lcm(a, w));
    let mut sorted = widths.to_vec();
    sorted.sort_unstable();
    let mut want = BTreeMap::new();
    for &w in &sorted {
        *want.entry(w).or_insert(0u64) += 1;
    }
    let degree_divides_psl2 = psl2_order(level).is_multiple_of(degree);
    let mut same_degree = Vec::new();
    let mut matches = Vec::new();
    if level <= MAX_LEVEL {
        for c in table() {
            if level % c.level != 0 || c.degree != degree {
                continue;
            }
            same_degree.push(c.name());
            if c.widths == want {
                matches.push(c.name());
            }
        }
    }
    let verdict = if level > MAX_LEVEL {
        Verdict::Fails(format!("level {level} is beyond the table (max {MAX_LEVEL})"))
    } else if !degree_divides_psl2 {
        Verdict::Fails(format!("degree {degree} does not divide |PSL2(Z/{level})| = {}", psl2_order(level)))
    } else if matches.is_empty() {
        Verdict::Fails(format!(
            "no X(m), X0(m), X1(m) with m | {level} has degree {degree} and widths {}",
            render_widths(&want)
        ))
    } else {
        Verdict::ConsistentWith(matches)
    };
    CongruenceScreen {
        level,
        degree,
        widths: sorted,
        degree_divides_psl2,
        same_degree,
        verdict,
        factors_through_level: None,
    }
}

/// `SL_2(Z/n)` acting on row vectors, generated by `S = [[0,-1],[1,0]]` then `T = [[1,1],[0,1]]`.
pub fn sl2_mod(n: u64, cap: usize) -> Result<FiniteGroup> {
    let nn = n as usize;
    let act = |a: u64, b: u64, c: u64, d: u64| {
        let images = (0..nn * nn)
            .map(|v| {
                let (x, y) = ((v / nn) as u64, (v % nn) as u64);
                (((x * a + y * c) % n) as usize * nn + ((x * b + y * d) % n) as usize) as u32
            })
            .collect();
        Permutation::from_images(images)
    };
    let s = act(0, n - 1, 1, 0)?;
    let t = act(1, 1, 0, 1)?;
    FiniteGroup::generate_named(&format!("SL2(Z/{n})"), &[s, t], cap)
}

/// Wohlfahrt's criterion for a transitive `PSL_2(Z)` action given by the
/// images of `S` and `T`: congruence iff the action factors through `SL_2(Z/N)`,
/// `N` the lcm of the `T`-cycle lengths.
pub fn factors_through_level(s: &[u32], t: &[u32], cap: usize) -> Result<Option<bool>> {
    let sp = Permutation::from_images(s.to_vec())?;
    let tp = Permutation::from_images(t.to_vec())?;
    let n = tp.order();
    if n == 1 {
        return Ok(Some(sp.is_identity()));
    }
    let source = match sl2_mod(n, cap) {
        Ok(g) => std::sync::Arc::new(g),
        Err(Error::ClosureExceedsCap { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let target = std::sync::Arc::new(FiniteGroup::generate(&[sp.clone(), tp.clone()], cap)?);
    match GroupHom::from_perms(source, target, &[sp, tp]) {
        Ok(_) => Ok(Some(true)),
        Err(Error::NotAHomomorphism) => Ok(Some(false)),
        Err(e) => Err(e),
    }
}
