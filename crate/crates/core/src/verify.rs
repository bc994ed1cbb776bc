//! Built-in golden suites for `verify`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::braid::{fixed_points, inner_braid_orbits, Hurwitz};
use crate::cusp::{classify_cusp, cover_genus, genus, is_hm, regular_cover_genus, sh_incidence, CuspKind, Pairing};
use crate::error::{Error, Result};
use crate::group::DEFAULT_CAP;
use crate::hom::is_frattini_cover;
use crate::lifting::{fp3_factorize, jennings_dims, translate};
use crate::nielsen::{inner_nielsen, ClassMultiset};
use crate::perm::{euler_phi, Permutation};
use crate::presets::{parse_and_make, preset_map};
use crate::tower::{build_graph, level_fiber, LevelMap};

pub const SUITES: [&str; 6] = ["a4-level0", "a5-level0", "dihedral-towers", "lattice", "lifting", "jennings"];

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub suite: &'static str,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

struct Suite {
    name: &'static str,
    out: Vec<CheckOutcome>,
}

impl Suite {
    fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.out.push(CheckOutcome { suite: self.name, name: name.to_string(), pass, detail: detail.into() });
    }
}

/// Runs one suite, or every suite for `"all"`.
pub fn verify(suite: &str) -> Result<Vec<CheckOutcome>> {
    if suite == "all" {
        let mut out = Vec::new();
        for s in SUITES {
            out.extend(verify(s)?);
        }
        return Ok(out);
    }
    let name = *SUITES
        .iter()
        .find(|&&s| s == suite)
        .ok_or_else(|| Error::UnknownSuite(suite.to_string()))?;
    let mut s = Suite { name, out: Vec::new() };
    match name {
        "a4-level0" => a4_level0(&mut s)?,
        "a5-level0" => a5_level0(&mut s)?,
        "dihedral-towers" => dihedral_towers(&mut s)?,
        "lattice" => lattice(&mut s)?,
        "lifting" => lifting(&mut s)?,
        _ => jennings(&mut s)?,
    }
    Ok(s.out)
}

pub fn render_table(outcomes: &[CheckOutcome]) -> String {
    let mut s = String::from("| suite | check | result | detail |\n|---|---|---|---|\n");
    for o in outcomes {
        let _ = writeln!(s, "| {} | {} | {} | {} |", o.suite, o.name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    let _ = writeln!(s, "\n{passed}/{} checks passed", outcomes.len());
    s
}

fn hurwitz(spec: &str, classes: &str) -> Result<Hurwitz> {
    let g = parse_and_make(spec, DEFAULT_CAP)?.group;
    let cm = ClassMultiset::parse(&g, classes)?;
    Hurwitz::compute(g, cm)
}

fn widths(h: &Hurwitz, o: usize) -> Vec<usize> {
    let mut w: Vec<usize> = h.orbits[o].cusps.iter().map(|c| c.width).collect();
    w.sort_unstable();
    w
}

fn permutation_equivalent(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    let n = a.len();
    if b.len() != n {
        return false;
    }
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        if (0..n).all(|i| (0..n).all(|j| a[idx[i]][idx[j]] == b[i][j])) {
            return true;
        }
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| idx[i] < idx[i + 1]) else {
            return false;
        };
        let j = (i + 1..n).rev().find(|&j| idx[j] > idx[i]).expect("successor exists");
        idx.swap(i, j);
        idx[i + 1..].reverse();
    }
}

fn a4_level0(s: &mut Suite) -> Result<()> {
    let h = hurwitz("A(4)", "3+:2,3-:2")?;
    let ext = parse_and_make("SL2(3)", DEFAULT_CAP)?.extension.expect("SL2 preset carries its extension");
    let sizes: Vec<usize> = h.orbits.iter().map(|o| o.degree()).collect();
    s.check("orbit sizes", sizes == [9, 6], format!("{sizes:?}"));
    let w: Vec<Vec<usize>> = (0..h.orbits.len()).map(|o| widths(&h, o)).collect();
    s.check("cusp widths", w == [vec![2, 3, 4], vec![1, 1, 4]], format!("{w:?}"));
    let mut gen = Vec::new();
    let mut sums = Vec::new();
    for o in 0..h.orbits.len() {
        let d = genus(&h, o)?;
        gen.push(d.genus);
        sums.push(d.ind_gamma0 + d.ind_gamma1 + d.ind_gamma_inf);
    }
    s.check("index sums", sums == [16, 10], format!("{sums:?}"));
    s.check("genera", gen == [0, 0], format!("{gen:?}"));
    let mut lifts = Vec::new();
    for o in 0..h.orbits.len() {
        let t = translate(&h.group, ext.base(), h.tuple(o, 0))?;
        lifts.push(ext.lifting_invariant(&t)?.to_string());
    }
    s.check("lifting invariants", lifts == ["+1", "-1"], lifts.join(" "));
    let q2 = h.reduced.iter().all(|r| r.q_length == 2);
    s.check("Q'' orbit lengths", q2, "all 2");
    let tables = [
        vec![vec![1, 1, 2], vec![1, 0, 1], vec![2, 1, 0]],
        vec![vec![2, 1, 1], vec![1, 0, 0], vec![1, 0, 0]],
    ];
    for (o, want) in tables.iter().enumerate() {
        let m = sh_incidence(&h.orbits[o], Pairing::Sh);
        let g0 = sh_incidence(&h.orbits[o], Pairing::GammaZero);
        s.check(
            &format!("sh-incidence O_{}", o + 1),
            permutation_equivalent(&m.matrix, want) && m == g0 && m.is_symmetric() && m.row_sums_match_widths(),
            format!("{:?}", m.matrix),
        );
    }
    let fixed: Vec<(usize, usize)> = h
        .orbits
        .iter()
        .map(|o| (fixed_points(&o.gamma_one), fixed_points(&o.gamma_zero)))
        .collect();
    s.check("gamma fixed points", fixed == [(1, 0), (0, 0)], format!("(gamma_1, gamma_0) {fixed:?}"));
    Ok(())
}

fn a5_level0(s: &mut Suite) -> Result<()> {
    let h = hurwitz("A(5)", "3:4")?;
    s.check(
        "C_3^4 reduced classes",
        h.orbits.len() == 1 && h.reduced.len() == 18,
        format!("{} orbits, {} reduced classes", h.orbits.len(), h.reduced.len()),
    );
    let d = genus(&h, 0)?;
    s.check("C_3^4 genus", d.genus == 0, format!("genus {}, widths {:?}", d.genus, widths(&h, 0)));
    let mut two_cusps = 0;
    for c in 0..h.orbits[0].cusps.len() {
        if classify_cusp(&h, 0, c, 2, None)?.kind == CuspKind::PCusp {
            two_cusps += 1;
        }
    }
    s.check("C_3^4 has no 2-cusps", two_cusps == 0, format!("{two_cusps} 2-cusps"));

    let g = parse_and_make("A(5)", DEFAULT_CAP)?.group;
    let ext = parse_and_make("SL2(5)", DEFAULT_CAP)?.extension.expect("SL2 preset carries its extension");
    let cm = ClassMultiset::parse(&g, "5+:1,5-:1,3:1")?;
    let inner = inner_nielsen(&g, &cm);
    let orbits = inner_braid_orbits(&g, &inner);
    s.check("C+-5,3 braid orbits", orbits.len() == 1, format!("{}", orbits.len()));
    let t = &inner[0].canonical;
    let lift = ext.lifting_invariant(&translate(&g, ext.base(), t)?)?;
    s.check("C+-5,3 spin invariant", lift.sign() == Some(1), lift.to_string());
    let perms: Vec<Permutation> = t.iter().map(|&x| g.perm(x).clone()).collect();
    let natural = cover_genus(&perms)?;
    let regular = regular_cover_genus(&g, t)?;
    s.check("C+-5,3 cover genera", (natural, regular) == (1, 9), format!("natural {natural}, regular {regular}"));
    Ok(())
}

fn dihedral_towers(s: &mut Suite) -> Result<()> {
    for p in [3usize, 5] {
        let base = parse_and_make(&format!("D({p})"), DEFAULT_CAP)?;
        let mut chain = Vec::new();
        let mut below = base.clone();
        for k in 1..3 {
            let above = parse_and_make(&format!("D({})", p.pow(k + 1)), DEFAULT_CAP)?;
            chain.push(LevelMap::new(preset_map(&above, &below)?, p as u64)?);
            below = above;
        }
        let cm = ClassMultiset::parse(&base.group, "2:4")?;
        let t = build_graph(base.group.clone(), &chain, cm, p as u64, &[])?;
        for (k, h) in t.hurwitz.iter().enumerate() {
            let n = p.pow(k as u32 + 1) as u64;
            let want = (n + n / p as u64) * euler_phi(n) / 2;
            s.check(
                &format!("D({n}) inner count"),
                h.inner.len() as u64 == want && h.orbits.len() == 1,
                format!("{} inner (expected {want}), {} orbits", h.inner.len(), h.orbits.len()),
            );
            let lv = &t.graph.levels[k];
            let hm: Vec<usize> = lv.cusps.iter().filter(|c| c.is_hm).map(|c| c.width).collect();
            let sh: Vec<usize> = lv.cusps.iter().filter(|c| c.is_shift_of_hm).map(|c| c.width).collect();
            s.check(
                &format!("D({n}) H-M widths"),
                !hm.is_empty() && hm.iter().all(|&w| w as u64 == n) && !sh.is_empty() && sh.iter().all(|&w| w == 1),
                format!("H-M {hm:?}, shifts {sh:?}"),
            );
        }
        s.check(
            &format!("p={p} Frattini principles"),
            t.graph.fp1_violations.is_empty() && t.graph.fp2_violations.is_empty(),
            format!("FP1 {:?}, FP2 {:?}", t.graph.fp1_violations, t.graph.fp2_violations),
        );
    }
    Ok(())
}

fn lattice(s: &mut Suite) -> Result<()> {
    for p in [2u64, 5, 7] {
        let h = hurwitz(&format!("V2xZ3({p})"), "3+:2,3-:2")?;
        let n = h.inner.iter().filter(|c| is_hm(&h.group, &c.canonical)).count();
        s.check(&format!("V2xZ3({p}) H-M reps"), n > 0, format!("{n} H-M inner classes"));
    }
    for m in [3u64, 5, 9] {
        let h = hurwitz(&format!("V2xPM({m})"), "2:4")?;
        s.check(
            &format!("V2xPM({m}) components"),
            h.orbits.len() as u64 == euler_phi(m),
            format!("{} components; the Weil pairing gives phi({m}) = {}", h.orbits.len(), euler_phi(m)),
        );
        let det_of = |t: &[u32]| {
            let v: Vec<(i64, i64)> = t
                .iter()
                .map(|&e| {
                    let img = h.group.perm(e).apply(0) as i64;
                    (img / m as i64, img % m as i64)
                })
                .collect();
            let (a, b) = (v[0].0 - v[1].0, v[0].1 - v[1].1);
            let (c, d) = (v[1].0 - v[2].0, v[1].1 - v[2].1);
            (a * d - b * c).rem_euclid(m as i64)
        };
        let per_orbit: Vec<Vec<i64>> = h
            .orbits
            .iter()
            .map(|o| {
                let mut d: Vec<i64> = o.members.iter().map(|&r| det_of(&h.reduced[r].canonical)).collect();
                d.sort_unstable();
                d.dedup();
                d
            })
            .collect();
        let mut all: Vec<i64> = per_orbit.iter().flatten().copied().collect();
        all.sort_unstable();
        let units = (1..m as i64).filter(|&u| crate::perm::gcd(u as u64, m) == 1).count();
        s.check(
            &format!("V2xPM({m}) determinant separates components"),
            per_orbit.iter().all(|d| d.len() == 1) && all.windows(2).all(|w| w[0] != w[1]) && all.len() == units,
            format!("determinants per component {per_orbit:?}"),
        );
    }
    Ok(())
}

fn lifting(s: &mut Suite) -> Result<()> {
    let sl = parse_and_make("SL2(3)", DEFAULT_CAP)?;
    let a4 = parse_and_make("A(4)", DEFAULT_CAP)?;
    let ext = sl.extension.clone().expect("SL2 preset carries its extension");
    let map = LevelMap::new(preset_map(&sl, &a4)?, 2)?;
    let down = hurwitz("A(4)", "3+:2,3-:2")?;
    let up = Hurwitz::compute(sl.group.clone(), map.match_classes(&down.classes)?)?;
    let fibers: Vec<usize> = (0..down.orbits.len())
        .map(|o| level_fiber(&map, &down, o, &up).map(|f| f.len()))
        .collect::<Result<_>>()?;
    s.check("SL(2,3) fibers over A4 orbits", fibers[0] > 0 && fibers[1] == 0, format!("{fibers:?}"));
    let ex: Vec<u32> = ["(1 2 4)", "(1 2 3)", "(1 3 4)", "(1 2 4)"]
        .iter()
        .map(|c| ext.base().parse_elem(c))
        .collect::<Result<_>>()?;
    let f = fp3_factorize(&ext, &ex)?;
    s.check(
        "FP3 example",
        (f.s23.sign(), f.s14.sign(), f.s.sign(), f.ok) == (Some(-1), Some(1), Some(-1), true),
        format!("s23 {} s14 {} s {}", f.s23, f.s14, f.s),
    );
    for (up, down, want) in [
        ("Heis(3)", "V2(3)", true),
        ("Heis(5)", "V2(5)", true),
        ("SL2(3)", "A(4)", true),
        ("A(4) x C(2)", "A(4)", false),
    ] {
        let u = parse_and_make(up, DEFAULT_CAP)?;
        let d = parse_and_make(down, DEFAULT_CAP)?;
        let got = is_frattini_cover(&preset_map(&u, &d)?)?;
        s.check(&format!("{up} -> {down} Frattini"), got == want, format!("{got}"));
    }
    Ok(())
}

fn jennings(s: &mut Suite) -> Result<()> {
    let j = jennings_dims(3, 2)?;
    s.check("(Z/3)^2 Loewy layers", j.dims == [1, 2, 3, 2, 1], format!("{:?}", j.dims));
    let j = jennings_dims(2, 2)?;
    s.check("(Z/2)^2 Loewy layers", j.dims == [1, 2, 1], format!("{:?}", j.dims));
    Ok(())
}
