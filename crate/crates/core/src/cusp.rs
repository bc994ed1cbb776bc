//! Cusp widths and types, sh-incidence, genus of components and of member
//! covers, and the congruence screen per component.

use serde::Serialize;

use crate::braid::{
    apply_braid, compose_perm, fixed_points, perm_index, BraidOrbit, BraidWord, Hurwitz,
};
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::lifting::{fp3_factorize, translate, CentralExtension, Fp3};
use crate::modular::{self, CongruenceScreen};
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MiddleTwistOrbit {
    /// Orbit length of `gamma^2` (conjugation by `ab`).
    pub o: usize,
    /// Orbit length of `gamma: (a, b) -> (a b a^-1, a)`.
    pub o_prime: usize,
}

/// Orbit lengths by iterating `gamma`, checked against the closed formulas.
pub fn middle_twist_orbit(g: &FiniteGroup, a: Elem, b: Elem) -> Result<MiddleTwistOrbit> {
    let iterated = middle_twist_by_iteration(g, a, b);
    let formula = middle_twist_by_formula(g, a, b);
    if iterated != formula {
        return Err(Error::FormulaMismatch(format!(
            "pair ({}, {}): iteration gives o = {}, o' = {}; formula gives o = {}, o' = {}",
            g.perm(a),
            g.perm(b),
            iterated.o,
            iterated.o_prime,
            formula.o,
            formula.o_prime
        )));
    }
    Ok(iterated)
}

pub fn middle_twist_by_iteration(g: &FiniteGroup, a: Elem, b: Elem) -> MiddleTwistOrbit {
    let step = |(x, y): (Elem, Elem)| (g.conj(y, x), x);
    let mut cur = step((a, b));
    let mut o_prime = 1;
    while cur != (a, b) {
        cur = step(cur);
        o_prime += 1;
    }
    let mut cur = step(step((a, b)));
    let mut o = 1;
    while cur != (a, b) {
        cur = step(step(cur));
        o += 1;
    }
    MiddleTwistOrbit { o, o_prime }
}

/// `o = ord(ab) / |<ab> ∩ Z(a, b)|`. With `x = (ab)^((o-1)/2)`, `o' = o` exactly
/// when `o` is odd, `x a x^-1 = b` and `x (a b a^-1) x^-1 = a`; otherwise `o' = 2o`.
pub fn middle_twist_by_formula(g: &FiniteGroup, a: Elem, b: Elem) -> MiddleTwistOrbit {
    if a == b {
        return MiddleTwistOrbit { o: 1, o_prime: 1 };
    }
    let o = gamma_square_length(g, a, b);
    let closes = o % 2 == 1 && {
        let x = g.pow(g.mul(a, b), ((o - 1) / 2) as u64);
        g.conj(a, x) == b && g.conj(g.conj(b, a), x) == a
    };
    MiddleTwistOrbit { o, o_prime: if closes { o } else { 2 * o } }
}

/// The published rule: `o' = o` when `o` is odd and `b (ab)^((o-1)/2)` has
/// order 2. It overcounts `o' = o` for distinct commuting involutions.
pub fn published_o_prime(g: &FiniteGroup, a: Elem, b: Elem) -> usize {
    if a == b {
        return 1;
    }
    let o = gamma_square_length(g, a, b);
    if o % 2 == 1 && g.order_of(g.mul(b, g.pow(g.mul(a, b), ((o - 1) / 2) as u64))) == 2 {
        o
    } else {
        2 * o
    }
}

fn gamma_square_length(g: &FiniteGroup, a: Elem, b: Elem) -> usize {
    let ab = g.mul(a, b);
    let n = g.order_of(ab) as usize;
    let mut central = 0;
    let mut x = 0;
    for _ in 0..n {
        if g.commutes(x, a) && g.commutes(x, b) {
            central += 1;
        }
        x = g.mul(x, ab);
    }
    n / central
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CuspKind {
    #[serde(rename = "p-cusp")]
    PCusp,
    #[serde(rename = "g-p'")]
    GPPrime,
    #[serde(rename = "o-p'")]
    OPPrime,
}

impl std::fmt::Display for CuspKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CuspKind::PCusp => "p-cusp",
            CuspKind::GPPrime => "g-p'",
            CuspKind::OPPrime => "o-p'",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CuspType {
    pub label: String,
    pub width: usize,
    /// Order of `g2 g3`.
    pub mp: u32,
    pub kind: CuspKind,
    pub is_hm: bool,
    pub is_shift_of_hm: bool,
    /// Set only for o-p' cusps when an extension is supplied: both FP3
    /// subgroup invariants are trivial.
    pub is_weigel_candidate: Option<bool>,
    pub fp3: Option<Fp3>,
}

pub fn is_hm(g: &FiniteGroup, t: &[Elem]) -> bool {
    t.len() == 4 && t[1] == g.inv(t[0]) && t[3] == g.inv(t[2])
}

pub fn cusp_kind(g: &FiniteGroup, t: &[Elem], p: u64) -> (u32, CuspKind) {
    let mp = g.order_of(g.mul(t[1], t[2]));
    if (mp as u64).is_multiple_of(p) {
        return (mp, CuspKind::PCusp);
    }
    let h23 = g.closure(&[t[1], t[2]]).len() as u64;
    let h14 = g.closure(&[t[0], t[3]]).len() as u64;
    if !h23.is_multiple_of(p) && !h14.is_multiple_of(p) {
        (mp, CuspKind::GPPrime)
    } else {
        (mp, CuspKind::OPPrime)
    }
}

/// Types cusp `cusp` of braid orbit `orbit`, evaluating every inner class
/// behind every member.
pub fn classify_cusp(
    h: &Hurwitz,
    orbit: usize,
    cusp: usize,
    p: u64,
    ext: Option<&CentralExtension>,
) -> Result<CuspType> {
    let g = &*h.group;
    let c = &h.orbits[orbit].cusps[cusp];
    let mut first: Option<(u32, CuspKind)> = None;
    let mut hm = false;
    let mut shift_hm = false;
    let sh = BraidWord::gamma_one();
    for &pos in &c.members {
        for t in h.combined_class(orbit, pos) {
            let k = cusp_kind(g, t, p);
            match first {
                None => first = Some(k),
                Some(f) if f != k => {
                    return Err(Error::InconsistentType(format!(
                        "{}: {} (mp {}) vs {} (mp {})",
                        c.label, f.1, f.0, k.1, k.0
                    )))
                }
                _ => {}
            }
            hm |= is_hm(g, t);
            shift_hm |= is_hm(g, &apply_braid(g, t, &sh)?);
        }
    }
    let (mp, kind) = first.expect("cusps are nonempty");
    let (weigel, fp3) = match (kind, ext) {
        (CuspKind::OPPrime, Some(e)) => {
            let t = translate(g, e.base(), h.tuple(orbit, c.members[0]))?;
            let f = fp3_factorize(e, &t)?;
            (Some(f.s23.is_trivial() && f.s14.is_trivial()), Some(f))
        }
        _ => (None, None),
    };
    Ok(CuspType {
        label: c.label.clone(),
        width: c.width,
        mp,
        kind,
        is_hm: hm,
        is_shift_of_hm: shift_hm,
        is_weigel_candidate: weigel,
        fp3,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Pairing {
    Sh,
    GammaZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShIncidence {
    pub labels: Vec<String>,
    pub widths: Vec<usize>,
    /// `matrix[a][b] = |O_a ∩ (O_b) sigma|`.
    pub matrix: Vec<Vec<usize>>,
}

impl ShIncidence {
    pub fn is_symmetric(&self) -> bool {
        let n = self.matrix.len();
        (0..n).all(|i| (0..n).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }

    pub fn row_sums_match_widths(&self) -> bool {
        self.matrix
            .iter()
            .zip(&self.widths)
            .all(|(row, &w)| row.iter().sum::<usize>() == w)
    }
}

pub fn sh_incidence(orbit: &BraidOrbit, pairing: Pairing) -> ShIncidence {
    let sigma = match pairing {
        Pairing::Sh => &orbit.gamma_one,
        Pairing::GammaZero => &orbit.gamma_zero,
    };
    let k = orbit.cusps.len();
    let mut matrix = vec![vec![0; k]; k];
    for (b, cusp) in orbit.cusps.iter().enumerate() {
        for &y in &cusp.members {
            let a = orbit.cusp_of(sigma[y] as usize);
            matrix[a][b] += 1;
        }
    }
    ShIncidence {
        labels: orbit.cusps.iter().map(|c| c.label.clone()).collect(),
        widths: orbit.cusps.iter().map(|c| c.width).collect(),
        matrix,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentDossier {
    pub orbit: usize,
    pub degree: usize,
    pub widths: Vec<usize>,
    pub ind_gamma0: usize,
    pub ind_gamma1: usize,
    pub ind_gamma_inf: usize,
    pub genus: u64,
    pub fixed_gamma0: usize,
    pub fixed_gamma1: usize,
    pub q_lengths: Vec<usize>,
    /// Every `Q''` orbit above the component has length 4.
    pub fine_moduli_q: bool,
    /// `gamma_0` and `gamma_1` act without fixed points.
    pub fine_moduli_gamma: bool,
}

/// Riemann–Hurwitz over the `j`-line: `2(deg + g - 1) = ind(g0) + ind(g1) + ind(ginf)`.
pub fn genus(h: &Hurwitz, orbit: usize) -> Result<ComponentDossier> {
    let o = &h.orbits[orbit];
    let degree = o.degree();
    let (i0, i1, ii) = (perm_index(&o.gamma_zero), perm_index(&o.gamma_one), perm_index(&o.gamma_inf));
    let genus = genus_from_indices(degree, i0 + i1 + ii)?;
    let q_lengths: Vec<usize> = o.members.iter().map(|&m| h.reduced[m].q_length).collect();
    let fixed_gamma0 = fixed_points(&o.gamma_zero);
    let fixed_gamma1 = fixed_points(&o.gamma_one);
    Ok(ComponentDossier {
        orbit,
        degree,
        widths: o.cusps.iter().map(|c| c.width).collect(),
        ind_gamma0: i0,
        ind_gamma1: i1,
        ind_gamma_inf: ii,
        genus,
        fixed_gamma0,
        fixed_gamma1,
        fine_moduli_q: q_lengths.iter().all(|&l| l == 4),
        fine_moduli_gamma: fixed_gamma0 == 0 && fixed_gamma1 == 0,
        q_lengths,
    })
}

fn genus_from_indices(degree: usize, index_sum: usize) -> Result<u64> {
    if index_sum % 2 == 1 {
        return Err(Error::NonIntegralGenus { index_sum, degree });
    }
    let g = (index_sum / 2) as i64 - degree as i64 + 1;
    if g < 0 {
        return Err(Error::NegativeGenus { index_sum, degree });
    }
    Ok(g as u64)
}

/// Genus of the cover whose branch cycles are the given permutations.
pub fn cover_genus(tuple: &[Permutation]) -> Result<u64> {
    let n = tuple.first().map(Permutation::degree).unwrap_or(1);
    if !crate::lifting::is_transitive(tuple, n) {
        return Err(Error::NotTransitive);
    }
    genus_from_indices(n, tuple.iter().map(Permutation::index).sum())
}

/// Right-multiplication permutation of `x` on the elements of `g`.
pub fn regular_perm(g: &FiniteGroup, x: Elem) -> Permutation {
    let images = (0..g.order() as Elem).map(|y| g.mul(y, x)).collect();
    Permutation::from_images(images).expect("right multiplication is a bijection")
}

/// [`cover_genus`] for the regular representation, without building it.
pub fn regular_cover_genus(g: &FiniteGroup, tuple: &[Elem]) -> Result<u64> {
    if !g.generates(tuple) {
        return Err(Error::NotTransitive);
    }
    let n = g.order();
    let sum = tuple.iter().map(|&x| n - n / g.order_of(x) as usize).sum();
    genus_from_indices(n, sum)
}

/// Width-table screen of a component, plus the exact factorization test when feasible.
pub fn congruence_screen(h: &Hurwitz, orbit: usize, cap: usize) -> Result<CongruenceScreen> {
    let o = &h.orbits[orbit];
    let widths: Vec<u64> = o.cusps.iter().map(|c| c.width as u64).collect();
    let mut screen = modular::congruence_screen(o.degree() as u64, &widths);
    screen.factors_through_level = modular::factors_through_level(&o.gamma_one, &o.gamma_inf, cap)?;
    Ok(screen)
}

/// `gamma_0 gamma_1 gamma_inf` applied left to right.
pub fn gamma_product(o: &BraidOrbit) -> Vec<u32> {
    compose_perm(&compose_perm(&o.gamma_zero, &o.gamma_one), &o.gamma_inf)
}
