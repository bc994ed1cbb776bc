//! Lifting invariants through central extensions, spin parity, the FP3
//! factorization and Jennings dimensions.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::hom::GroupHom;
use crate::perm::{is_power_of, Permutation};

/// `R -> G` with cyclic central kernel of `p`-power order.
#[derive(Debug, Clone)]
pub struct CentralExtension {
    proj: GroupHom,
    kernel_gen: Elem,
    kernel_order: u64,
    p: u64,
    /// `log[x] = Some(k)` when `x = kernel_gen^k`.
    log: Vec<Option<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LiftInvariant {
    /// Exponent of the kernel generator.
    pub value: u64,
    pub modulus: u64,
}

impl LiftInvariant {
    pub fn is_trivial(&self) -> bool {
        self.value == 0
    }

    /// `+1` / `-1` when the kernel has order 2.
    pub fn sign(&self) -> Option<i8> {
        (self.modulus == 2).then_some(if self.value == 0 { 1 } else { -1 })
    }

    pub fn add(&self, other: &LiftInvariant) -> LiftInvariant {
        LiftInvariant {
            value: (self.value + other.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl std::fmt::Display for LiftInvariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.sign() {
            Some(1) => write!(f, "+1"),
            Some(_) => write!(f, "-1"),
            None => write!(f, "z^{} (mod {})", self.value, self.modulus),
        }
    }
}

impl CentralExtension {
    pub fn new(proj: GroupHom, kernel_gen: Elem, p: u64) -> Result<CentralExtension> {
        let r = proj.source().clone();
        if !proj.is_surjective() {
            return Err(Error::BadExtension("projection is not surjective".into()));
        }
        let kernel = proj.kernel();
        let generated = r.closure(&[kernel_gen]);
        if generated != kernel {
            return Err(Error::BadExtension("kernel is not generated by the given element".into()));
        }
        let kernel_order = kernel.len() as u64;
        if !is_power_of(kernel_order, p) {
            return Err(Error::NotPGroupKernel { p });
        }
        if !r.generator_elems().iter().all(|&s| r.commutes(s, kernel_gen)) {
            return Err(Error::BadExtension("kernel is not central".into()));
        }
        let mut log = vec![None; r.order()];
        let mut x = 0;
        for k in 0..kernel_order {
            log[x as usize] = Some(k);
            x = r.mul(x, kernel_gen);
        }
        Ok(CentralExtension {
            proj,
            kernel_gen,
            kernel_order,
            p,
            log,
        })
    }

    pub fn cover(&self) -> &Arc<FiniteGroup> {
        self.proj.source()
    }

    pub fn base(&self) -> &Arc<FiniteGroup> {
        self.proj.target()
    }

    pub fn projection(&self) -> &GroupHom {
        &self.proj
    }

    pub fn kernel_gen(&self) -> Elem {
        self.kernel_gen
    }

    pub fn kernel_order(&self) -> u64 {
        self.kernel_order
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn kernel_exponent(&self, x: Elem) -> u64 {
        self.log[x as usize].expect("element lies in the kernel")
    }

    /// The unique preimage of `g` (an element of the base) with order prime to `p`.
    pub fn p_prime_lift(&self, g: Elem) -> Result<Elem> {
        let base = self.base();
        let n = base.order_of(g) as u64;
        if n.is_multiple_of(self.p) {
            return Err(Error::OrderNotPrime { p: self.p });
        }
        let r = self.cover();
        let h = self.proj.fiber(g)[0];
        let k = self.kernel_exponent(r.pow(h, n));
        let m = self.kernel_order;
        let n_inv = mod_inverse(n % m, m);
        let a = (m - (k * n_inv) % m) % m;
        Ok(r.mul(h, r.pow(self.kernel_gen, a)))
    }

    /// Product of the `p'` lifts of a product-one tuple, as a kernel exponent.
    pub fn lifting_invariant(&self, tuple: &[Elem]) -> Result<LiftInvariant> {
        let r = self.cover();
        let mut acc = 0;
        for &g in tuple {
            acc = r.mul(acc, self.p_prime_lift(g)?);
        }
        if self.proj.apply(acc) != 0 {
            return Err(Error::BadParameters("tuple does not have product one".into()));
        }
        Ok(LiftInvariant {
            value: self.kernel_exponent(acc),
            modulus: self.kernel_order,
        })
    }

    /// Moves a tuple from `from` into this extension's base, matching elements as permutations.
    pub fn to_base(&self, from: &FiniteGroup, tuple: &[Elem]) -> Result<Vec<Elem>> {
        translate(from, self.base(), tuple)
    }
}

/// Re-indexes elements of `from` as elements of `to`.
pub fn translate(from: &FiniteGroup, to: &FiniteGroup, elems: &[Elem]) -> Result<Vec<Elem>> {
    if std::ptr::eq(from, to) || (from.order() == to.order() && from.elements() == to.elements()) {
        return Ok(elems.to_vec());
    }
    elems.iter().map(|&e| to.elem(from.perm(e))).collect()
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    (1..m).find(|&x| (a * x) % m == 1).expect("unit modulo m")
}

/// `w(g)`: the sum of `(l^2 - 1)/8` over cycle lengths, mod 2.
pub fn spin_weight(g: &Permutation) -> u64 {
    g.cycle_type().iter().map(|&l| ((l * l - 1) / 8) as u64 % 2).sum::<u64>() % 2
}

/// `(-1)^(sum w(g_i))` for odd-order entries of a transitive genus-0 tuple on `n` points.
pub fn spin_parity(tuple: &[Permutation], n: usize) -> Result<i8> {
    if tuple.iter().any(|g| g.degree() != n) {
        return Err(Error::DegreeMismatch {
            left: n,
            right: tuple.iter().map(Permutation::degree).find(|&d| d != n).unwrap_or(n),
        });
    }
    if tuple.iter().any(|g| g.order() % 2 == 0) {
        return Err(Error::OrderNotPrime { p: 2 });
    }
    if !is_transitive(tuple, n) {
        return Err(Error::NotTransitive);
    }
    let index_sum: usize = tuple.iter().map(Permutation::index).sum();
    if index_sum != 2 * (n - 1) {
        return Err(Error::GenusHypothesisFails { index_sum, degree: n });
    }
    let w: u64 = tuple.iter().map(spin_weight).sum();
    Ok(if w.is_multiple_of(2) { 1 } else { -1 })
}

pub fn is_transitive(gens: &[Permutation], n: usize) -> bool {
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|b| b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fp3 {
    pub s23: LiftInvariant,
    pub s14: LiftInvariant,
    pub s: LiftInvariant,
    pub ok: bool,
}

/// Splits the invariant of a 4-tuple along `(g2, g3, (g2 g3)^-1)` and
/// `((g4 g1)^-1, g4, g1)`, using lifts inside the ambient cover.
pub fn fp3_factorize(ext: &CentralExtension, tuple: &[Elem]) -> Result<Fp3> {
    if tuple.len() != 4 {
        return Err(Error::RankNotFour(tuple.len()));
    }
    let g = ext.base();
    let p = ext.p();
    let m23 = g.mul(tuple[1], tuple[2]);
    if (g.order_of(m23) as u64).is_multiple_of(p) {
        return Err(Error::MiddleProductNotPrime { p });
    }
    let m41 = g.mul(tuple[3], tuple[0]);
    let s23 = ext.lifting_invariant(&[tuple[1], tuple[2], g.inv(m23)])?;
    let s14 = ext.lifting_invariant(&[g.inv(m41), tuple[3], tuple[0]])?;
    let s = ext.lifting_invariant(tuple)?;
    Ok(Fp3 {
        s23,
        s14,
        s,
        ok: s == s23.add(&s14),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JenningsProfile {
    pub p: u64,
    pub n: u32,
    pub dims: Vec<u64>,
}

/// Loewy layer dimensions of `F_p[(Z/p)^n]`: coefficients of `(1 + t + ... + t^(p-1))^n`.
pub fn jennings_dims(p: u64, n: u32) -> Result<JenningsProfile> {
    if !crate::perm::is_prime(p) || n == 0 {
        return Err(Error::BadParameters(format!("need prime p and n >= 1, got ({p}, {n})")));
    }
    let mut dims = vec![1u64];
    for _ in 0..n {
        let mut next = vec![0u64; dims.len() + p as usize - 1];
        for (i, &c) in dims.iter().enumerate() {
            for j in 0..p as usize {
                next[i + j] += c;
            }
        }
        dims = next;
    }
    Ok(JenningsProfile { p, n, dims })
}
