//! Homomorphisms between enumerated groups, quotients by normal subgroups,
//! and the p-center reduction.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, DEFAULT_CAP};
use crate::perm::{is_power_of, Permutation};

#[derive(Debug, Clone)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    generator_images: Vec<Elem>,
    map: Vec<Elem>,
}

impl GroupHom {
    /// Extends `generator_images` (one per source generator) along words and
    /// checks that the result is well defined, which makes it multiplicative.
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, generator_images: Vec<Elem>) -> Result<GroupHom> {
        let gens = source.generator_elems().to_vec();
        if gens.len() != generator_images.len() {
            return Err(Error::BadParameters(format!(
                "{} generator images for {} generators",
                generator_images.len(),
                gens.len()
            )));
        }
        let n = source.order();
        let mut map = vec![Elem::MAX; n];
        map[0] = 0;
        let mut queue = VecDeque::from([0 as Elem]);
        while let Some(x) = queue.pop_front() {
            for (&s, &t) in gens.iter().zip(&generator_images) {
                let y = source.mul(x, s);
                let fy = target.mul(map[x as usize], t);
                if map[y as usize] == Elem::MAX {
                    map[y as usize] = fy;
                    queue.push_back(y);
                } else if map[y as usize] != fy {
                    return Err(Error::NotAHomomorphism);
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            generator_images,
            map,
        })
    }

    /// Builds the map from generator images given as permutations of the target.
    pub fn from_perms(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, images: &[Permutation]) -> Result<GroupHom> {
        let imgs = images.iter().map(|p| target.elem(p)).collect::<Result<Vec<_>>>()?;
        Self::new(source, target, imgs)
    }

    pub fn identity(g: Arc<FiniteGroup>) -> GroupHom {
        let imgs = g.generator_elems().to_vec();
        Self::new(g.clone(), g, imgs).expect("identity map")
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn generator_images(&self) -> &[Elem] {
        &self.generator_images
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x as usize]
    }

    pub fn table(&self) -> &[Elem] {
        &self.map
    }

    pub fn kernel(&self) -> Vec<Elem> {
        (0..self.source.order() as Elem).filter(|&x| self.map[x as usize] == 0).collect()
    }

    pub fn image(&self) -> Vec<Elem> {
        let mut hit = vec![false; self.target.order()];
        for &y in &self.map {
            hit[y as usize] = true;
        }
        (0..self.target.order() as Elem).filter(|&y| hit[y as usize]).collect()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.target.order()
    }

    /// All preimages of `y`.
    pub fn fiber(&self, y: Elem) -> Vec<Elem> {
        (0..self.source.order() as Elem).filter(|&x| self.map[x as usize] == y).collect()
    }

    /// `f(xy) = f(x) f(y)` over the full multiplication table.
    pub fn verify_exhaustive(&self) -> bool {
        let n = self.source.order() as Elem;
        (0..n).all(|x| {
            (0..n).all(|y| {
                self.map[self.source.mul(x, y) as usize] == self.target.mul(self.map[x as usize], self.map[y as usize])
            })
        })
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        if !Arc::ptr_eq(&self.target, &next.source) {
            return Err(Error::BadParameters("maps are not composable".into()));
        }
        let imgs = self.generator_images.iter().map(|&y| next.apply(y)).collect();
        GroupHom::new(self.source.clone(), next.target.clone(), imgs)
    }
}

/// `G/N` realized on the cosets of `N`, with its projection.
pub fn quotient(g: &Arc<FiniteGroup>, normal: &[Elem]) -> Result<(Arc<FiniteGroup>, GroupHom)> {
    if !g.is_normal(normal) {
        return Err(Error::NotNormal);
    }
    let n = g.order();
    let target = if normal.len() <= 1 {
        let mut copy = FiniteGroup::generate(g.generators(), n.max(1))?;
        copy.set_name(g.name());
        Arc::new(copy)
    } else {
        let mut coset = vec![u32::MAX; n];
        let mut count = 0u32;
        for x in 0..n as Elem {
            if coset[x as usize] != u32::MAX {
                continue;
            }
            for &k in normal {
                coset[g.mul(x, k) as usize] = count;
            }
            count += 1;
        }
        let mut reps = vec![0 as Elem; count as usize];
        for x in (0..n as Elem).rev() {
            reps[coset[x as usize] as usize] = x;
        }
        let gens: Vec<Permutation> = g
            .generator_elems()
            .iter()
            .map(|&s| {
                let images = reps.iter().map(|&r| coset[g.mul(r, s) as usize]).collect();
                Permutation::from_images_unchecked(images)
            })
            .collect();
        let name = format!("{}/N{}", g.name(), normal.len());
        Arc::new(FiniteGroup::generate_named(&name, &gens, n)?)
    };
    let imgs: Vec<Elem> = (0..g.generator_elems().len())
        .map(|i| target.generator_elems()[i])
        .collect();
    let proj = GroupHom::new(g.clone(), target.clone(), imgs)?;
    Ok((target, proj))
}

/// Whether every tuple of preimages of the target's generators generates the source.
pub fn is_frattini_cover(phi: &GroupHom) -> Result<bool> {
    if !phi.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let h = phi.source();
    let fibers: Vec<Vec<Elem>> = phi.target().generator_elems().iter().map(|&y| phi.fiber(y)).collect();
    let mut idx = vec![0usize; fibers.len()];
    let mut choice: Vec<Elem> = fibers.iter().map(|f| f[0]).collect();
    loop {
        if !h.generates(&choice) {
            return Ok(false);
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                return Ok(true);
            }
            idx[i] += 1;
            if idx[i] < fibers[i].len() {
                choice[i] = fibers[i][idx[i]];
                break;
            }
            idx[i] = 0;
            choice[i] = fibers[i][0];
            i += 1;
        }
    }
}

/// One step of [`reduce_p_center`].
#[derive(Debug, Clone)]
pub struct CenterStep {
    pub group: Arc<FiniteGroup>,
    pub map: GroupHom,
    /// `"frattini-of-Op"` or `"p-center"`.
    pub via: &'static str,
}

/// Quotients by `Phi(O_p(G))` until the p-part of the center is trivial.
///
/// When `Phi(O_p(G))` is already trivial but the p-center is not, the step
/// falls back to `G -> G/Z_p(G)` provided that map is Frattini.
pub fn reduce_p_center(g: &Arc<FiniteGroup>, p: u64) -> Result<Vec<CenterStep>> {
    if !g.is_p_perfect(p) {
        return Err(Error::NotPPerfect { p });
    }
    let mut chain = Vec::new();
    let mut current = g.clone();
    loop {
        let zp = current.p_center(p);
        if zp.len() <= 1 {
            return Ok(chain);
        }
        let u = current.largest_normal_p_subgroup(p);
        let phi = current.p_group_frattini(&u, p);
        let (next, map, via) = if phi.len() > 1 {
            let (q, m) = quotient(&current, &phi)?;
            (q, m, "frattini-of-Op")
        } else {
            let (q, m) = quotient(&current, &zp)?;
            if !is_frattini_cover(&m)? {
                return Err(Error::CenterReductionStalled);
            }
            (q, m, "p-center")
        };
        debug_assert!(is_power_of(map.kernel().len() as u64, p));
        chain.push(CenterStep {
            group: next.clone(),
            map,
            via,
        });
        current = next;
    }
}

/// Abelianization-style helper: `G -> G/N` for `N` given by generators.
pub fn quotient_by_normal_closure(g: &Arc<FiniteGroup>, gens: &[Elem]) -> Result<(Arc<FiniteGroup>, GroupHom)> {
    let n = g.normal_closure(gens);
    quotient(g, &n)
}

/// Convenience for tests and presets: the group generated by `gens` under the default cap.
pub fn group_from(gens: &[&str], degree: usize) -> Result<Arc<FiniteGroup>> {
    let gens = gens
        .iter()
        .map(|s| Permutation::parse(s, degree))
        .collect::<Result<Vec<_>>>()?;
    Ok(Arc::new(FiniteGroup::generate(&gens, DEFAULT_CAP)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_hom() {
        let g = group_from(&["(1 2 3)", "(2 3 4)"], 4).unwrap();
        let id = GroupHom::identity(g);
        assert_eq!(id.kernel(), vec![0]);
        assert!(id.is_surjective());
        assert!(id.verify_exhaustive());
    }

    #[test]
    fn bad_images_rejected() {
        let g = group_from(&["(1 2 3)", "(2 3 4)"], 4).unwrap();
        let c2 = group_from(&["(1 2)"], 2).unwrap();
        let err = GroupHom::new(g, c2.clone(), vec![c2.generator_elems()[0], 0]).unwrap_err();
        assert_eq!(err, Error::NotAHomomorphism);
    }

    #[test]
    fn a4_mod_v4() {
        let g = group_from(&["(1 2 3)", "(2 3 4)"], 4).unwrap();
        let v4 = g.largest_normal_p_subgroup(2);
        let (q, proj) = quotient(&g, &v4).unwrap();
        assert_eq!(q.order(), 3);
        assert_eq!(proj.kernel().len(), 4);
        assert!(proj.verify_exhaustive());
    }

    #[test]
    fn trivial_quotient_is_a_copy() {
        let g = group_from(&["(1 2 3)", "(2 3 4)"], 4).unwrap();
        let (q, proj) = quotient(&g, &[0]).unwrap();
        assert_eq!(q.order(), 12);
        assert_eq!(proj.kernel(), vec![0]);
    }

    #[test]
    fn non_normal_rejected() {
        let g = group_from(&["(1 2 3)", "(2 3 4)"], 4).unwrap();
        let sub = g.closure(&[g.parse_elem("(1 2 3)").unwrap()]);
        assert_eq!(quotient(&g, &sub).unwrap_err(), Error::NotNormal);
    }

    #[test]
    fn a4_has_nothing_to_reduce() {
        let g = group_from(&["(1 2 3)", "(2 3 4)"], 4).unwrap();
        assert!(reduce_p_center(&g, 2).unwrap().is_empty());
    }

    #[test]
    fn abelian_p_group_is_not_p_perfect() {
        let g = group_from(&["(1 2 3 4)"], 4).unwrap();
        assert_eq!(reduce_p_center(&g, 2).unwrap_err(), Error::NotPPerfect { p: 2 });
    }

    #[test]
    fn split_extension_is_not_frattini() {
        // S3 x Z/2 -> S3
        let g = group_from(&["(1 2 3)", "(1 2)", "(4 5)"], 5).unwrap();
        let s3 = group_from(&["(1 2 3)", "(1 2)"], 3).unwrap();
        let imgs = vec![s3.generator_elems()[0], s3.generator_elems()[1], 0];
        let phi = GroupHom::new(g, s3, imgs).unwrap();
        assert!(!is_frattini_cover(&phi).unwrap());
    }
}
