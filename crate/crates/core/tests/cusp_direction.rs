use std::collections::BTreeSet;

use nielsen_forge::braid::{apply_braid, cusp_orbits, BraidWord};
use nielsen_forge::report::hurwitz_for;
use nielsen_forge::DEFAULT_CAP;

fn partition(perm: &[u32], orbit: usize) -> BTreeSet<BTreeSet<usize>> {
    cusp_orbits(perm, orbit).into_iter().map(|c| c.members.into_iter().collect()).collect()
}

#[test]
fn inverse_twist_gives_same_cusps() {
    for (group, classes) in [("A(4)", "3+:2,3-:2"), ("A(5)", "3:4"), ("D(9)", "2:4"), ("V2xPM(3)", "2:4")] {
        let (_, h) = hurwitz_for(group, classes, DEFAULT_CAP).unwrap();
        for (o, orbit) in h.orbits.iter().enumerate() {
            let mut inv = vec![0u32; orbit.degree()];
            for pos in 0..orbit.degree() {
                let images: BTreeSet<usize> = h
                    .combined_class(o, pos)
                    .map(|t| h.reduced_of(&apply_braid(&h.group, t, &BraidWord::q_inv(2)).unwrap()).unwrap())
                    .collect();
                assert_eq!(images.len(), 1, "{group} {classes}: q2^-1 not defined on reduced classes");
                let target = *images.iter().next().unwrap();
                inv[pos] = orbit.position(target).expect("stays in orbit") as u32;
            }
            for pos in 0..orbit.degree() {
                assert_eq!(orbit.gamma_inf[inv[pos] as usize] as usize, pos);
            }
            assert_eq!(partition(&inv, o), partition(&orbit.gamma_inf, o));
            let mut w1: Vec<usize> = cusp_orbits(&inv, o).iter().map(|c| c.width).collect();
            let mut w2: Vec<usize> = orbit.cusps.iter().map(|c| c.width).collect();
            w1.sort_unstable();
            w2.sort_unstable();
            assert_eq!(w1, w2);
        }
    }
}
