//! Finite truncations of component and cusp trees along a chain of covers.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::braid::Hurwitz;
use crate::cusp::{classify_cusp, genus, CuspKind};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::hom::GroupHom;
use crate::lifting::{translate, CentralExtension};
use crate::nielsen::ClassMultiset;
use crate::perm::{gcd, is_power_of};

/// A surjection `G' -> G` with `p`-group kernel.
#[derive(Debug, Clone)]
pub struct LevelMap {
    hom: GroupHom,
    p: u64,
}

impl LevelMap {
    pub fn new(hom: GroupHom, p: u64) -> Result<LevelMap> {
        if !hom.is_surjective() {
            return Err(Error::NotSurjective);
        }
        if !is_power_of(hom.kernel().len() as u64, p) {
            return Err(Error::NotPGroupKernel { p });
        }
        Ok(LevelMap { hom, p })
    }

    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    pub fn upper(&self) -> &Arc<FiniteGroup> {
        self.hom.source()
    }

    pub fn lower(&self) -> &Arc<FiniteGroup> {
        self.hom.target()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// For each class of `cm`, the unique class of `p'` elements above it.
    pub fn match_classes(&self, cm: &ClassMultiset) -> Result<ClassMultiset> {
        let up = self.upper();
        let down = self.lower();
        let mut entries = Vec::with_capacity(cm.entries.len());
        for &(c, mult) in &cm.entries {
            let class = &down.conjugacy_classes()[c];
            if gcd(class.element_order as u64, self.p) != 1 {
                return Err(Error::OrderNotPrime { p: self.p });
            }
            let above: BTreeSet<u32> = (0..up.order() as u32)
                .filter(|&x| {
                    down.class_of(self.hom.apply(x)) == c
                        && gcd(up.order_of(x) as u64, self.p) == 1
                })
                .collect();
            let first = *above.iter().next().ok_or(Error::MultiplePrimeClasses)?;
            let uc = up.class_of(first);
            let members: BTreeSet<u32> = up.conjugacy_classes()[uc].members.iter().copied().collect();
            if members != above {
                return Err(Error::MultiplePrimeClasses);
            }
            entries.push((uc, mult));
        }
        ClassMultiset::new(up, entries)
    }

    /// Reduced class downstairs of the image of reduced class `r` upstairs.
    pub fn project_reduced(&self, up: &Hurwitz, down: &Hurwitz, r: usize) -> Result<usize> {
        let image: Vec<u32> = up.reduced[r].canonical.iter().map(|&x| self.hom.apply(x)).collect();
        down.reduced_of(&image).ok_or(Error::ClassNotPreserved)
    }

    /// Braid orbit downstairs of upstairs orbit `orbit`, checked on every member.
    pub fn project_orbit(&self, up: &Hurwitz, down: &Hurwitz, orbit: usize) -> Result<usize> {
        let mut target = None;
        for &r in &up.orbits[orbit].members {
            let o = down.orbit_of[self.project_reduced(up, down, r)?];
            match target {
                None => target = Some(o),
                Some(t) if t != o => return Err(Error::ClassNotPreserved),
                _ => {}
            }
        }
        Ok(target.expect("orbits are nonempty"))
    }
}

/// Upstairs orbits lying over downstairs orbit `orbit`; empty means obstructed.
pub fn level_fiber(map: &LevelMap, down: &Hurwitz, orbit: usize, up: &Hurwitz) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for o in 0..up.orbits.len() {
        if map.project_orbit(up, down, o)? == orbit {
            out.push(o);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentNode {
    pub orbit: usize,
    pub degree: usize,
    pub genus: u64,
    pub widths: Vec<usize>,
    pub obstructed: bool,
    pub lifting_invariant: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CuspNode {
    pub orbit: usize,
    pub cusp: usize,
    pub label: String,
    pub width: usize,
    pub mp: u32,
    pub kind: CuspKind,
    pub is_hm: bool,
    pub is_shift_of_hm: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerLevel {
    pub level: usize,
    pub group: String,
    pub order: usize,
    pub classes: String,
    pub inner_classes: usize,
    pub reduced_classes: usize,
    pub components: Vec<ComponentNode>,
    pub cusps: Vec<CuspNode>,
}

/// Edge from level `level + 1` down to `level`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentEdge {
    pub level: usize,
    pub upper: usize,
    pub lower: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuspEdge {
    pub level: usize,
    pub upper: (usize, usize),
    pub lower: (usize, usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerGraph {
    pub prime: u64,
    pub levels: Vec<TowerLevel>,
    pub component_edges: Vec<ComponentEdge>,
    pub cusp_edges: Vec<CuspEdge>,
    pub fp1_violations: Vec<String>,
    pub fp2_violations: Vec<String>,
}

pub struct Tower {
    pub hurwitz: Vec<Hurwitz>,
    pub graph: TowerGraph,
}

/// Builds the tower over `base_classes`. `chain[i]` maps level `i + 1` onto level `i`;
/// `extensions[i]`, when present, annotates level `i` components with lifting invariants.
pub fn build_graph(
    base: Arc<FiniteGroup>,
    chain: &[LevelMap],
    base_classes: ClassMultiset,
    p: u64,
    extensions: &[Option<CentralExtension>],
) -> Result<Tower> {
    let mut groups = vec![base];
    for (i, m) in chain.iter().enumerate() {
        if m.lower().elements() != groups[i].elements() {
            return Err(Error::BadParameters(format!("chain map {} does not land on level {i}", i + 1)));
        }
        groups.push(m.upper().clone());
    }
    let mut hurwitz = vec![Hurwitz::compute(groups[0].clone(), base_classes)?];
    for m in chain {
        let cm = m.match_classes(&hurwitz.last().unwrap().classes)?;
        hurwitz.push(Hurwitz::compute(m.upper().clone(), cm)?);
    }

    let mut levels = Vec::new();
    for (k, h) in hurwitz.iter().enumerate() {
        let ext = extensions.get(k).and_then(Option::as_ref);
        let mut components = Vec::new();
        let mut cusps = Vec::new();
        for o in 0..h.orbits.len() {
            let d = genus(h, o)?;
            let lifting_invariant = match ext {
                Some(e) => {
                    let t = translate(&h.group, e.base(), h.tuple(o, 0))?;
                    Some(e.lifting_invariant(&t)?.to_string())
                }
                None => None,
            };
            components.push(ComponentNode {
                orbit: o,
                degree: d.degree,
                genus: d.genus,
                widths: d.widths,
                obstructed: false,
                lifting_invariant,
            });
            for c in 0..h.orbits[o].cusps.len() {
                let t = classify_cusp(h, o, c, p, None)?;
                cusps.push(CuspNode {
                    orbit: o,
                    cusp: c,
                    label: t.label,
                    width: t.width,
                    mp: t.mp,
                    kind: t.kind,
                    is_hm: t.is_hm,
                    is_shift_of_hm: t.is_shift_of_hm,
                });
            }
        }
        levels.push(TowerLevel {
            level: k,
            group: h.group.name().to_string(),
            order: h.group.order(),
            classes: h.classes.label(&h.group),
            inner_classes: h.inner.len(),
            reduced_classes: h.reduced.len(),
            components,
            cusps,
        });
    }

    let mut component_edges = Vec::new();
    let mut cusp_edges = Vec::new();
    for (k, m) in chain.iter().enumerate() {
        let (down, up) = (&hurwitz[k], &hurwitz[k + 1]);
        for o in 0..up.orbits.len() {
            component_edges.push(ComponentEdge { level: k, upper: o, lower: m.project_orbit(up, down, o)? });
            for (c, cusp) in up.orbits[o].cusps.iter().enumerate() {
                let r = m.project_reduced(up, down, up.orbits[o].members[cusp.members[0]])?;
                let lo = down.orbit_of[r];
                let pos = down.orbits[lo].position(r).expect("reduced class lies in its orbit");
                cusp_edges.push(CuspEdge { level: k, upper: (o, c), lower: (lo, down.orbits[lo].cusp_of(pos)) });
            }
        }
        for comp in levels[k].components.iter_mut() {
            comp.obstructed = !component_edges.iter().any(|e| e.level == k && e.lower == comp.orbit);
        }
    }

    let find = |k: usize, (o, c): (usize, usize)| {
        levels[k].cusps.iter().find(|n| n.orbit == o && n.cusp == c).expect("cusp node exists")
    };
    let mut fp1_violations = Vec::new();
    for e in &cusp_edges {
        let lo = find(e.level, e.lower);
        let hi = find(e.level + 1, e.upper);
        let u = valuation(lo.mp as u64, p);
        if u >= 1 && !(hi.mp as u64).is_multiple_of(p.pow(u + 1)) {
            fp1_violations.push(format!(
                "level {}: {} (mp {}) over {} (mp {})",
                e.level + 1,
                hi.label,
                hi.mp,
                lo.label,
                lo.mp
            ));
        }
    }
    let mut fp2_violations = Vec::new();
    for k in 0..chain.len() {
        for n in levels[k].cusps.iter().filter(|n| n.kind == CuspKind::GPPrime) {
            let covered = cusp_edges
                .iter()
                .any(|e| e.level == k && e.lower == (n.orbit, n.cusp) && find(k + 1, e.upper).kind == CuspKind::GPPrime);
            if !covered {
                fp2_violations.push(format!("level {k}: {} has no g-p' cusp above it", n.label));
            }
        }
    }

    Ok(Tower {
        hurwitz,
        graph: TowerGraph {
            prime: p,
            levels,
            component_edges,
            cusp_edges,
            fp1_violations,
            fp2_violations,
        },
    })
}

fn valuation(mut n: u64, p: u64) -> u32 {
    let mut u = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        u += 1;
    }
    u
}

impl TowerGraph {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph tower {\n  rankdir=TB;\n");
        for lv in self.levels.iter().rev() {
            let k = lv.level;
            let _ = writeln!(s, "  subgraph cluster_{k} {{");
            let _ = writeln!(s, "    label=\"level {k}: {} {}\";", escape(&lv.group), escape(&lv.classes));
            for c in &lv.components {
                let style = if c.obstructed { ", style=dashed" } else { "" };
                let _ = writeln!(
                    s,
                    "    c{k}_{} [shape=box, label=\"{}/{}\"{style}];",
                    c.orbit, c.degree, c.genus
                );
            }
            for c in &lv.cusps {
                let _ = writeln!(
                    s,
                    "    u{k}_{}_{} [shape=ellipse, label=\"{}/{}\"];",
                    c.orbit, c.cusp, c.width, escape(&c.kind.to_string())
                );
                let _ = writeln!(s, "    u{k}_{}_{} -> c{k}_{} [style=dotted, arrowhead=none];", c.orbit, c.cusp, c.orbit);
            }
            s.push_str("  }\n");
        }
        for e in &self.component_edges {
            let _ = writeln!(s, "  c{}_{} -> c{}_{};", e.level + 1, e.upper, e.level, e.lower);
        }
        for e in &self.cusp_edges {
            let _ = writeln!(
                s,
                "  u{}_{}_{} -> u{}_{}_{};",
                e.level + 1,
                e.upper.0,
                e.upper.1,
                e.level,
                e.lower.0,
                e.lower.1
            );
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tower graph serializes")
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
