//! Run configuration and report assembly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::braid::{inner_braid_orbits, Hurwitz};
use crate::cusp::{self, classify_cusp, cover_genus, genus, sh_incidence, ComponentDossier, CuspType, Pairing, ShIncidence};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, DEFAULT_CAP};
use crate::lifting::{translate, CentralExtension};
use crate::modular::CongruenceScreen;
use crate::nielsen::{class_label, inner_nielsen, ClassMultiset};
use crate::perm::{is_prime, Permutation};
use crate::presets::{gl2_automorphisms, make_group, preset_map, spin_extension_for, GroupSpec, Preset};
use crate::tower::{build_graph, LevelMap, TowerGraph};

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Analysis {
    Orbits,
    Cusps,
    Shinc,
    Genus,
    Classify,
    Lift,
    Screen,
    Tower,
}

impl Analysis {
    pub const ALL: [Analysis; 8] = [
        Analysis::Orbits,
        Analysis::Cusps,
        Analysis::Shinc,
        Analysis::Genus,
        Analysis::Classify,
        Analysis::Lift,
        Analysis::Screen,
        Analysis::Tower,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Markdown,
    Json,
    Csv,
    Dot,
}

/// A batch run. In a config file every key is optional except `group` and `classes`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub group: String,
    pub classes: String,
    #[serde(default = "default_prime")]
    pub prime: u64,
    #[serde(default = "default_analyses")]
    pub analyses: Vec<Analysis>,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
    #[serde(default)]
    pub cap: Option<usize>,
    /// Cover group spec whose preset carries a central extension of `group`.
    #[serde(default)]
    pub extension: Option<String>,
    /// Group specs above `group`, lowest first.
    #[serde(default)]
    pub tower: Vec<String>,
    /// Merge reduced classes under the `GL_2` action of a lattice preset.
    #[serde(default)]
    pub gl2: bool,
}

fn default_prime() -> u64 {
    2
}

fn default_analyses() -> Vec<Analysis> {
    Analysis::ALL[..7].to_vec()
}

fn default_formats() -> Vec<Format> {
    vec![Format::Markdown]
}

impl RunConfig {
    pub fn new(group: &str, classes: &str, prime: u64) -> RunConfig {
        RunConfig {
            group: group.to_string(),
            classes: classes.to_string(),
            prime,
            analyses: default_analyses(),
            formats: default_formats(),
            cap: None,
            extension: None,
            tower: Vec::new(),
            gl2: false,
        }
    }

    pub fn cap(&self) -> usize {
        self.cap.unwrap_or(DEFAULT_CAP)
    }

    pub fn wants(&self, a: Analysis) -> bool {
        self.analyses.contains(&a)
    }

    pub fn validate(&self) -> Result<()> {
        if self.classes.trim().is_empty() {
            return Err(Error::Config("class spec is empty".into()));
        }
        if !is_prime(self.prime) {
            return Err(Error::Config(format!("prime {} is not prime", self.prime)));
        }
        if self.analyses.is_empty() {
            return Err(Error::Config("no analyses requested".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassSummary {
    pub label: String,
    pub element_order: u32,
    pub size: usize,
    pub representative: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub spec: String,
    pub degree: usize,
    pub order: usize,
    pub classes: Vec<ClassSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CuspSummary {
    pub label: String,
    pub width: usize,
    pub representative: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentReport {
    pub label: String,
    pub degree: usize,
    pub representative: Vec<String>,
    pub cusps: Vec<CuspSummary>,
    pub cusp_types: Option<Vec<CuspType>>,
    pub sh_incidence: Option<ShIncidence>,
    pub dossier: Option<ComponentDossier>,
    pub lifting_invariant: Option<String>,
    pub screen: Option<CongruenceScreen>,
    pub provenance: BTreeMap<&'static str, &'static str>,
}

/// Orbit of the full braid group on inner classes, for ranks other than 4.
#[derive(Debug, Clone, Serialize)]
pub struct InnerOrbitReport {
    pub label: String,
    pub size: usize,
    pub representative: Vec<String>,
    pub lifting_invariant: Option<String>,
    pub cover_genus: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub group: GroupSummary,
    pub classes: String,
    pub prime: u64,
    pub rank: usize,
    pub inner_classes: usize,
    pub reduced_classes: Option<usize>,
    pub components: Vec<ComponentReport>,
    pub inner_orbits: Vec<InnerOrbitReport>,
    pub absolute_reduced_classes: Option<usize>,
    pub tower: Option<TowerGraph>,
    pub extension: Option<String>,
    pub notes: Vec<String>,
}

fn cycles(g: &FiniteGroup, t: &[u32]) -> Vec<String> {
    t.iter().map(|&x| g.perm(x).to_cycle_string()).collect()
}

fn extension_for(cfg: &RunConfig, preset: &Preset) -> Result<Option<(String, CentralExtension)>> {
    if let Some(spec) = &cfg.extension {
        let cover = make_group(&spec.parse::<GroupSpec>()?, cfg.cap())?;
        let ext = cover
            .extension
            .ok_or_else(|| Error::Config(format!("{spec} carries no central extension")))?;
        if ext.base().elements() != preset.group.elements() {
            return Err(Error::Config(format!("{spec} does not cover {}", cfg.group)));
        }
        return Ok(Some((spec.clone(), ext)));
    }
    let spin = spin_extension_for(&preset.group, cfg.cap())?;
    Ok(spin.map(|e| (if e.base().order() == 12 { "SL2(3)" } else { "SL2(5)" }.to_string(), e)))
}

fn component_provenance() -> BTreeMap<&'static str, &'static str> {
    BTreeMap::from([
        ("degree", "number of reduced classes in the gamma-orbit"),
        ("cusps", "cycles of gamma_inf = q2 on reduced classes"),
        ("genus", "2(deg + g - 1) = ind(gamma_0) + ind(gamma_1) + ind(gamma_inf)"),
        ("sh_incidence", "|O_a ∩ (O_b)sh| with sh = gamma_1"),
        ("cusp_types", "mp = ord(g2 g3); p-cusp iff p | mp; g-p' iff <g2,g3> and <g1,g4> are p'"),
        ("lifting_invariant", "product of p'-lifts, constant over every member of the orbit"),
        ("screen", "width-table comparison with X(m), X0(m), X1(m); exact factorization through SL2(Z/N) when in cap"),
    ])
}

pub fn run(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let cap = cfg.cap();
    let spec: GroupSpec = cfg.group.parse()?;
    let preset = make_group(&spec, cap)?;
    let g = preset.group.clone();
    let cm = ClassMultiset::parse(&g, &cfg.classes)?;
    let ext = if cfg.wants(Analysis::Lift) || cfg.wants(Analysis::Classify) || cfg.wants(Analysis::Tower) {
        extension_for(cfg, &preset)?
    } else {
        None
    };
    let group = GroupSummary {
        spec: spec.to_string(),
        degree: g.degree(),
        order: g.order(),
        classes: g
            .conjugacy_classes()
            .iter()
            .enumerate()
            .map(|(i, c)| ClassSummary {
                label: class_label(&g, i),
                element_order: c.element_order,
                size: c.size,
                representative: g.perm(c.representative).to_cycle_string(),
            })
            .collect(),
    };
    let mut notes = Vec::new();
    let mut report = Report {
        schema: SCHEMA_VERSION,
        group,
        classes: cm.label(&g),
        prime: cfg.prime,
        rank: cm.r(),
        inner_classes: 0,
        reduced_classes: None,
        components: Vec::new(),
        inner_orbits: Vec::new(),
        absolute_reduced_classes: None,
        tower: None,
        extension: ext.as_ref().map(|(s, _)| s.clone()),
        notes: Vec::new(),
    };

    if cm.r() != 4 {
        let inner = inner_nielsen(&g, &cm);
        report.inner_classes = inner.len();
        notes.push(format!("rank {} : reduced classes and cusps need rank 4; reporting braid orbits on inner classes", cm.r()));
        for (i, orbit) in inner_braid_orbits(&g, &inner).iter().enumerate() {
            let t = &inner[orbit[0]].canonical;
            let perms: Vec<Permutation> = t.iter().map(|&x| g.perm(x).clone()).collect();
            let lifting_invariant = match (&ext, cfg.wants(Analysis::Lift)) {
                (Some((_, e)), true) => Some(orbit_invariant(&g, e, orbit.iter().map(|&k| &inner[k].canonical[..]))?),
                _ => None,
            };
            report.inner_orbits.push(InnerOrbitReport {
                label: format!("O_{}", i + 1),
                size: orbit.len(),
                representative: cycles(&g, t),
                lifting_invariant,
                cover_genus: cover_genus(&perms).ok(),
            });
        }
        report.notes = notes;
        return Ok(report);
    }

    let h = Hurwitz::compute(g.clone(), cm.clone())?;
    report.inner_classes = h.inner.len();
    report.reduced_classes = Some(h.reduced.len());
    for (o, orbit) in h.orbits.iter().enumerate() {
        let cusps = orbit
            .cusps
            .iter()
            .map(|c| CuspSummary {
                label: c.label.clone(),
                width: c.width,
                representative: cycles(&g, h.tuple(o, c.members[0])),
            })
            .collect();
        let cusp_types = if cfg.wants(Analysis::Classify) {
            Some(
                (0..orbit.cusps.len())
                    .map(|c| classify_cusp(&h, o, c, cfg.prime, ext.as_ref().map(|(_, e)| e)))
                    .collect::<Result<Vec<_>>>()?,
            )
        } else {
            None
        };
        let lifting_invariant = match (&ext, cfg.wants(Analysis::Lift)) {
            (Some((_, e)), true) => {
                let members = (0..orbit.degree()).flat_map(|pos| h.combined_class(o, pos)).map(|t| &t[..]);
                Some(orbit_invariant(&g, e, members)?)
            }
            _ => None,
        };
        report.components.push(ComponentReport {
            label: format!("O_{}", o + 1),
            degree: orbit.degree(),
            representative: cycles(&g, h.tuple(o, 0)),
            cusps,
            cusp_types,
            sh_incidence: cfg.wants(Analysis::Shinc).then(|| sh_incidence(orbit, Pairing::Sh)),
            dossier: if cfg.wants(Analysis::Genus) { Some(genus(&h, o)?) } else { None },
            lifting_invariant,
            screen: if cfg.wants(Analysis::Screen) { Some(cusp::congruence_screen(&h, o, cap)?) } else { None },
            provenance: component_provenance(),
        });
    }
    if cfg.gl2 {
        let autos = gl2_automorphisms(&preset)?;
        report.absolute_reduced_classes = Some(h.absolute_reduced(&autos)?.len());
    }
    if cfg.wants(Analysis::Tower) || cfg.formats.contains(&Format::Dot) {
        report.tower = Some(tower_for(cfg, &preset, cm, ext.as_ref().map(|(_, e)| e.clone()))?);
    }
    if cfg.wants(Analysis::Classify) && ext.is_none() {
        notes.push("no central extension available: Weigel-candidate flags left unset".into());
    }
    if report.components.iter().any(|c| c.cusp_types.as_ref().is_some_and(|t| t.iter().any(|x| x.fp3.is_some()))) {
        notes.push("FP3 subgroup invariants use preimages inside the supplied cover, not the subgroups' own representation covers".into());
    }
    report.notes = notes;
    Ok(report)
}

fn orbit_invariant<'a>(
    g: &FiniteGroup,
    e: &CentralExtension,
    members: impl Iterator<Item = &'a [u32]>,
) -> Result<String> {
    let mut seen = std::collections::BTreeSet::new();
    for t in members {
        seen.insert(e.lifting_invariant(&translate(g, e.base(), t)?)?.to_string());
    }
    Ok(seen.into_iter().collect::<Vec<_>>().join("|"))
}

fn tower_for(cfg: &RunConfig, base: &Preset, cm: ClassMultiset, ext: Option<CentralExtension>) -> Result<TowerGraph> {
    let mut chain = Vec::new();
    let mut below = base.clone();
    for spec in &cfg.tower {
        let above = make_group(&spec.parse::<GroupSpec>()?, cfg.cap())?;
        chain.push(LevelMap::new(preset_map(&above, &below)?, cfg.prime)?);
        below = above;
    }
    Ok(build_graph(base.group.clone(), &chain, cm, cfg.prime, &[ext])?.graph)
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Markdown => self.to_markdown(),
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Dot => self.tower.as_ref().map(TowerGraph::to_dot).unwrap_or_default(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One row per cusp.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("component,degree,genus,lifting_invariant,cusp,width,mp,kind,hm,shift_of_hm,weigel_candidate\n");
        for c in &self.components {
            let genus = c.dossier.as_ref().map(|d| d.genus.to_string()).unwrap_or_default();
            let lift = c.lifting_invariant.clone().unwrap_or_default();
            for (i, cusp) in c.cusps.iter().enumerate() {
                let t = c.cusp_types.as_ref().map(|t| &t[i]);
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    c.label,
                    c.degree,
                    genus,
                    lift,
                    csv_field(&cusp.label),
                    cusp.width,
                    t.map(|t| t.mp.to_string()).unwrap_or_default(),
                    t.map(|t| t.kind.to_string()).unwrap_or_default(),
                    t.map(|t| t.is_hm.to_string()).unwrap_or_default(),
                    t.map(|t| t.is_shift_of_hm.to_string()).unwrap_or_default(),
                    t.and_then(|t| t.is_weigel_candidate).map(|b| b.to_string()).unwrap_or_default(),
                );
            }
        }
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {} with classes {} (p = {})\n", self.group.spec, self.classes, self.prime);
        let _ = writeln!(s, "Group of order {} on {} points.\n", self.group.order, self.group.degree);
        s.push_str("| class | order | size | representative |\n|---|---|---|---|\n");
        for c in &self.group.classes {
            let _ = writeln!(s, "| {} | {} | {} | `{}` |", c.label, c.element_order, c.size, c.representative);
        }
        let _ = write!(s, "\nRank {}: {} inner classes", self.rank, self.inner_classes);
        if let Some(r) = self.reduced_classes {
            let _ = write!(s, ", {r} reduced classes, {} braid orbits", self.components.len());
        }
        s.push_str(".\n");
        if let Some(a) = self.absolute_reduced_classes {
            let _ = writeln!(s, "Absolute reduced classes under GL2: {a}.");
        }
        if let Some(e) = &self.extension {
            let _ = writeln!(s, "Lifting invariants computed in {e}.");
        }
        if !self.inner_orbits.is_empty() {
            s.push_str("\n| orbit | size | representative | s | cover genus |\n|---|---|---|---|---|\n");
            for o in &self.inner_orbits {
                let _ = writeln!(
                    s,
                    "| {} | {} | `{}` | {} | {} |",
                    o.label,
                    o.size,
                    o.representative.join(", "),
                    o.lifting_invariant.as_deref().unwrap_or("-"),
                    o.cover_genus.map(|g| g.to_string()).unwrap_or_else(|| "-".into())
                );
            }
        }
        if !self.components.is_empty() {
            s.push_str("\n## Components\n\n| component | degree | widths | ind(g0)+ind(g1)+ind(ginf) | genus | fixed g0/g1 | s | screen |\n|---|---|---|---|---|---|---|---|\n");
            for c in &self.components {
                let widths: Vec<String> = c.cusps.iter().map(|x| x.width.to_string()).collect();
                let (ind, genus, fixed) = match &c.dossier {
                    Some(d) => (
                        format!("{}+{}+{}", d.ind_gamma0, d.ind_gamma1, d.ind_gamma_inf),
                        d.genus.to_string(),
                        format!("{}/{}", d.fixed_gamma0, d.fixed_gamma1),
                    ),
                    None => ("-".into(), "-".into(), "-".into()),
                };
                let screen = match &c.screen {
                    Some(x) => match &x.verdict {
                        crate::modular::Verdict::ConsistentWith(l) => format!("N={}: consistent with {}", x.level, l.join(", ")),
                        crate::modular::Verdict::Fails(r) => format!("N={}: fails ({r})", x.level),
                    },
                    None => "-".into(),
                };
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} | {} | {} | {} | {} |",
                    c.label,
                    c.degree,
                    widths.join(","),
                    ind,
                    genus,
                    fixed,
                    c.lifting_invariant.as_deref().unwrap_or("-"),
                    screen
                );
            }
            for c in &self.components {
                let _ = writeln!(s, "\n### {} (degree {})\n", c.label, c.degree);
                let _ = writeln!(s, "Representative: `{}`\n", c.representative.join(", "));
                s.push_str("| cusp | width | mp | type | H-M | shift of H-M | Weigel candidate | representative |\n|---|---|---|---|---|---|---|---|\n");
                for (i, cu) in c.cusps.iter().enumerate() {
                    let t = c.cusp_types.as_ref().map(|t| &t[i]);
                    let _ = writeln!(
                        s,
                        "| {} | {} | {} | {} | {} | {} | {} | `{}` |",
                        cu.label,
                        cu.width,
                        t.map(|t| t.mp.to_string()).unwrap_or_else(|| "-".into()),
                        t.map(|t| t.kind.to_string()).unwrap_or_else(|| "-".into()),
                        t.map(|t| yes_no(t.is_hm)).unwrap_or("-"),
                        t.map(|t| yes_no(t.is_shift_of_hm)).unwrap_or("-"),
                        t.and_then(|t| t.is_weigel_candidate).map(yes_no).unwrap_or("-"),
                        cu.representative.join(", ")
                    );
                }
                if let Some(m) = &c.sh_incidence {
                    let _ = writeln!(s, "\nsh-incidence:\n\n| | {} |\n|---|{}", m.labels.join(" | "), "---|".repeat(m.labels.len()));
                    for (label, row) in m.labels.iter().zip(&m.matrix) {
                        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                        let _ = writeln!(s, "| {label} | {} |", cells.join(" | "));
                    }
                }
                if let Some(d) = &c.dossier {
                    let _ = writeln!(
                        s,
                        "\nFine moduli: Q'' orbits all of length 4: {}; gamma_0 and gamma_1 fixed-point free: {}.",
                        yes_no(d.fine_moduli_q),
                        yes_no(d.fine_moduli_gamma)
                    );
                }
            }
        }
        if let Some(t) = &self.tower {
            s.push_str("\n## Tower\n\n| level | group | inner | reduced | components (deg/genus) | obstructed |\n|---|---|---|---|---|---|\n");
            for lv in &t.levels {
                let comps: Vec<String> = lv.components.iter().map(|c| format!("{}/{}", c.degree, c.genus)).collect();
                let obst: Vec<String> = lv
                    .components
                    .iter()
                    .filter(|c| c.obstructed)
                    .map(|c| format!("O_{}", c.orbit + 1))
                    .collect();
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} | {} | {} |",
                    lv.level,
                    lv.group,
                    lv.inner_classes,
                    lv.reduced_classes,
                    comps.join(", "),
                    if obst.is_empty() { "-".into() } else { obst.join(", ") }
                );
            }
            let _ = writeln!(
                s,
                "\nFP1 violations: {}. FP2 violations: {}.",
                t.fp1_violations.len(),
                t.fp2_violations.len()
            );
        }
        if !self.notes.is_empty() {
            s.push_str("\n## Notes\n\n");
            for n in &self.notes {
                let _ = writeln!(s, "- {n}");
            }
        }
        s
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Shared by the CLI subcommands that only need the Hurwitz data.
pub fn hurwitz_for(group: &str, classes: &str, cap: usize) -> Result<(Arc<FiniteGroup>, Hurwitz)> {
    let preset = make_group(&group.parse::<GroupSpec>()?, cap)?;
    let cm = ClassMultiset::parse(&preset.group, classes)?;
    let h = Hurwitz::compute(preset.group.clone(), cm)?;
    Ok((preset.group, h))
}
