use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nielsen_forge::cusp::{self, classify_cusp, cover_genus, genus, regular_cover_genus, sh_incidence, Pairing};
use nielsen_forge::hom::is_frattini_cover;
use nielsen_forge::lifting::{jennings_dims, spin_parity, translate};
use nielsen_forge::perm::convention_self_test;
use nielsen_forge::presets::{make_group, parse_and_make, preset_map, GroupSpec};
use nielsen_forge::report::{hurwitz_for, run, Analysis, Format, RunConfig};
use nielsen_forge::tower::{build_graph, LevelMap};
use nielsen_forge::verify::{render_table, verify};
use nielsen_forge::{Permutation, DEFAULT_CAP};
use nielsen_forge::nielsen::ClassMultiset;

#[derive(Parser)]
#[command(name = "nielsen-forge", version, about = "Nielsen classes, braid orbits, cusps and lifting invariants of finite groups")]
struct Cli {
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Maximum group order to build (overrides NIELSEN_FORGE_CAP).
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Target {
    /// Group spec, e.g. "A(4)", "D(9)", "V2xPM(3)", "SL2(3)", "A(4) x C(2)".
    #[arg(long)]
    group: String,
    /// Class multiset, e.g. "3+:2,3-:2" or "2:4" or "(1 2 3):4".
    #[arg(long)]
    classes: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Markdown,
    Json,
    Csv,
    Dot,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Format {
        match f {
            OutFormat::Markdown => Format::Markdown,
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
            OutFormat::Dot => Format::Dot,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline for one Nielsen class.
    Report {
        /// TOML run configuration; command-line values are ignored when given.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        classes: Option<String>,
        #[arg(long, default_value_t = 2)]
        prime: u64,
        /// Output formats (repeatable).
        #[arg(long = "format", value_enum)]
        formats: Vec<OutFormat>,
        /// Cover whose preset carries a central extension of the group.
        #[arg(long)]
        extension: Option<String>,
        /// Comma-separated group specs above the base, lowest first.
        #[arg(long, value_delimiter = ',')]
        tower: Vec<String>,
        /// Merge reduced classes under GL2 (lattice presets).
        #[arg(long)]
        gl2: bool,
        /// Write report.<ext> files into this directory instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Braid orbits (components) with degrees and cusp widths.
    Orbits(Target),
    /// Cusp orbits with widths and representatives.
    Cusps(Target),
    /// sh-incidence matrices per component.
    Shinc {
        #[command(flatten)]
        target: Target,
        /// Pair cusps through gamma_0 instead of sh.
        #[arg(long)]
        gamma0: bool,
    },
    /// Genus of each component, or of a cover given by branch cycles.
    Genus {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        classes: Option<String>,
        /// Branch cycles separated by ';' (natural action).
        #[arg(long)]
        tuple: Option<String>,
        /// Use the regular representation of --group for --tuple.
        #[arg(long)]
        regular: bool,
    },
    /// Cusp types (p-cusp, g-p', o-p') with H-M flags.
    Classify {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        extension: Option<String>,
    },
    /// Lifting invariant of a tuple in a central extension, and the spin formula when it applies.
    Lift {
        /// Cover preset carrying the extension, e.g. "SL2(3)".
        #[arg(long)]
        extension: String,
        /// Entries separated by ';'.
        #[arg(long)]
        tuple: String,
    },
    /// Congruence screen for each component.
    Screen(Target),
    /// Component and cusp trees along a chain of covers.
    Tower {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        prime: u64,
        /// Comma-separated group specs above the base, lowest first.
        #[arg(long, value_delimiter = ',')]
        chain: Vec<String>,
        #[arg(long, value_enum, default_value = "markdown")]
        format: OutFormat,
    },
    /// Whether the natural map between two presets is a Frattini cover.
    Frattini {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
    /// Loewy layer dimensions of F_p[(Z/p)^n].
    Jennings {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
    },
    /// Run a built-in golden suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        json: bool,
    },
}

fn cap(cli: &Cli) -> Result<usize> {
    if let Some(c) = cli.cap {
        return Ok(c);
    }
    match std::env::var("NIELSEN_FORGE_CAP") {
        Ok(v) => v.trim().parse().with_context(|| format!("NIELSEN_FORGE_CAP={v:?} is not a number")),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn parse_tuple(s: &str, degree: usize) -> Result<Vec<Permutation>> {
    s.split(';')
        .filter(|x| !x.trim().is_empty())
        .map(|x| Permutation::parse(x.trim(), degree).map_err(Into::into))
        .collect()
}

fn execute(cli: &Cli) -> Result<String> {
    let cap = cap(cli)?;
    let mut out = String::new();
    match &cli.command {
        Command::Report { config, group, classes, prime, formats, extension, tower, gl2, out: dir } => {
            let mut cfg = match config {
                Some(path) => {
                    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    toml::from_str::<RunConfig>(&text)
                        .map_err(|e| nielsen_forge::Error::Config(e.to_string()))?
                }
                None => {
                    let (Some(g), Some(c)) = (group, classes) else {
                        bail!(nielsen_forge::Error::Config("--group and --classes are required without --config".into()));
                    };
                    let mut cfg = RunConfig::new(g, c, *prime);
                    if !formats.is_empty() {
                        cfg.formats = formats.iter().map(|&f| f.into()).collect();
                    }
                    cfg.extension = extension.clone();
                    cfg.tower = tower.clone();
                    cfg.gl2 = *gl2;
                    if !tower.is_empty() {
                        cfg.analyses.push(Analysis::Tower);
                    }
                    cfg
                }
            };
            if cli.cap.is_some() || cfg.cap.is_none() {
                cfg.cap = Some(cap);
            }
            let report = run(&cfg)?;
            for f in &cfg.formats {
                let text = report.render(*f);
                match dir {
                    Some(d) => {
                        fs::create_dir_all(d)?;
                        let ext = match f {
                            Format::Markdown => "md",
                            Format::Json => "json",
                            Format::Csv => "csv",
                            Format::Dot => "dot",
                        };
                        fs::write(d.join(format!("report.{ext}")), text)?;
                    }
                    None => out.push_str(&text),
                }
            }
        }
        Command::Orbits(t) => {
            let (g, h) = hurwitz_for(&t.group, &t.classes, cap)?;
            out.push_str(&format!("{} inner classes, {} reduced classes, {} braid orbits\n", h.inner.len(), h.reduced.len(), h.orbits.len()));
            for (o, orbit) in h.orbits.iter().enumerate() {
                let widths: Vec<String> = orbit.cusps.iter().map(|c| c.width.to_string()).collect();
                let rep: Vec<String> = h.tuple(o, 0).iter().map(|&x| g.perm(x).to_string()).collect();
                out.push_str(&format!("O_{}: degree {}, widths {}, rep {}\n", o + 1, orbit.degree(), widths.join(","), rep.join(" ")));
            }
        }
        Command::Cusps(t) => {
            let (g, h) = hurwitz_for(&t.group, &t.classes, cap)?;
            for (o, orbit) in h.orbits.iter().enumerate() {
                for c in &orbit.cusps {
                    let rep: Vec<String> = h.tuple(o, c.members[0]).iter().map(|&x| g.perm(x).to_string()).collect();
                    out.push_str(&format!("{}: width {}, rep {}\n", c.label, c.width, rep.join(" ")));
                }
            }
        }
        Command::Shinc { target, gamma0 } => {
            let (_, h) = hurwitz_for(&target.group, &target.classes, cap)?;
            let pairing = if *gamma0 { Pairing::GammaZero } else { Pairing::Sh };
            for orbit in &h.orbits {
                let m = sh_incidence(orbit, pairing);
                out.push_str(&format!("{}\n", m.labels.join(" ")));
                for (label, row) in m.labels.iter().zip(&m.matrix) {
                    let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                    out.push_str(&format!("{label}: {}\n", cells.join(" ")));
                }
                out.push('\n');
            }
        }
        Command::Genus { group, classes, tuple, regular } => match (tuple, group, classes) {
            (Some(t), Some(g), _) if *regular => {
                let g = make_group(&g.parse::<GroupSpec>()?, cap)?.group;
                let perms = parse_tuple(t, g.degree())?;
                let elems = perms.iter().map(|p| g.elem(p)).collect::<nielsen_forge::Result<Vec<_>>>()?;
                out.push_str(&format!("genus {}\n", regular_cover_genus(&g, &elems)?));
            }
            (Some(t), _, _) => {
                let degree = t
                    .split(';')
                    .filter_map(|x| Permutation::parse_auto(x.trim()).ok())
                    .map(|p| p.degree())
                    .max()
                    .unwrap_or(1);
                let perms = parse_tuple(t, degree)?;
                out.push_str(&format!("genus {}\n", cover_genus(&perms)?));
            }
            (None, Some(g), Some(c)) => {
                let (_, h) = hurwitz_for(g, c, cap)?;
                for o in 0..h.orbits.len() {
                    let d = genus(&h, o)?;
                    out.push_str(&format!(
                        "O_{}: degree {}, ind {}+{}+{}, genus {}, fixed gamma_0/gamma_1 {}/{}, fine moduli (Q'', gamma) {}/{}\n",
                        o + 1,
                        d.degree,
                        d.ind_gamma0,
                        d.ind_gamma1,
                        d.ind_gamma_inf,
                        d.genus,
                        d.fixed_gamma0,
                        d.fixed_gamma1,
                        d.fine_moduli_q,
                        d.fine_moduli_gamma
                    ));
                }
            }
            _ => bail!(nielsen_forge::Error::Config("give --group and --classes, or --tuple".into())),
        },
        Command::Classify { target, prime, extension } => {
            let (_, h) = hurwitz_for(&target.group, &target.classes, cap)?;
            let ext = match extension {
                Some(e) => parse_and_make(e, cap)?.extension,
                None => None,
            };
            for (o, orbit) in h.orbits.iter().enumerate() {
                for c in 0..orbit.cusps.len() {
                    let t = classify_cusp(&h, o, c, *prime, ext.as_ref())?;
                    let weigel = t.is_weigel_candidate.map(|b| format!(", Weigel candidate {b}")).unwrap_or_default();
                    out.push_str(&format!(
                        "{}: width {}, mp {}, {}, H-M {}, shift of H-M {}{weigel}\n",
                        t.label, t.width, t.mp, t.kind, t.is_hm, t.is_shift_of_hm
                    ));
                }
            }
        }
        Command::Lift { extension, tuple } => {
            let ext = parse_and_make(extension, cap)?
                .extension
                .with_context(|| format!("{extension} carries no central extension"))?;
            let base = ext.base();
            let perms = parse_tuple(tuple, base.degree())?;
            let elems = perms.iter().map(|p| base.elem(p)).collect::<nielsen_forge::Result<Vec<_>>>()?;
            let s = ext.lifting_invariant(&translate(base, base, &elems)?)?;
            out.push_str(&format!("lifting invariant {s}\n"));
            match spin_parity(&perms, base.degree()) {
                Ok(v) => out.push_str(&format!("spin formula {}\n", if v > 0 { "+1" } else { "-1" })),
                Err(e) => out.push_str(&format!("spin formula not applicable: {e}\n")),
            }
        }
        Command::Screen(t) => {
            let (_, h) = hurwitz_for(&t.group, &t.classes, cap)?;
            for o in 0..h.orbits.len() {
                let s = cusp::congruence_screen(&h, o, cap)?;
                out.push_str(&format!(
                    "O_{}: N={}, degree {}, widths {:?}: {}\n",
                    o + 1,
                    s.level,
                    s.degree,
                    s.widths,
                    serde_json::to_string(&s.verdict)?
                ));
                if let Some(f) = s.factors_through_level {
                    out.push_str(&format!("  action factors through SL2(Z/{}): {f}\n", s.level));
                }
            }
        }
        Command::Tower { target, prime, chain, format } => {
            let base = parse_and_make(&target.group, cap)?;
            let mut maps = Vec::new();
            let mut below = base.clone();
            for spec in chain {
                let above = parse_and_make(spec, cap)?;
                maps.push(LevelMap::new(preset_map(&above, &below)?, *prime)?);
                below = above;
            }
            let cm = ClassMultiset::parse(&base.group, &target.classes)?;
            let t = build_graph(base.group.clone(), &maps, cm, *prime, std::slice::from_ref(&base.extension))?;
            match format {
                OutFormat::Dot => out.push_str(&t.graph.to_dot()),
                OutFormat::Json => out.push_str(&t.graph.to_json()),
                _ => {
                    for lv in &t.graph.levels {
                        let comps: Vec<String> = lv
                            .components
                            .iter()
                            .map(|c| format!("{}/{}{}", c.degree, c.genus, if c.obstructed { " (obstructed)" } else { "" }))
                            .collect();
                        out.push_str(&format!("level {} {}: {} components [{}]\n", lv.level, lv.group, lv.components.len(), comps.join(", ")));
                    }
                    out.push_str(&format!(
                        "FP1 violations {}, FP2 violations {}\n",
                        t.graph.fp1_violations.len(),
                        t.graph.fp2_violations.len()
                    ));
                }
            }
        }
        Command::Frattini { source, target } => {
            let s = parse_and_make(source, cap)?;
            let t = parse_and_make(target, cap)?;
            out.push_str(&format!("{}\n", is_frattini_cover(&preset_map(&s, &t)?)?));
        }
        Command::Jennings { p, n } => {
            let j = jennings_dims(*p, *n)?;
            let dims: Vec<String> = j.dims.iter().map(|d| d.to_string()).collect();
            out.push_str(&format!("{}\n", dims.join(" ")));
        }
        Command::Verify { suite, json } => {
            let outcomes = verify(suite)?;
            if *json {
                out.push_str(&serde_json::to_string_pretty(&outcomes)?);
                out.push('\n');
            } else {
                out.push_str(&render_table(&outcomes));
            }
            if outcomes.iter().any(|o| !o.pass) {
                print!("{out}");
                bail!("verification failed");
            }
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = convention_self_test() {
        eprintln!("error[{}]: permutation convention self-test failed: {e}", e.code());
        return ExitCode::from(3);
    }
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match execute(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            match e.downcast_ref::<nielsen_forge::Error>() {
                Some(ne) => eprintln!("error[{}]: {ne}", ne.code()),
                None => eprintln!("error: {e:#}"),
            }
            ExitCode::FAILURE
        }
    }
}
