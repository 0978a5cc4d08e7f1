//! `doublecat`: braided structure of Rep(D(G)) from the command line.
//!
//! Exit codes: 0 ok, 2 input error, 3 verification failure, 4 cap exceeded.

mod spec;
mod verify;

use clap::{Parser, Subcommand, ValueEnum};
use doublecat_core::braid::{BraidEvaluator, BraidWord};
use doublecat_core::catalog::GroupData;
use doublecat_core::double::{fusion_rules, DoubleData, FusionTensor};
use doublecat_core::gauging::{
    enumerate_gaugings, enumerate_qts, GaugingError, GaugingQuadruple, QTStructure,
};
use doublecat_core::group::GroupError;
use doublecat_core::modular::{
    indicators_checked, is_modular, modular_data, verlinde_with_deviation, ModularError,
};
use doublecat_core::structure::StructuredGroup;
use doublecat_core::{AbHom, Bicharacter};
use num_complex::Complex64;
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Verification(String),
    Cap(String),
}

impl CliError {
    fn input(msg: impl Into<String>) -> CliError {
        CliError::Input(msg.into())
    }

    fn group(e: GroupError) -> CliError {
        match e {
            GroupError::OrderCapExceeded(_) => CliError::Cap(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }

    fn gauging(e: GaugingError) -> CliError {
        match e {
            GaugingError::EnumerationCapExceeded(..) => CliError::Cap(e.to_string()),
            GaugingError::Double(d) => CliError::double(d),
            _ => CliError::Input(e.to_string()),
        }
    }

    fn double(e: doublecat_core::double::DoubleError) -> CliError {
        use doublecat_core::double::DoubleError::*;
        match e {
            FusionCapExceeded(..) => CliError::Cap(e.to_string()),
            OrthonormalityFailure(_) | NonIntegerFusion(_) | DualNotFound(_) => {
                CliError::Verification(e.to_string())
            }
            Rep(_) | Abelian(_) => CliError::Verification(e.to_string()),
            InvalidComponents(_) => CliError::Input(e.to_string()),
        }
    }

    fn modular(e: ModularError) -> CliError {
        match e {
            ModularError::Gauging(g) => CliError::gauging(g),
            ModularError::Double(d) => CliError::double(d),
            _ => CliError::Verification(e.to_string()),
        }
    }

    fn braid(e: doublecat_core::braid::BraidError) -> CliError {
        use doublecat_core::braid::BraidError::*;
        match e {
            SizeCapExceeded(..) => CliError::Cap(e.to_string()),
            Gauging(g) => CliError::gauging(g),
            _ => CliError::Input(e.to_string()),
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Cap(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Verification(m) | CliError::Cap(m) => m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Parser)]
#[command(name = "doublecat", version, about = "modular data and braid gaugings of Drinfeld doubles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Group spec: catalog:NAME, inline JSON, or a JSON file path
    #[arg(long, global = true)]
    group: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for the randomized eigen-splitting (env: DOUBLECAT_SEED)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Character-table cache directory (env: DOUBLECAT_CACHE)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = doublecat_core::TOL_COMPARE)]
    tol_compare: f64,
    #[arg(long, global = true, default_value_t = doublecat_core::TOL_SNAP)]
    tol_snap: f64,
    /// Disable the character-table cache entirely
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List the simple objects of Rep(D(G)) with dimensions and degrees
    Simples {
        /// Include each character's values on its commuting-pair support
        #[arg(long)]
        characters: bool,
    },
    /// S and T matrices of one quasitriangular structure
    ModularData {
        /// R0, R1, or an index into the structure enumeration
        #[arg(long, default_value = "R0")]
        qts: String,
    },
    /// Indicator values for the listed powers
    Indicators {
        /// Comma-separated powers, e.g. "1,2,3"
        #[arg(long, default_value = "1,2")]
        m: String,
        #[arg(long, default_value = "R0")]
        qts: String,
    },
    /// Fusion coefficients via characters, the S-matrix formula, or both
    Fusion {
        #[arg(long, default_value = "both")]
        route: String,
    },
    /// Braid gaugings: list them or verify their algebraic properties
    Gaugings {
        #[arg(default_value = "list")]
        action: String,
    },
    /// Enumerate the quasitriangular structures
    Qts,
    /// Borromean closure traces
    Btensor {
        /// all | random:<n>
        #[arg(long, default_value = "random:10")]
        triples: String,
        #[arg(long, default_value = "R0")]
        qts: String,
    },
    /// Whitehead closure traces (normalized, symmetric)
    Wmatrix {
        #[arg(long, default_value = "R0")]
        qts: String,
    },
    /// Trace of an arbitrary braid-word closure
    Braid {
        /// Comma-separated signed letters, e.g. "1,-2,1"
        #[arg(long)]
        word: String,
        /// Comma-separated label indices, one per strand
        #[arg(long)]
        labels: String,
        #[arg(long, default_value = "R0")]
        qts: String,
    },
    /// Run a verification suite and report per-check results
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

struct RunConfig {
    data: GroupData,
    format: Format,
    seed: u64,
    cache_dir: Option<PathBuf>,
    tol_compare: f64,
    tol_snap: f64,
}

fn config_from(cli: &Cli) -> Result<RunConfig, CliError> {
    let group_arg =
        cli.group.as_ref().ok_or_else(|| CliError::input("--group is required"))?;
    let data = spec::parse_group_arg(group_arg)?;
    let seed = cli
        .seed
        .or_else(|| std::env::var("DOUBLECAT_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(doublecat_core::DEFAULT_SEED);
    let cache_dir = if cli.no_cache {
        None
    } else {
        Some(cli.cache_dir.clone().unwrap_or_else(|| {
            std::env::var("DOUBLECAT_CACHE")
                .map(PathBuf::from)
                .unwrap_or_else(|_| PathBuf::from(doublecat_core::cache::DEFAULT_CACHE_DIR))
        }))
    };
    Ok(RunConfig {
        data,
        format: cli.format,
        seed,
        cache_dir,
        tol_compare: cli.tol_compare,
        tol_snap: cli.tol_snap,
    })
}

fn double_data(cfg: &RunConfig) -> Result<DoubleData, CliError> {
    let sg = StructuredGroup::new(cfg.data.clone())
        .map_err(|e| CliError::input(e.to_string()))?;
    DoubleData::with_options(sg, cfg.seed, cfg.cache_dir.as_deref()).map_err(CliError::double)
}

fn pick_qts(dd: &DoubleData, spec: &str) -> Result<QTStructure, CliError> {
    match spec {
        "R0" => Ok(QTStructure::r0(&dd.sg)),
        "R1" => Ok(QTStructure::r1(&dd.sg)),
        s => {
            let idx: usize = s
                .parse()
                .map_err(|_| CliError::input(format!("--qts must be R0, R1 or an index, got `{s}`")))?;
            let all = enumerate_qts(&dd.sg).map_err(CliError::gauging)?;
            all.into_iter()
                .nth(idx)
                .ok_or_else(|| CliError::input(format!("structure index {idx} out of range")))
        }
    }
}

fn complex_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Serialize)]
struct HomJson {
    source: Vec<u64>,
    target: Vec<u64>,
    images: Vec<Vec<u64>>,
}

impl From<&AbHom> for HomJson {
    fn from(h: &AbHom) -> HomJson {
        HomJson { source: h.src.clone(), target: h.dst.clone(), images: h.mat.clone() }
    }
}

#[derive(Serialize)]
struct BicharJson {
    orders: Vec<u64>,
    exponents: Vec<Vec<u64>>,
}

impl From<&Bicharacter> for BicharJson {
    fn from(b: &Bicharacter) -> BicharJson {
        BicharJson { orders: b.orders.clone(), exponents: b.mat.clone() }
    }
}

#[derive(Serialize)]
struct QuadrupleJson {
    w: HomJson,
    r: BicharJson,
    p: HomJson,
    z: HomJson,
}

impl From<&GaugingQuadruple> for QuadrupleJson {
    fn from(q: &GaugingQuadruple) -> QuadrupleJson {
        QuadrupleJson {
            w: (&q.w).into(),
            r: (&q.r).into(),
            p: (&q.p).into(),
            z: (&q.z).into(),
        }
    }
}

fn emit<T: Serialize>(cfg: &RunConfig, value: &T, csv: Option<String>, pretty: String) {
    match cfg.format {
        Format::Json => {
            println!("{}", serde_json::to_string(value).expect("output serializes"));
        }
        Format::Csv => match csv {
            Some(text) => print!("{text}"),
            None => println!("{}", serde_json::to_string(value).expect("output serializes")),
        },
        Format::Pretty => println!("{pretty}"),
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    if let Ok(threads) = std::env::var("DOUBLECAT_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cfg = config_from(&cli)?;
    match &cli.command {
        Command::Simples { characters } => {
            let dd = double_data(&cfg)?;
            #[derive(Serialize)]
            struct SimpleJson {
                label: usize,
                class_rep: usize,
                irrep: usize,
                dim: u64,
                coset: Vec<u64>,
                central: Vec<u64>,
                #[serde(skip_serializing_if = "Option::is_none")]
                character: Option<Vec<(usize, usize, f64, f64)>>,
            }
            #[derive(Serialize)]
            struct Out {
                group: String,
                order: usize,
                count: usize,
                simples: Vec<SimpleJson>,
            }
            let simples: Vec<SimpleJson> = dd
                .simples
                .iter()
                .enumerate()
                .map(|(label, s)| SimpleJson {
                    label,
                    class_rep: dd.sg.conj.classes[s.class].0,
                    irrep: s.irrep,
                    dim: s.dim,
                    coset: dd.degrees[label].coset.clone(),
                    central: dd.degrees[label].central.exps.clone(),
                    character: characters.then(|| {
                        dd.commuting
                            .iter()
                            .zip(&dd.char_vectors[label])
                            .filter(|(_, v)| v.norm_sqr() > 0.0)
                            .map(|(&(g, x), v)| (g, x, v.re, v.im))
                            .collect()
                    }),
                })
                .collect();
            let out = Out {
                group: cfg.data.name.clone(),
                order: dd.group().order(),
                count: simples.len(),
                simples,
            };
            let csv = out
                .simples
                .iter()
                .map(|s| format!("{},{},{},{}\n", s.label, s.class_rep, s.irrep, s.dim))
                .collect::<String>();
            let pretty = format!(
                "{} simple objects of D({}), square dimensions sum to {}",
                out.count,
                out.group,
                out.simples.iter().map(|s| s.dim * s.dim).sum::<u64>()
            );
            emit(&cfg, &out, Some(csv), pretty);
        }
        Command::ModularData { qts } => {
            let dd = double_data(&cfg)?;
            let structure = pick_qts(&dd, qts)?;
            let md = modular_data(&dd, &structure).map_err(CliError::modular)?;
            #[derive(Serialize)]
            struct Out {
                group: String,
                qts: String,
                dims: Vec<u64>,
                t: Vec<[f64; 2]>,
                s: Vec<Vec<[f64; 2]>>,
                modular: bool,
            }
            let m = dd.num_simples();
            let out = Out {
                group: cfg.data.name.clone(),
                qts: qts.clone(),
                dims: md.dims.clone(),
                t: md.t.iter().map(|&z| complex_pair(z)).collect(),
                s: (0..m)
                    .map(|i| (0..m).map(|j| complex_pair(md.s[(i, j)])).collect())
                    .collect(),
                modular: is_modular(&md),
            };
            let mut csv = String::new();
            for (i, t) in out.t.iter().enumerate() {
                csv.push_str(&format!("T,{},{},{}\n", i, t[0], t[1]));
            }
            for (i, row) in out.s.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    csv.push_str(&format!("S,{},{},{},{}\n", i, j, v[0], v[1]));
                }
            }
            let pretty = format!(
                "modular data of D({}) with {}: {} labels, modular = {}",
                out.group, out.qts, m, out.modular
            );
            emit(&cfg, &out, Some(csv), pretty);
        }
        Command::Indicators { m, qts } => {
            let dd = double_data(&cfg)?;
            let structure = pick_qts(&dd, qts)?;
            let md = modular_data(&dd, &structure).map_err(CliError::modular)?;
            let n = fusion_rules(&dd).map_err(CliError::double)?;
            let powers: Vec<u32> = m
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse().map_err(|_| CliError::input("bad --m list")))
                .collect::<Result<_, _>>()?;
            #[derive(Serialize)]
            struct PowerOut {
                m: u32,
                values: Vec<[f64; 2]>,
                integers: Option<Vec<i64>>,
            }
            #[derive(Serialize)]
            struct Out {
                group: String,
                qts: String,
                indicators: Vec<PowerOut>,
            }
            let mut indicators = Vec::new();
            for power in powers {
                let table =
                    indicators_checked(&dd, &md, &n, power).map_err(CliError::modular)?;
                indicators.push(PowerOut {
                    m: power,
                    values: table.values.iter().map(|&z| complex_pair(z)).collect(),
                    integers: table.rounded(),
                });
            }
            let out = Out { group: cfg.data.name.clone(), qts: qts.clone(), indicators };
            let csv = out
                .indicators
                .iter()
                .flat_map(|p| {
                    p.values
                        .iter()
                        .enumerate()
                        .map(move |(l, v)| format!("{},{},{},{}\n", p.m, l, v[0], v[1]))
                })
                .collect::<String>();
            let pretty = out
                .indicators
                .iter()
                .map(|p| format!("m={}: {:?}", p.m, p.integers))
                .collect::<Vec<_>>()
                .join("\n");
            emit(&cfg, &out, Some(csv), pretty);
        }
        Command::Fusion { route } => {
            let dd = double_data(&cfg)?;
            let chars = match route.as_str() {
                "character" | "both" => Some(fusion_rules(&dd).map_err(CliError::double)?),
                _ => None,
            };
            let (formula, dev) = match route.as_str() {
                "verlinde" | "both" => {
                    let md =
                        modular_data(&dd, &QTStructure::r0(&dd.sg)).map_err(CliError::modular)?;
                    let (t, d) = verlinde_with_deviation(&dd, &md).map_err(CliError::modular)?;
                    (Some(t), Some(d))
                }
                _ => (None, None),
            };
            if route != "character" && route != "verlinde" && route != "both" {
                return Err(CliError::input("--route must be character, verlinde or both"));
            }
            if let (Some(a), Some(b)) = (&chars, &formula) {
                if a != b {
                    return Err(CliError::Verification(
                        "character and S-matrix fusion routes disagree".into(),
                    ));
                }
            }
            let tensor: &FusionTensor = chars.as_ref().or(formula.as_ref()).unwrap();
            #[derive(Serialize)]
            struct Out {
                group: String,
                route: String,
                labels: usize,
                max_deviation: Option<f64>,
                entries: Vec<[u32; 4]>,
            }
            let entries: Vec<[u32; 4]> = tensor
                .entries()
                .filter(|&(_, _, _, n)| n > 0)
                .map(|(i, k, j, n)| [i as u32, k as u32, j as u32, n])
                .collect();
            let out = Out {
                group: cfg.data.name.clone(),
                route: route.clone(),
                labels: dd.num_simples(),
                max_deviation: dev,
                entries,
            };
            let csv = out
                .entries
                .iter()
                .map(|e| format!("{},{},{},{}\n", e[0], e[1], e[2], e[3]))
                .collect::<String>();
            let pretty = format!(
                "{} nonzero fusion coefficients over {} labels (route: {})",
                out.entries.len(),
                out.labels,
                out.route
            );
            emit(&cfg, &out, Some(csv), pretty);
        }
        Command::Gaugings { action } => {
            let dd = double_data(&cfg)?;
            match action.as_str() {
                "list" => {
                    let gaugings = enumerate_gaugings(&dd.sg).map_err(CliError::gauging)?;
                    #[derive(Serialize)]
                    struct Out {
                        group: String,
                        count: usize,
                        gaugings: Vec<QuadrupleJson>,
                    }
                    let out = Out {
                        group: cfg.data.name.clone(),
                        count: gaugings.len(),
                        gaugings: gaugings.iter().map(QuadrupleJson::from).collect(),
                    };
                    let pretty = format!("{} braid gaugings of D({})", out.count, out.group);
                    emit(&cfg, &out, None, pretty);
                }
                "verify" => {
                    let tol = verify::Tolerances { compare: cfg.tol_compare, snap: cfg.tol_snap };
                    let mut report = verify::run_suite("gaugings", &dd, &cfg.data.name, &tol)
                        .expect("suite exists");
                    let axioms = verify::run_suite("axioms", &dd, &cfg.data.name, &tol)
                        .expect("suite exists");
                    report.checks.extend(axioms.checks);
                    report.ok = report
                        .checks
                        .iter()
                        .all(|c| c.status != verify::CheckStatus::Fail);
                    let pretty = pretty_report(&report);
                    emit(&cfg, &report, None, pretty);
                    if !report.ok {
                        return Ok(3);
                    }
                }
                other => {
                    return Err(CliError::input(format!(
                        "gaugings action must be list or verify, got `{other}`"
                    )))
                }
            }
        }
        Command::Qts => {
            let dd = double_data(&cfg)?;
            let all = enumerate_qts(&dd.sg).map_err(CliError::gauging)?;
            #[derive(Serialize)]
            struct QtsJson {
                index: usize,
                chirality: Vec<bool>,
                quadruple: QuadrupleJson,
            }
            #[derive(Serialize)]
            struct Out {
                group: String,
                count: usize,
                structures: Vec<QtsJson>,
            }
            let out = Out {
                group: cfg.data.name.clone(),
                count: all.len(),
                structures: all
                    .iter()
                    .enumerate()
                    .map(|(index, q)| QtsJson {
                        index,
                        chirality: q.chirality.members.clone(),
                        quadruple: (&q.quad).into(),
                    })
                    .collect(),
            };
            let pretty =
                format!("{} quasitriangular structures of D({})", out.count, out.group);
            emit(&cfg, &out, None, pretty);
        }
        Command::Btensor { triples, qts } => {
            let dd = double_data(&cfg)?;
            let structure = pick_qts(&dd, qts)?;
            let eval = BraidEvaluator::new(&dd, &structure).map_err(CliError::braid)?;
            let m = dd.num_simples();
            let list: Vec<(usize, usize, usize)> = if triples == "all" {
                (0..m)
                    .flat_map(|x| (0..m).flat_map(move |y| (0..m).map(move |z| (x, y, z))))
                    .collect()
            } else if let Some(ns) = triples.strip_prefix("random:") {
                let count: usize =
                    ns.parse().map_err(|_| CliError::input("bad --triples count"))?;
                let mut state = cfg.seed | 1;
                (0..count)
                    .map(|_| {
                        let mut next = || {
                            state = state
                                .wrapping_mul(6364136223846793005)
                                .wrapping_add(1442695040888963407);
                            (state >> 33) as usize % m
                        };
                        (next(), next(), next())
                    })
                    .collect()
            } else {
                return Err(CliError::input("--triples must be all or random:<n>"));
            };
            #[derive(Serialize)]
            struct Entry {
                labels: [usize; 3],
                value: [f64; 2],
            }
            #[derive(Serialize)]
            struct Out {
                group: String,
                qts: String,
                triples: Vec<Entry>,
            }
            let mut entries = Vec::with_capacity(list.len());
            for (x, y, z) in list {
                let v = eval.b_tensor(x, y, z).map_err(CliError::braid)?;
                entries.push(Entry { labels: [x, y, z], value: complex_pair(v) });
            }
            let out = Out { group: cfg.data.name.clone(), qts: qts.clone(), triples: entries };
            let csv = out
                .triples
                .iter()
                .map(|e| {
                    format!(
                        "{},{},{},{},{}\n",
                        e.labels[0], e.labels[1], e.labels[2], e.value[0], e.value[1]
                    )
                })
                .collect::<String>();
            let pretty = format!("{} closure traces computed", out.triples.len());
            emit(&cfg, &out, Some(csv), pretty);
        }
        Command::Wmatrix { qts } => {
            let dd = double_data(&cfg)?;
            let structure = pick_qts(&dd, qts)?;
            let md = modular_data(&dd, &structure).map_err(CliError::modular)?;
            let eval = BraidEvaluator::new(&dd, &structure).map_err(CliError::braid)?;
            let m = dd.num_simples();
            #[derive(Serialize)]
            struct Out {
                group: String,
                qts: String,
                entries: Vec<Vec<[f64; 2]>>,
            }
            let mut entries = Vec::with_capacity(m);
            for a in 0..m {
                let mut row = Vec::with_capacity(m);
                for x in 0..m {
                    row.push(complex_pair(eval.w_matrix(&md.t, a, x).map_err(CliError::braid)?));
                }
                entries.push(row);
            }
            let out = Out { group: cfg.data.name.clone(), qts: qts.clone(), entries };
            let csv = out
                .entries
                .iter()
                .enumerate()
                .flat_map(|(a, row)| {
                    row.iter()
                        .enumerate()
                        .map(move |(x, v)| format!("{},{},{},{}\n", a, x, v[0], v[1]))
                })
                .collect::<String>();
            let pretty = format!("{m} x {m} normalized Whitehead closure matrix");
            emit(&cfg, &out, Some(csv), pretty);
        }
        Command::Braid { word, labels, qts } => {
            let dd = double_data(&cfg)?;
            let structure = pick_qts(&dd, qts)?;
            let eval = BraidEvaluator::new(&dd, &structure).map_err(CliError::braid)?;
            let label_list: Vec<usize> = labels
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse().map_err(|_| CliError::input("bad --labels list")))
                .collect::<Result<_, _>>()?;
            for &l in &label_list {
                if l >= dd.num_simples() {
                    return Err(CliError::input(format!("label {l} out of range")));
                }
            }
            let braid_word = BraidWord::parse(label_list.len(), word).map_err(CliError::braid)?;
            let trace = eval.closure_trace(&braid_word, &label_list).map_err(CliError::braid)?;
            #[derive(Serialize)]
            struct Out {
                group: String,
                qts: String,
                word: String,
                labels: Vec<usize>,
                trace: [f64; 2],
            }
            let out = Out {
                group: cfg.data.name.clone(),
                qts: qts.clone(),
                word: word.clone(),
                labels: label_list,
                trace: complex_pair(trace),
            };
            let pretty = format!("closure trace = {} + {}i", out.trace[0], out.trace[1]);
            emit(&cfg, &out, None, pretty);
        }
        Command::Verify { suite } => {
            let dd = double_data(&cfg)?;
            let tol = verify::Tolerances { compare: cfg.tol_compare, snap: cfg.tol_snap };
            let report = verify::run_suite(suite, &dd, &cfg.data.name, &tol)
                .ok_or_else(|| {
                    CliError::input(format!(
                        "unknown suite `{suite}`; available: {}",
                        verify::SUITES.join(", ")
                    ))
                })?;
            let pretty = pretty_report(&report);
            emit(&cfg, &report, None, pretty);
            if !report.ok {
                return Ok(3);
            }
        }
    }
    Ok(0)
}

fn pretty_report(report: &verify::VerificationReport) -> String {
    let mut out = format!("suite `{}` on {}\n", report.suite, report.group);
    for c in &report.checks {
        let status = match c.status {
            verify::CheckStatus::Pass => "pass",
            verify::CheckStatus::Fail => "FAIL",
            verify::CheckStatus::Skipped => "skip",
        };
        out.push_str(&format!(
            "  [{status}] {} (max dev {:.2e}, {} ms) {}\n",
            c.name, c.max_deviation, c.runtime_ms, c.detail
        ));
    }
    out.push_str(if report.ok { "all checks passed" } else { "FAILURES present" });
    out.to_string()
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}
