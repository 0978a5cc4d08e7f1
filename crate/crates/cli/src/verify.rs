//! Verification suites: each suite runs a batch of identity checks against
//! one group and reports per-check status, worst deviation and runtime.

use doublecat_core::braid::{w_gauge_factor, BraidEvaluator};
use doublecat_core::double::{fusion_rules, quasitriangular_axioms, DoubleData, FUSION_CAP};
use doublecat_core::gauging::{
    bch_coset_union_covers, bicentrality_check, central_fixed_point_holds, enumerate_gaugings,
    enumerate_qts, gauging_value, gauging_value_swapped, solve_central_fixed_point,
    solve_recursion, solve_recursion_from, QTStructure,
};
use doublecat_core::modular::{
    bns_indicators, gauge_transform, gauged_bns_partition_large, gauged_verlinde_partition,
    modular_data, sweedler_indicators, verlinde_with_deviation,
};
use doublecat_core::phase::Phase;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub max_deviation: f64,
    pub runtime_ms: u64,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub group: String,
    pub ok: bool,
    pub checks: Vec<CheckResult>,
}

pub struct Tolerances {
    pub compare: f64,
    pub snap: f64,
}

fn check<F>(name: &str, body: F) -> CheckResult
where
    F: FnOnce() -> Result<(f64, String), String>,
{
    let started = Instant::now();
    let (status, max_deviation, detail) = match body() {
        Ok((dev, detail)) => (CheckStatus::Pass, dev, detail),
        Err(msg) if msg == "skipped" => (CheckStatus::Skipped, 0.0, "not applicable".into()),
        Err(msg) => (CheckStatus::Fail, f64::NAN, msg),
    };
    CheckResult {
        name: name.to_string(),
        status,
        max_deviation,
        runtime_ms: started.elapsed().as_millis() as u64,
        detail,
    }
}

fn seeded(seed: u64, n: usize, count: usize) -> Vec<usize> {
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15) | 1;
    (0..count)
        .map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize % n
        })
        .collect()
}

type Check = Box<dyn FnOnce() -> CheckResult + Send>;

fn axiom_checks(dd: &DoubleData, tol: &Tolerances) -> Vec<Check> {
    let compare = tol.compare;
    let dd1 = dd;
    vec![Box::new({
        let sg = dd1.sg.clone();
        move || {
            check("quasitriangularity axioms on enumerated structures", move || {
                let small = sg.group.order() <= 12;
                let structures: Vec<QTStructure> = if small {
                    enumerate_qts(&sg).map_err(|e| e.to_string())?
                } else {
                    vec![QTStructure::r0(&sg), QTStructure::r1(&sg)]
                };
                let mut worst = 0.0f64;
                for qts in &structures {
                    let elem = qts.realize(&sg).map_err(|e| e.to_string())?;
                    let report = quasitriangular_axioms(&sg.group, &elem);
                    worst = worst.max(report.max());
                }
                if worst > compare {
                    return Err(format!("axiom deviation {worst:.2e}"));
                }
                let scope = if small { "all structures" } else { "standard structures" };
                Ok((worst, format!("{} checked ({scope})", structures.len())))
            })
        }
    })]
}

fn gauging_checks(dd: &DoubleData, _tol: &Tolerances) -> Vec<Check> {
    let sg = dd.sg.clone();
    let degrees = dd.degrees.clone();
    let sg2 = sg.clone();
    let degrees2 = degrees.clone();
    let sg3 = sg.clone();
    vec![
        Box::new(move || {
            check("gauging value group law", move || {
                let gaugings = enumerate_gaugings(&sg).map_err(|e| e.to_string())?;
                let picks = seeded(0xA11, gaugings.len(), 16.min(gaugings.len() * 2));
                let mut pairs_checked = 0usize;
                for w in picks.chunks(2) {
                    let (b1, b2) = (&gaugings[w[0]], &gaugings[w[1 % w.len()]]);
                    let sum = b1.add(b2);
                    for x in degrees.iter().step_by(1 + degrees.len() / 8) {
                        for y in degrees.iter().step_by(1 + degrees.len() / 8) {
                            let lhs = gauging_value(&sum, x, y);
                            let rhs = gauging_value(b1, x, y).add(gauging_value(b2, x, y));
                            if lhs != rhs {
                                return Err("group law violated".into());
                            }
                            pairs_checked += 1;
                        }
                    }
                }
                Ok((0.0, format!("{pairs_checked} exact value comparisons")))
            })
        }),
        Box::new(move || {
            check("both evaluation forms agree", move || {
                let gaugings = enumerate_gaugings(&sg2).map_err(|e| e.to_string())?;
                let mut checked = 0usize;
                for quad in gaugings.iter().step_by(1 + gaugings.len() / 16) {
                    for x in &degrees2 {
                        for y in &degrees2 {
                            if gauging_value(quad, x, y) != gauging_value_swapped(quad, x, y) {
                                return Err("form disagreement".into());
                            }
                            checked += 1;
                        }
                    }
                }
                Ok((0.0, format!("{checked} exact comparisons")))
            })
        }),
        Box::new(move || {
            check("bicentrality of every gauging", move || {
                if sg3.group.order() > 12 {
                    return Err("skipped".into());
                }
                let gaugings = enumerate_gaugings(&sg3).map_err(|e| e.to_string())?;
                let count = gaugings.len();
                for quad in gaugings {
                    if !bicentrality_check(&sg3, &quad).map_err(|e| e.to_string())? {
                        return Err("a gauging failed centrality".into());
                    }
                }
                Ok((0.0, format!("{count} elements central in the tensor square")))
            })
        }),
    ]
}

fn modgauge_checks(dd: &DoubleData, tol: &Tolerances) -> Vec<Check> {
    let compare = tol.compare;
    let sg = dd.sg.clone();
    let dd = dd.clone();
    vec![Box::new(move || {
        check("modular-data transform law (direct vs factor formula)", move || {
            let base = modular_data(&dd, &QTStructure::r0(&sg)).map_err(|e| e.to_string())?;
            let gaugings = enumerate_gaugings(&sg).map_err(|e| e.to_string())?;
            let mut worst = 0.0f64;
            let picks = seeded(0xD06, gaugings.len(), 20.min(gaugings.len()));
            for &gi in &picks {
                let quad = &gaugings[gi];
                let direct = modular_data(
                    &dd,
                    &QTStructure {
                        chirality: doublecat_core::gauging::ChiralitySet::full(&sg),
                        quad: quad.clone(),
                    },
                )
                .map_err(|e| e.to_string())?;
                let formula = gauge_transform(&dd, &base, quad);
                for i in 0..dd.num_simples() {
                    worst = worst.max((direct.t[i] - formula.t[i]).norm());
                }
                worst = worst
                    .max((direct.s - formula.s).iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
            if worst > compare {
                return Err(format!("transform deviation {worst:.2e}"));
            }
            Ok((worst, format!("{} gaugings recomputed directly", picks.len())))
        })
    })]
}

fn bns_checks(dd: &DoubleData, tol: &Tolerances) -> Vec<Check> {
    let snap = tol.snap;
    let dd = dd.clone();
    vec![Box::new(move || {
        check("indicator oracle agreement", move || {
            let md = modular_data(&dd, &QTStructure::r0(&dd.sg)).map_err(|e| e.to_string())?;
            let mut worst = 0.0f64;
            if dd.num_simples() <= FUSION_CAP {
                let n = fusion_rules(&dd).map_err(|e| e.to_string())?;
                for m in 1..=4 {
                    let bns = bns_indicators(&md, &n, m);
                    let oracle = sweedler_indicators(&dd, m);
                    for (a, b) in bns.values.iter().zip(&oracle.values) {
                        worst = worst.max((a - b).norm());
                    }
                }
            } else {
                let trivial = doublecat_core::gauging::GaugingQuadruple::trivial(&dd.sg);
                for m in 1..=4 {
                    let oracle = sweedler_indicators(&dd, m);
                    for &j in &seeded(m as u64, dd.num_simples(), 4) {
                        let sum =
                            gauged_bns_partition_large(&dd, &md, &trivial, m, Phase::ZERO, j);
                        worst = worst.max((sum - oracle.values[j] * dd.global_dim()).norm());
                    }
                }
            }
            if worst > snap {
                return Err(format!("oracle deviation {worst:.2e}"));
            }
            Ok((worst, "fusion/T route vs Sweedler powers, m <= 4".into()))
        })
    })]
}

fn verlinde_checks(dd: &DoubleData, tol: &Tolerances) -> Vec<Check> {
    let snap = tol.snap;
    let dd = dd.clone();
    vec![Box::new(move || {
        check("dual-route fusion", move || {
            let md = modular_data(&dd, &QTStructure::r0(&dd.sg)).map_err(|e| e.to_string())?;
            if dd.num_simples() <= FUSION_CAP {
                let chars = fusion_rules(&dd).map_err(|e| e.to_string())?;
                let (formula, dev) = verlinde_with_deviation(&dd, &md).map_err(|e| e.to_string())?;
                if chars != formula {
                    return Err("routes disagree after rounding".into());
                }
                if dev > snap {
                    return Err(format!("pre-rounding deviation {dev:.2e}"));
                }
                Ok((dev, format!("{0}^3 entries on both routes", dd.num_simples())))
            } else {
                let trivial = doublecat_core::gauging::GaugingQuadruple::trivial(&dd.sg);
                let mut worst = 0.0f64;
                let idx = seeded(0x7E1, dd.num_simples(), 9);
                for t in idx.chunks(3) {
                    let (x, y, z) = (t[0], t[1], t[2]);
                    let sum = gauged_verlinde_partition(&dd, &md, &trivial, x, y, z, Phase::ZERO);
                    let zd = dd.dual_of(z).map_err(|e| e.to_string())?;
                    let n = dd.fusion_multiplicity(x, y, zd).map_err(|e| e.to_string())? as f64;
                    worst = worst.max((sum - Complex64::new(n * dd.global_dim(), 0.0)).norm());
                }
                if worst > snap {
                    return Err(format!("sampled deviation {worst:.2e}"));
                }
                Ok((worst, "sampled triples against character multiplicities".into()))
            }
        })
    })]
}

fn btensor_checks(dd: &DoubleData, tol: &Tolerances) -> Vec<Check> {
    let compare = tol.compare;
    let dd = dd.clone();
    vec![Box::new(move || {
        check("closure-trace gauging invariance (three-strand)", move || {
            let base = QTStructure::r0(&dd.sg);
            let eval0 = BraidEvaluator::new(&dd, &base).map_err(|e| e.to_string())?;
            let gaugings = enumerate_gaugings(&dd.sg).map_err(|e| e.to_string())?;
            let idx = seeded(0xB7, dd.num_simples(), 30);
            let picks = seeded(0xB8, gaugings.len(), 4.min(gaugings.len()));
            let mut worst = 0.0f64;
            for &gi in &picks {
                let gauged = BraidEvaluator::new(
                    &dd,
                    &QTStructure {
                        chirality: base.chirality.clone(),
                        quad: gaugings[gi].clone(),
                    },
                )
                .map_err(|e| e.to_string())?;
                for t in idx.chunks(3) {
                    let b0 = eval0.b_tensor(t[0], t[1], t[2]).map_err(|e| e.to_string())?;
                    let b1 = gauged.b_tensor(t[0], t[1], t[2]).map_err(|e| e.to_string())?;
                    worst = worst.max((b0 - b1).norm());
                }
            }
            if worst > compare {
                return Err(format!("invariance deviation {worst:.2e}"));
            }
            Ok((worst, format!("{} gaugings x 10 triples", picks.len())))
        })
    })]
}

fn wmatrix_checks(dd: &DoubleData, tol: &Tolerances) -> Vec<Check> {
    let compare = tol.compare;
    let dd1 = dd.clone();
    let dd2 = dd.clone();
    vec![
        Box::new(move || {
            check("w-matrix symmetry", move || {
                let base = QTStructure::r0(&dd1.sg);
                let md = modular_data(&dd1, &base).map_err(|e| e.to_string())?;
                let eval = BraidEvaluator::new(&dd1, &base).map_err(|e| e.to_string())?;
                let picks = seeded(0xAA, dd1.num_simples(), 6);
                let mut worst = 0.0f64;
                for &a in &picks {
                    for &x in &picks {
                        let wax = eval.w_matrix(&md.t, a, x).map_err(|e| e.to_string())?;
                        let wxa = eval.w_matrix(&md.t, x, a).map_err(|e| e.to_string())?;
                        worst = worst.max((wax - wxa).norm());
                    }
                }
                if worst > compare {
                    return Err(format!("asymmetry {worst:.2e}"));
                }
                Ok((worst, "sampled pairs".into()))
            })
        }),
        Box::new(move || {
            check("w-matrix gauging law", move || {
                let gaugings = enumerate_gaugings(&dd2.sg).map_err(|e| e.to_string())?;
                let Some(quad) = gaugings.into_iter().find(|q| !q.is_trivial()) else {
                    return Err("skipped".into());
                };
                let base = QTStructure::r0(&dd2.sg);
                let md = modular_data(&dd2, &base).map_err(|e| e.to_string())?;
                let md_g = gauge_transform(&dd2, &md, &quad);
                let eval0 = BraidEvaluator::new(&dd2, &base).map_err(|e| e.to_string())?;
                let eval1 = BraidEvaluator::new(
                    &dd2,
                    &QTStructure { chirality: base.chirality.clone(), quad: quad.clone() },
                )
                .map_err(|e| e.to_string())?;
                let picks = seeded(0xAB, dd2.num_simples(), 4);
                let mut worst = 0.0f64;
                for &a in &picks {
                    for &x in &picks {
                        let w0 = eval0.w_matrix(&md.t, a, x).map_err(|e| e.to_string())?;
                        let w1 = eval1.w_matrix(&md_g.t, a, x).map_err(|e| e.to_string())?;
                        let factor =
                            w_gauge_factor(&quad, &dd2.degrees[a], &dd2.degrees[x]).to_complex();
                        worst = worst.max((w1 - factor * w0).norm());
                    }
                }
                if worst > compare {
                    return Err(format!("law deviation {worst:.2e}"));
                }
                Ok((worst, "nontrivial gauging, sampled pairs".into()))
            })
        }),
    ]
}

fn solver_checks(dd: &DoubleData, _tol: &Tolerances) -> Vec<Check> {
    let sg1 = dd.sg.clone();
    let sg2 = dd.sg.clone();
    vec![
        Box::new(move || {
            check("recursion fixed points, start-independent", move || {
                if !sg1.is_purely_nonabelian() {
                    return Err("skipped".into());
                }
                let homs = sg1.central_homs();
                let ps = sg1.p_homs();
                let bchs = sg1.bicharacters();
                let mut solved = 0usize;
                for (i, w) in homs.iter().enumerate() {
                    let f = ps[i % ps.len()].clone();
                    let g = bchs[(5 * i) % bchs.len()].clone();
                    let z = solve_recursion(&sg1, w, std::slice::from_ref(&f), std::slice::from_ref(&g), 2)
                        .map_err(|e| e.to_string())?;
                    for start in homs.iter().take(3) {
                        let again = solve_recursion_from(
                            &sg1,
                            w,
                            std::slice::from_ref(&f),
                            std::slice::from_ref(&g),
                            2,
                            start,
                        )
                        .map_err(|e| e.to_string())?;
                        if again != z {
                            return Err("start dependence detected".into());
                        }
                    }
                    solved += 1;
                }
                Ok((0.0, format!("{solved} instances, exact")))
            })
        }),
        Box::new(move || {
            check("central automorphism identity and coset covering", move || {
                if !sg2.is_purely_nonabelian() {
                    return Err("skipped".into());
                }
                let ps = sg2.p_homs();
                let bchs = sg2.bicharacters();
                if ps.len() * bchs.len() > 4096 {
                    return Err("skipped".into());
                }
                for p in &ps {
                    for r in &bchs {
                        let delta =
                            solve_central_fixed_point(&sg2, p, r).map_err(|e| e.to_string())?;
                        if !central_fixed_point_holds(&sg2, p, r, &delta) {
                            return Err("identity violated".into());
                        }
                    }
                    if !bch_coset_union_covers(&sg2, p).map_err(|e| e.to_string())? {
                        return Err("coset union misses a bilinear form".into());
                    }
                }
                Ok((0.0, format!("{} automorphisms, exact", ps.len() * bchs.len())))
            })
        }),
    ]
}

pub const SUITES: &[&str] = &[
    "axioms", "gaugings", "modgauge", "bns", "verlinde", "btensor", "wmatrix", "solvers", "all",
];

pub fn run_suite(
    suite: &str,
    dd: &DoubleData,
    group_name: &str,
    tol: &Tolerances,
) -> Option<VerificationReport> {
    let mut checks: Vec<Check> = Vec::new();
    let mut add = |name: &str| match name {
        "axioms" => checks.extend(axiom_checks(dd, tol)),
        "gaugings" => checks.extend(gauging_checks(dd, tol)),
        "modgauge" => checks.extend(modgauge_checks(dd, tol)),
        "bns" => checks.extend(bns_checks(dd, tol)),
        "verlinde" => checks.extend(verlinde_checks(dd, tol)),
        "btensor" => checks.extend(btensor_checks(dd, tol)),
        "wmatrix" => checks.extend(wmatrix_checks(dd, tol)),
        "solvers" => checks.extend(solver_checks(dd, tol)),
        _ => {}
    };
    let parts: Vec<&str> = suite.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if parts.is_empty() || !parts.iter().all(|p| SUITES.contains(p)) {
        return None;
    }
    if parts.contains(&"all") {
        for s in SUITES.iter().filter(|&&s| s != "all") {
            add(s);
        }
    } else {
        for s in &parts {
            add(s);
        }
    }
    let results: Vec<CheckResult> = checks.into_par_iter().map(|c| c()).collect();
    let ok = results.iter().all(|r| r.status != CheckStatus::Fail);
    Some(VerificationReport {
        suite: suite.to_string(),
        group: group_name.to_string(),
        ok,
        checks: results,
    })
}
