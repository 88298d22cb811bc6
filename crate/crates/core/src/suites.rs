//! Named verification suites. Each suite is a fixed list of checks that run
//! in parallel and are reported in list order.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cubelike::{certify, omega, rank, CubelikeSpec};
use crate::error::{Error, Result};
use crate::feder::{
    compose_quotients, feder_graph, orbit_partition, product_of_quotients, product_pst,
    symmetrizer_check, verify_feder_iso,
};
use crate::graph::{
    build, cartesian_power, circulant, cubelike, godsil_family, scale, symmetric_residues, Graph,
    GraphFamilySpec as F,
};
use crate::io::format_sig17;
use crate::partition::{quotient, seeded_partition, verify_lemma31, Partition};
use crate::spectral::{fidelity, pst_condition_p4, P4Condition};
use crate::symmetry::{exists_swap, is_isomorphic, triangle_census};
use crate::walk::{fidelity_scan, symbolic_match, verify_equivalence, Peak, DEFAULT_STEPS};

/// Seed for every sampled check unless overridden.
pub const DEFAULT_SEED: u64 = 20_100_601;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Thm32,
    Feder,
    Composition,
    Product,
    Cubelike,
    Godsil,
    Paths,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Thm32,
        Suite::Feder,
        Suite::Composition,
        Suite::Product,
        Suite::Cubelike,
        Suite::Godsil,
        Suite::Paths,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm32 => "thm32",
            Suite::Feder => "feder",
            Suite::Composition => "composition",
            Suite::Product => "product",
            Suite::Cubelike => "cubelike",
            Suite::Godsil => "godsil",
            Suite::Paths => "paths",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Reported but not counted toward the suite verdict.
    pub informational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// Passes when `residual < tolerance`.
    pub fn below(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tolerance,
            pass: residual < tolerance,
            informational: false,
            note: None,
        }
    }

    /// A yes/no property; residual is 0 when it holds and 1 otherwise.
    pub fn flag(name: impl Into<String>, holds: bool) -> Self {
        Check {
            name: name.into(),
            residual: if holds { 0.0 } else { 1.0 },
            tolerance: 0.5,
            pass: holds,
            informational: false,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    fn failed(name: &str, err: &Error) -> Self {
        Check {
            name: name.into(),
            residual: f64::NAN,
            tolerance: 0.0,
            pass: false,
            informational: false,
            note: Some(err.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match (c.informational, c.pass) {
                (true, _) => "INFO",
                (false, true) => "PASS",
                (false, false) => "FAIL",
            };
            out.push_str(&format!(
                "{tag} {}/{} residual={:.3e} tol={:.0e}",
                self.suite, c.name, c.residual, c.tolerance
            ));
            if let Some(n) = &c.note {
                out.push_str(&format!(" ({n})"));
            }
            out.push('\n');
        }
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let counted = self.checks.iter().filter(|c| !c.informational).count();
        let passed = self.checks.iter().filter(|c| !c.informational && c.pass).count();
        out.push_str(&format!("{verdict} suite {} ({passed}/{counted} checks, seed {})\n", self.suite, self.seed));
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

type Job = Box<dyn Fn(u64) -> Vec<Check> + Send + Sync>;

fn job(name: &'static str, f: impl Fn(u64) -> Result<Vec<Check>> + Send + Sync + 'static) -> Job {
    Box::new(move |seed| f(seed).unwrap_or_else(|e| vec![Check::failed(name, &e)]))
}

pub fn run_suite(suite: Suite, seed: u64) -> SuiteReport {
    let jobs = match suite {
        Suite::Thm32 => thm32_jobs(),
        Suite::Feder => feder_jobs(),
        Suite::Composition => composition_jobs(),
        Suite::Product => product_jobs(),
        Suite::Cubelike => cubelike_jobs(),
        Suite::Godsil => godsil_jobs(),
        Suite::Paths => paths_jobs(),
    };
    let checks: Vec<Check> = jobs
        .par_iter()
        .enumerate()
        .map(|(i, j)| j(seed.wrapping_add(i as u64)))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    SuiteReport {
        suite: suite.name().into(),
        seed,
        pass: checks.iter().all(|c| c.informational || c.pass),
        checks,
    }
}

fn fam(spec: F<f64>) -> Result<Graph<f64>> {
    build(&spec)
}

pub fn random_times(seed: u64, count: usize, t_max: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(0.0..t_max)).collect()
}

/// A named graph with its transfer endpoints.
pub type Instance = (&'static str, Graph<f64>, usize, usize);

/// The five graphs of the equivalence suite with their PST endpoints.
pub fn equivalence_instances() -> Result<Vec<Instance>> {
    Ok(vec![
        ("Q3", fam(F::Hypercube(3))?, 0, 7),
        ("Q4", fam(F::Hypercube(4))?, 0, 15),
        ("P3^2", cartesian_power(&fam(F::Path(3))?, 2)?, 0, 8),
        ("cubelike{100,010,001,011}", cubelike(3, &[4, 2, 1, 3])?, 0, 4),
        ("godsil(2)", godsil_family(2, None)?.graph, 0, 31),
    ])
}

fn thm32_jobs() -> Vec<Job> {
    (0..5)
        .map(|i| {
            job("equivalence", move |seed| {
                let (name, g, a, b) = equivalence_instances()?.swap_remove(i);
                let pi = seeded_partition(&g, a, b)?;
                let times = random_times(seed, 100, 8.0);
                let r = verify_equivalence(&g, &pi, a, b, &times)?;
                let lemma = verify_lemma31(&g, &pi)?.max_residual();
                Ok(vec![
                    Check::below(format!("{name} amplitude equivalence"), r, 1e-10)
                        .with_note(format!("{} cells, 100 times in [0, 8]", pi.m())),
                    Check::below(format!("{name} partition-matrix identities"), lemma, 1e-10),
                ])
            })
        })
        .collect()
}

fn feder_jobs() -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for (label, spec, kmax) in [
        ("K2", F::Complete(2), 6),
        ("P3", F::Path(3), 4),
        ("K3", F::Complete(3), 3),
        ("P4", F::Path(4), 2),
    ] {
        for k in 1..=kmax {
            let spec = spec.clone();
            jobs.push(job("boson isomorphism", move |_| {
                let r = verify_feder_iso(&fam(spec.clone())?, k)?;
                Ok(vec![Check::below(format!("{label} k={k} boson isomorphism"), r.deviation, 1e-12)])
            }));
        }
    }
    jobs.push(job("christandl", |_| {
        let mut worst = 0.0f64;
        for n in 1..=8 {
            let f = feder_graph(&fam(F::Complete(2))?, n)?;
            worst = worst.max(f.graph.adjacency().max_abs_diff(fam(F::ChristandlPath(n))?.adjacency()));
        }
        Ok(vec![Check::below("K2 boson graphs are weighted paths (n<=8)", worst, 1e-15)])
    }));
    for (label, spec, k) in [("K2", F::Complete(2), 2), ("P3", F::Path(3), 2), ("K3", F::Complete(3), 3)] {
        jobs.push(job("symmetrizer", move |_| {
            let r = symmetrizer_check(&fam(spec.clone())?, k)?;
            Ok(vec![Check::below(format!("{label} k={k} symmetrizer"), r.max_residual(), 1e-12)])
        }));
    }
    jobs
}

fn composition_jobs() -> Vec<Job> {
    vec![
        job("K2 2x2", |_| {
            let k2 = fam(F::Complete(2))?;
            let pi1 = orbit_partition(&k2, 2)?.partition;
            let inner = quotient(&cartesian_power(&k2, 2)?, &pi1)?.quotient;
            let pi2 = orbit_partition(&inner, 2)?.partition;
            let r = compose_quotients(&k2, 2, &pi1, 2, &pi2)?;
            Ok(vec![Check::below("K2 orbit(2) then orbit(2)", r.deviation, 1e-10)
                .with_note(format!("{} composite cells on 16 vertices", r.composite.m()))])
        }),
        job("P3 2x1", |_| {
            let p3 = fam(F::Path(3))?;
            let pi1 = orbit_partition(&p3, 2)?.partition;
            let r = compose_quotients(&p3, 2, &pi1, 1, &Partition::singletons(6))?;
            Ok(vec![Check::below("P3 orbit(2) then singletons", r.deviation, 1e-10)])
        }),
        job("trivial", |_| {
            let k2 = fam(F::Complete(2))?;
            let one = Partition::singletons(2);
            let r = compose_quotients(&k2, 1, &one, 1, &one)?;
            Ok(vec![Check::below("K2 singletons twice", r.deviation, 1e-10)])
        }),
        job("P3 1x2", |_| {
            let p3 = fam(F::Path(3))?;
            let mirror = Partition::from_cells(3, &[vec![0, 2], vec![1]])?;
            let inner = quotient(&p3, &mirror)?.quotient;
            let pi2 = orbit_partition(&inner, 2)?.partition;
            let r = compose_quotients(&p3, 1, &mirror, 2, &pi2)?;
            Ok(vec![Check::below("P3 mirror then orbit(2)", r.deviation, 1e-10)])
        }),
    ]
}

/// `{0}, {1,2,3}` on four vertices.
fn star_cells() -> Result<Partition> {
    Partition::from_cells(4, &[vec![0], vec![1, 2, 3]])
}

fn product_jobs() -> Vec<Job> {
    vec![
        job("C4", |_| {
            let k2 = fam(F::Complete(2))?;
            let r = product_of_quotients(&[
                (k2.clone(), Partition::singletons(2)),
                (k2, Partition::singletons(2)),
            ])?;
            Ok(vec![Check::below("K2 x K2 singletons", r.deviation, 1e-10)])
        }),
        job("Q3 x K2", |_| {
            let q3 = fam(F::Hypercube(3))?;
            let pi = seeded_partition(&q3, 0, 7)?;
            let r = product_of_quotients(&[(q3, pi), (fam(F::Complete(2))?, Partition::singletons(2))])?;
            Ok(vec![Check::below("Q3 distance x K2 singletons", r.deviation, 1e-10)])
        }),
        job("K2 x K4", |_| {
            let r = product_of_quotients(&[
                (fam(F::Complete(2))?, Partition::singletons(2)),
                (fam(F::Complete(4))?, star_cells()?),
            ])?;
            Ok(vec![Check::below("K2 singletons x K4 star cells", r.deviation, 1e-10)])
        }),
        job("cubelike decomposition", |_| {
            let cl = cubelike::<f64>(3, &[4, 2, 1, 3])?;
            let seeded = seeded_partition(&cl, 0, 4)?;
            let direct = quotient(&cl, &seeded)?.quotient;
            let r = product_of_quotients(&[
                (fam(F::Complete(2))?, Partition::singletons(2)),
                (fam(F::Complete(4))?, star_cells()?),
            ])?;
            let looped = Graph::from_edges(2, &[(0, 1, 3f64.sqrt()), (1, 1, 2.0)])?;
            let factored = crate::graph::cartesian_product(&fam(F::Complete(2))?, &looped);
            let dev = direct.adjacency().max_abs_diff(factored.adjacency());
            Ok(vec![Check::below(
                "cubelike{100,010,001,011} quotient = K2 x looped edge",
                dev.max(r.deviation),
                1e-10,
            )])
        }),
        job("product pst", |_| {
            let k2 = fam(F::Complete(2))?;
            let looped = Graph::from_edges(2, &[(0, 1, 3f64.sqrt()), (1, 1, 2.0)])?;
            let a = product_pst(&[(k2.clone(), 0, 1), (looped, 0, 0)], FRAC_PI_2, 1e-8)?;
            let b = product_pst(&vec![(k2, 0, 1); 3], FRAC_PI_2, 1e-8)?;
            Ok(vec![
                Check::flag("K2 transfer x periodic looped edge at pi/2", a),
                Check::flag("K2^3 antipodal transfer at pi/2", b),
            ])
        }),
    ]
}

fn all_generating_sets(d: u32) -> Vec<CubelikeSpec> {
    let elements: Vec<u32> = (1..1u32 << d).collect();
    (1u64..1 << elements.len())
        .filter_map(|mask| {
            let gens: Vec<u32> = elements
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &g)| g)
                .collect();
            let spec = CubelikeSpec::new(d, gens).ok()?;
            (rank(&spec) == d as usize).then_some(spec)
        })
        .collect()
}

/// Every generating set of `Z_2^d` minus the origin (`d <= 4`).
pub fn generating_sets(d: u32) -> Vec<CubelikeSpec> {
    assert!(d <= 4, "exhaustive enumeration is for d <= 4");
    all_generating_sets(d)
}

fn cubelike_jobs() -> Vec<Job> {
    vec![
        job("d=3 example", |_| {
            let spec = CubelikeSpec::parse("100,010,001,011")?;
            let c = certify(&spec)?;
            Ok(vec![Check::below("{100,010,001,011} transfer 000 -> 100 at pi/2", 1.0 - c.fidelity, 1e-10)
                .with_note(format!("certified {}", c.certified))])
        }),
        job("d=3 nonzero sum", |_| {
            let sets: Vec<CubelikeSpec> = generating_sets(3).into_iter().filter(|s| omega(s) != 0).collect();
            let mut worst = 0.0f64;
            for s in &sets {
                let w = omega(s) as usize;
                worst = worst.max(1.0 - fidelity(&s.graph()?, 0, w, FRAC_PI_2)?);
            }
            Ok(vec![Check::below("d=3 every nonzero-sum set transfers at pi/2", worst, 1e-10)
                .with_note(format!("{} sets", sets.len()))])
        }),
        job("d=4 zero sum", |_| {
            let sets: Vec<CubelikeSpec> = generating_sets(4).into_iter().filter(|s| omega(s) == 0).collect();
            let mut agree = 0;
            let mut fired = 0;
            for s in &sets {
                let c = certify(s)?;
                agree += usize::from(c.certified);
                fired += usize::from(c.prediction.is_some());
            }
            Ok(vec![Check::flag("d=4 zero-sum criterion matches the walk at pi/4", agree == sets.len())
                .with_note(format!("{agree}/{} agree, {fired} predicted", sets.len()))])
        }),
        job("d=5 zero sum sample", |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut agree = 0;
            let mut fired = 0;
            let mut tried = 0;
            while tried < 200 {
                let k = rng.gen_range(5..32);
                let mut gens: Vec<u32> = rand::seq::index::sample(&mut rng, 31, k)
                    .into_iter()
                    .map(|i| i as u32 + 1)
                    .collect();
                let w = gens.iter().fold(0, |a, &g| a ^ g);
                if w != 0 {
                    match gens.iter().position(|&g| g == w) {
                        Some(i) => {
                            gens.remove(i);
                        }
                        None => gens.push(w),
                    }
                }
                let Ok(spec) = CubelikeSpec::new(5, gens) else { continue };
                if rank(&spec) != 5 {
                    continue;
                }
                tried += 1;
                let c = certify(&spec)?;
                agree += usize::from(c.certified);
                fired += usize::from(c.prediction.is_some());
            }
            Ok(vec![Check::flag("d=5 sampled zero-sum criterion matches the walk", agree == tried)
                .with_note(format!("{agree}/{tried} agree, {fired} predicted"))])
        }),
    ]
}

/// Earliest scan peak reaching `1 - tol`, with its symbolic name if any.
fn transfer_note(p: &Peak<f64>) -> String {
    match symbolic_match(p.t) {
        Some(s) => format!("t = {} = {s}", format_sig17(p.t)),
        None => format!("t = {}", format_sig17(p.t)),
    }
}

fn godsil_jobs() -> Vec<Job> {
    let alternative: Vec<usize> = symmetric_residues(15, 4..=7);
    let connections: Vec<(&'static str, Option<Vec<usize>>)> =
        vec![("default", None), ("alternative", Some(alternative))];
    let mut jobs: Vec<Job> = Vec::new();
    for (label, conn) in connections {
        let conn2 = conn.clone();
        jobs.push(job("godsil scan", move |_| {
            let gf = godsil_family::<f64>(2, conn.as_deref())?;
            let s = fidelity_scan(&gf.graph, gf.apex_a, gf.apex_b, 4.0, DEFAULT_STEPS)?;
            let best = s.best().map_or(0.0, |p| p.fidelity);
            let mut check = Check::below(format!("{label} connection apex transfer within t<=4"), 1.0 - best, 1e-8);
            if let Some(p) = s.first_transfer(1e-8) {
                check = check.with_note(format!(
                    "{}; pi/2 belongs to the swapped degree assignment",
                    transfer_note(&p)
                ));
            }
            Ok(vec![check])
        }));
        jobs.push(job("godsil swap", move |_| {
            let gf = godsil_family::<f64>(2, conn2.as_deref())?;
            let swap = exists_swap(&gf.graph, gf.apex_a, gf.apex_b)?;
            Ok(vec![Check::flag(format!("{label} connection has no apex-swapping automorphism"), !swap)])
        }));
    }
    jobs.push(job("layers", |_| {
        let a15 = circulant::<f64>(15, &symmetric_residues(15, 8..=10))?;
        let b15 = circulant::<f64>(15, &symmetric_residues(15, 1..=3))?;
        let census = triangle_census(&a15);
        Ok(vec![
            Check::flag("layer A: every vertex in exactly one triangle", census.iter().all(|&c| c == 1)),
            Check::flag("layers A and B are not isomorphic", !is_isomorphic(&a15, &b15)?),
        ])
    }));
    jobs
}

/// Loop and middle weights for the four-vertex family with parameter `k`.
pub fn p4_family(k: u32, swapped: bool) -> (f64, f64) {
    let k2 = f64::from(k * k);
    let r = (4.0 * k2 - 1.0).sqrt();
    let (a, b) = (2.0 * k2 / r, 2.0 * (k2 - 1.0) / r);
    if swapped {
        (b, a)
    } else {
        (a, b)
    }
}

/// First transfer of the four-vertex family over `[0, 10]` and the condition
/// holding there.
pub fn p4_family_transfer(k: u32, swapped: bool) -> Result<(Option<Peak<f64>>, f64, P4Condition)> {
    let (a, b) = p4_family(k, swapped);
    let g = fam(F::WeightedP4 { a, b })?;
    let s = fidelity_scan(&g, 0, 3, 10.0, DEFAULT_STEPS)?;
    let best = s.best().map_or(0.0, |p| p.fidelity);
    let first = s.first_transfer(1e-8);
    let cond = first.map_or(P4Condition::Neither, |p| pst_condition_p4(a, b, p.t));
    Ok((first, best, cond))
}

fn paths_jobs() -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    jobs.push(job("hypercubes", |_| {
        let mut worst = 0.0f64;
        for d in 1..=8u32 {
            worst = worst.max(1.0 - fidelity(&fam(F::Hypercube(d))?, 0, (1 << d) - 1, FRAC_PI_2)?);
        }
        Ok(vec![Check::below("Q1..Q8 antipodal transfer at pi/2", worst, 1e-10)])
    }));
    jobs.push(job("five-vertex family", |_| {
        let mut worst = 0.0f64;
        for k in 1..=5u32 {
            let b = f64::from(4 * k * k - 1).sqrt();
            worst = worst.max(1.0 - fidelity(&fam(F::WeightedP5 { a: SQRT_2, b })?, 0, 4, PI / SQRT_2)?);
        }
        let scaled = scale(&fam(F::ChristandlPath(4))?, 1.0 / SQRT_2)?;
        let p5 = fam(F::WeightedP5 { a: SQRT_2, b: 3f64.sqrt() })?;
        let dev = scaled.adjacency().max_abs_diff(p5.adjacency());
        Ok(vec![
            Check::below("P5(sqrt2, sqrt(4k^2-1)) transfer at pi/sqrt2, k=1..5", worst, 1e-10),
            Check::below("weighted path of Q4 scaled by 1/sqrt2 equals P5(sqrt2, sqrt3)", dev, 1e-12),
        ])
    }));
    jobs.push(job("diamond", |_| {
        let p3 = fam(F::Path(3))?;
        let pi = orbit_partition(&p3, 2)?.partition;
        let d6 = quotient(&cartesian_power(&p3, 2)?, &pi)?.quotient;
        let s = fidelity_scan(&d6, 0, d6.n() - 1, 6.0, DEFAULT_STEPS)?;
        let p = s.first_transfer(1e-8);
        let err = p.map_or(f64::INFINITY, |p| (p.t - PI / SQRT_2).abs());
        let mut c = Check::below("diamond antipodal transfer at pi/sqrt2", err, 1e-9);
        if let Some(p) = p {
            c = c.with_note(transfer_note(&p));
        }
        Ok(vec![c])
    }));
    jobs.push(job("unweighted P4", |_| {
        let f = fidelity(&fam(F::Path(4))?, 0, 3, FRAC_PI_2)?;
        Ok(vec![Check::flag("unweighted P4 has no end-to-end transfer at pi/2", f < 1.0 - 1e-8)
            .with_note(format!("fidelity {}", format_sig17(f)))])
    }));
    for k in 2..=4u32 {
        for swapped in [false, true] {
            jobs.push(job("four-vertex family", move |_| {
                let (first, best, cond) = p4_family_transfer(k, swapped)?;
                let order = if swapped { "swapped" } else { "as stated" };
                let mut c = Check::below(
                    format!("P4 family k={k} ({order}) transfer within t<=10"),
                    1.0 - best,
                    1e-8,
                );
                c = match first {
                    Some(p) => c.with_note(format!("{}, {cond:?}", transfer_note(&p))),
                    None => c.with_note(format!("best fidelity {}", format_sig17(best))),
                };
                if !swapped {
                    c = c.informational();
                }
                Ok(vec![c])
            }));
        }
    }
    jobs.push(job("godsil quotient time", |_| {
        let gf = godsil_family::<f64>(2, None)?;
        let f = fidelity(&gf.graph, gf.apex_a, gf.apex_b, FRAC_PI_4)?;
        Ok(vec![Check::below("godsil(2) apex transfer at pi/4", 1.0 - f, 1e-8)])
    }));
    jobs
}
