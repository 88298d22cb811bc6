//! `pstlab` command-line front end.
//!
//! Exit codes: 0 success or property true, 1 property false, 2 input error,
//! 3 numeric or size-guard error.

mod expr;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pstlab::cubelike::{certify, CubelikeSpec};
use pstlab::feder::{compose_quotients, feder_graph, orbit_partition};
use pstlab::graph;
use pstlab::GraphFamilySpec as Family;
use pstlab::io;
use pstlab::partition::{quotient, refine, seeded_partition};
use pstlab::suites::{run_suite, Suite, DEFAULT_SEED};
use pstlab::symmetry::{automorphisms, find_swap, is_isomorphic, triangle_census};
use pstlab::walk::{fidelity_scan, symbolic_match, verify_pst, DEFAULT_STEPS};
use pstlab::{Error, Graph, Partition};

#[derive(Parser)]
#[command(name = "pstlab", version, about = "Perfect state transfer workbench for continuous-time quantum walks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overwrite existing output files.
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named graph family.
    Build {
        /// complete, path, cycle, hypercube, circulant, cubelike, weighted-p4,
        /// weighted-p5, christandl, godsil
        #[arg(long)]
        family: String,
        /// Family parameter as key=value; repeatable.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Cartesian product of two graphs.
    Product {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Join of two graphs.
    Join {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Complement of a simple graph.
    Complement {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Multiply every weight by a positive factor.
    Scale {
        #[arg(long)]
        graph: PathBuf,
        /// Expression such as `1/sqrt(2)`.
        #[arg(long)]
        factor: String,
        #[command(flatten)]
        output: Output,
    },
    /// Quotient by an equitable partition.
    Quotient {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        /// Also write the cell of every quotient vertex.
        #[arg(long)]
        cell_map: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Coarsest equitable refinement of a partition.
    Refine {
        #[arg(long)]
        graph: PathBuf,
        /// Starting partition; the single cell when omitted.
        #[arg(long, conflicts_with = "seed")]
        partition: Option<PathBuf>,
        /// Start from {a}, {b}, rest.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        seed: Option<Vec<usize>>,
        #[command(flatten)]
        output: Output,
    },
    /// Transfer fidelity at one time.
    Fidelity {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long)]
        time: String,
    },
    /// Fidelity on a time grid with refined peaks.
    Scan {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long)]
        t_max: String,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Write the grid as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the refined peaks as JSON.
        #[arg(long)]
        peaks: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Check transfer between two vertices at a given time.
    PstVerify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long)]
        time: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// k-boson graph.
    Feder {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        /// Write the occupation vector of every vertex.
        #[arg(long)]
        states: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Quotient of the k-th Cartesian power by coordinate permutations.
    OrbitQuotient {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        cell_map: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Compare iterated quotients with a single composite quotient.
    Compose {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        m1: usize,
        /// Partition file, `orbit` or `singletons`.
        #[arg(long)]
        pi1: String,
        #[arg(long)]
        m2: usize,
        #[arg(long)]
        pi2: String,
    },
    /// Predict and certify transfer on a cube-like graph.
    Cubelike {
        /// Comma-separated bit strings, e.g. 100,010,001,011.
        #[arg(long)]
        generators: String,
        #[command(flatten)]
        output: Output,
    },
    /// Automorphism group order, or a swap automorphism.
    Aut {
        #[arg(long)]
        graph: PathBuf,
        /// Print up to this many automorphisms.
        #[arg(long, default_value_t = 0)]
        limit: usize,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        swap: Option<Vec<usize>>,
    },
    /// Weight-preserving isomorphism test.
    Iso { left: PathBuf, right: PathBuf },
    /// Triangles through each vertex.
    Triangles {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Run a named verification suite.
    Verify {
        /// thm32, feder, composition, product, cubelike, godsil or paths.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write the machine-readable report.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Numeric(_) | Error::Guard(_) => Failure::Numeric(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<expr::ExprError> for Failure {
    fn from(e: expr::ExprError) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(io::graph_from_json(&read(path)?)?)
}

fn load_partition(path: &Path) -> Result<Partition, Failure> {
    Ok(io::partition_from_json(&read(path)?)?)
}

fn write_file(path: &Path, text: &str, force: bool) -> Result<(), Failure> {
    if path.exists() && !force {
        return Err(Failure::Input(format!(
            "{} exists; pass --force to overwrite",
            path.display()
        )));
    }
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(output: &Output, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(p) => write_file(p, text, output.force),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn time(s: &str) -> Result<f64, Failure> {
    Ok(expr::eval(s)?)
}

struct Params(BTreeMap<String, String>);

impl Params {
    fn parse(raw: &[String]) -> Result<Self, Failure> {
        let mut map = BTreeMap::new();
        for p in raw {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Failure::Input(format!("parameter {p:?} is not key=value")))?;
            if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(Failure::Input(format!("parameter {k:?} given twice")));
            }
        }
        Ok(Params(map))
    }

    fn take(&mut self, key: &str) -> Result<String, Failure> {
        self.0
            .remove(key)
            .ok_or_else(|| Failure::Input(format!("missing parameter {key}")))
    }

    fn int(&mut self, key: &str) -> Result<usize, Failure> {
        let v = self.take(key)?;
        v.parse()
            .map_err(|_| Failure::Input(format!("parameter {key} must be a nonnegative integer, got {v:?}")))
    }

    fn real(&mut self, key: &str) -> Result<f64, Failure> {
        Ok(expr::eval(&self.take(key)?)?)
    }

    fn ints(&mut self, key: &str) -> Result<Option<Vec<usize>>, Failure> {
        let Some(v) = self.0.remove(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(|x| {
                x.trim()
                    .parse()
                    .map_err(|_| Failure::Input(format!("parameter {key}: {x:?} is not an integer")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    fn finish(self) -> Result<(), Failure> {
        match self.0.keys().next() {
            Some(k) => Err(Failure::Input(format!("unknown parameter {k}"))),
            None => Ok(()),
        }
    }
}

fn small(v: usize, what: &str) -> Result<u32, Failure> {
    u32::try_from(v).map_err(|_| Failure::Input(format!("{what} too large")))
}

fn family(name: &str, raw: &[String]) -> Result<Family, Failure> {
    let mut p = Params::parse(raw)?;
    let spec = match name {
        "complete" => Family::Complete(p.int("n")?),
        "path" => Family::Path(p.int("n")?),
        "cycle" => Family::Cycle(p.int("n")?),
        "hypercube" => Family::Hypercube(small(p.int("d")?, "d")?),
        "circulant" => Family::Circulant {
            n: p.int("n")?,
            connection: p
                .ints("connection")?
                .ok_or_else(|| Failure::Input("missing parameter connection".into()))?,
        },
        "cubelike" => {
            let spec = CubelikeSpec::parse(&p.take("generators")?)?;
            Family::Cubelike {
                d: spec.d(),
                generators: spec.generators().to_vec(),
            }
        }
        "weighted-p4" => Family::WeightedP4 {
            a: p.real("a")?,
            b: p.real("b")?,
        },
        "weighted-p5" => Family::WeightedP5 {
            a: p.real("a")?,
            b: p.real("b")?,
        },
        "christandl" => Family::ChristandlPath(p.int("n")?),
        "godsil" => Family::GodsilFamily {
            m: small(p.int("m")?, "m")?,
            connection: p.ints("connection")?,
        },
        other => return Err(Failure::Input(format!("unknown family {other:?}"))),
    };
    p.finish()?;
    Ok(spec)
}

fn named_partition(g: &Graph, m: usize, spec: &str) -> Result<Partition, Failure> {
    match spec {
        "orbit" => Ok(orbit_partition(g, m)?.partition),
        "singletons" => {
            let n = g
                .n()
                .checked_pow(small(m, "power")?)
                .ok_or_else(|| Failure::Numeric("power too large".into()))?;
            Ok(Partition::singletons(n))
        }
        path => load_partition(Path::new(path)),
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Build {
            family: name,
            params,
            output,
        } => {
            let g = graph::build(&family(&name, &params)?)?;
            emit(&output, &io::graph_to_json(&g))?;
            Ok(true)
        }
        Command::Product { left, right, output } => {
            let g = graph::cartesian_product(&load_graph(&left)?, &load_graph(&right)?);
            emit(&output, &io::graph_to_json(&g))?;
            Ok(true)
        }
        Command::Join { left, right, output } => {
            let g = graph::join(&load_graph(&left)?, &load_graph(&right)?);
            emit(&output, &io::graph_to_json(&g))?;
            Ok(true)
        }
        Command::Complement { graph: path, output } => {
            let g = load_graph(&path)?;
            if !g.is_simple_unweighted() {
                return Err(Failure::Input("complement needs an unweighted, loop-free graph".into()));
            }
            emit(&output, &io::graph_to_json(&graph::complement(&g)))?;
            Ok(true)
        }
        Command::Scale {
            graph: path,
            factor,
            output,
        } => {
            let g = graph::scale(&load_graph(&path)?, expr::eval(&factor)?)?;
            emit(&output, &io::graph_to_json(&g))?;
            Ok(true)
        }
        Command::Quotient {
            graph: path,
            partition,
            cell_map,
            output,
        } => {
            let pi = load_partition(&partition)?;
            let q = quotient(&load_graph(&path)?, &pi)?;
            if let Some(map) = cell_map {
                write_file(&map, &io::partition_to_json(&pi), output.force)?;
            }
            emit(&output, &io::graph_to_json(&q.quotient))?;
            Ok(true)
        }
        Command::Refine {
            graph: path,
            partition,
            seed,
            output,
        } => {
            let g = load_graph(&path)?;
            let pi = match (partition, seed) {
                (Some(p), _) => refine(&g, &load_partition(&p)?)?,
                (None, Some(ab)) => seeded_partition(&g, ab[0], ab[1])?,
                (None, None) => refine(&g, &Partition::single_cell(g.n()))?,
            };
            emit(&output, &io::partition_to_json(&pi))?;
            Ok(true)
        }
        Command::Fidelity {
            graph: path,
            from,
            to,
            time: t,
        } => {
            let f = pstlab::spectral::fidelity(&load_graph(&path)?, from, to, time(&t)?)?;
            println!("{}", io::format_sig17(f));
            Ok(true)
        }
        Command::Scan {
            graph: path,
            from,
            to,
            t_max,
            steps,
            tol,
            csv,
            peaks,
            force,
        } => {
            let s = fidelity_scan(&load_graph(&path)?, from, to, time(&t_max)?, steps)?;
            if let Some(p) = csv {
                write_file(&p, &io::scan_csv(&s), force)?;
            }
            if let Some(p) = peaks {
                write_file(&p, &io::peaks_json(&s), force)?;
            }
            match s.first_transfer(tol) {
                Some(p) => {
                    let name = symbolic_match(p.t).map(|n| format!(" ({n})")).unwrap_or_default();
                    println!(
                        "transfer at t = {}{name}, fidelity {}",
                        io::format_sig17(p.t),
                        io::format_sig17(p.fidelity)
                    );
                    Ok(true)
                }
                None => {
                    let best = s.best().map_or(0.0, |p| p.fidelity);
                    println!("no transfer found; best fidelity {}", io::format_sig17(best));
                    Ok(false)
                }
            }
        }
        Command::PstVerify {
            graph: path,
            from,
            to,
            time: t,
            tol,
        } => {
            let ok = verify_pst(&load_graph(&path)?, from, to, time(&t)?, tol)?;
            println!("{ok}");
            Ok(ok)
        }
        Command::Feder {
            graph: path,
            k,
            states,
            output,
        } => {
            let fed = feder_graph(&load_graph(&path)?, k)?;
            if let Some(p) = states {
                write_file(&p, &io::feder_states_json(&fed), output.force)?;
            }
            emit(&output, &io::graph_to_json(&fed.graph))?;
            Ok(true)
        }
        Command::OrbitQuotient {
            graph: path,
            k,
            cell_map,
            output,
        } => {
            let g = load_graph(&path)?;
            let orbits = orbit_partition(&g, k)?;
            let q = quotient(&graph::cartesian_power(&g, k)?, &orbits.partition)?;
            if let Some(map) = cell_map {
                write_file(&map, &io::partition_to_json(&orbits.partition), output.force)?;
            }
            emit(&output, &io::graph_to_json(&q.quotient))?;
            Ok(true)
        }
        Command::Compose {
            graph: path,
            m1,
            pi1,
            m2,
            pi2,
        } => {
            let g = load_graph(&path)?;
            let p1 = named_partition(&g, m1, &pi1)?;
            let inner = quotient(&graph::cartesian_power(&g, m1)?, &p1)?.quotient;
            let p2 = named_partition(&inner, m2, &pi2)?;
            let r = compose_quotients(&g, m1, &p1, m2, &p2)?;
            println!(
                "{} deviation={:.3e} composite_cells={}",
                r.holds,
                r.deviation,
                r.composite.m()
            );
            Ok(r.holds)
        }
        Command::Cubelike { generators, output } => {
            let spec = CubelikeSpec::parse(&generators)?;
            let c = certify(&spec)?;
            emit(&output, &io::certification_json(&c, spec.d()))?;
            Ok(c.certified)
        }
        Command::Aut {
            graph: path,
            limit,
            swap,
        } => {
            let g = load_graph(&path)?;
            if let Some(ab) = swap {
                return match find_swap(&g, ab[0], ab[1])? {
                    Some(w) => {
                        println!("true");
                        println!("{:?}", w.image());
                        Ok(true)
                    }
                    None => {
                        println!("false");
                        Ok(false)
                    }
                };
            }
            let r = automorphisms(&g, limit)?;
            println!("order {}", r.order);
            for p in &r.permutations {
                println!("{:?}", p.image());
            }
            Ok(true)
        }
        Command::Iso { left, right } => {
            let ok = is_isomorphic(&load_graph(&left)?, &load_graph(&right)?)?;
            println!("{ok}");
            Ok(ok)
        }
        Command::Triangles { graph: path } => {
            let census = triangle_census(&load_graph(&path)?);
            for (v, c) in census.iter().enumerate() {
                println!("{v} {c}");
            }
            println!("total {}", census.iter().sum::<usize>() / 3);
            Ok(true)
        }
        Command::Verify {
            suite,
            seed,
            json,
            force,
        } => {
            let suite: Suite = suite.parse()?;
            let report = run_suite(suite, seed);
            if let Some(p) = json {
                write_file(&p, &report.to_json(), force)?;
            }
            print!("{}", report.to_text());
            Ok(report.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
