//! The `kgraphlab` command line.
//!
//! Exit codes: 0 success, 1 a check came out false, 2 invalid input.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::crossed::*;
use crate::error::{Error, Result};
use crate::homology::{
    build_complex, cohomology_uct, group_report, homology_uct, CoeffGroup, Cohomology, CubicalComplex,
};
use crate::kgraph::*;
use crate::suite;
use crate::twist::*;

#[derive(Parser, Debug)]
#[command(name = "kgraphlab", version, about = "Cubical (co)homology of k-graphs and their crossed products")]
pub struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a built-in skeleton.
    Gen {
        #[command(subcommand)]
        which: GenCmd,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Check a skeleton file.
    Validate { graph: String },
    /// List the r-cubes with their faces.
    Cubes {
        graph: String,
        #[arg(long)]
        dim: usize,
    },
    /// Cubical homology.
    Homology(GroupArgs),
    /// Cubical cohomology.
    Cohomology(GroupArgs),
    /// Build the crossed product by an automorphism.
    Crossed {
        graph: String,
        #[arg(long)]
        auto: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Assemble the long exact sequence of the crossed product and check exactness.
    Les {
        graph: String,
        #[arg(long)]
        auto: String,
        #[arg(long, default_value = "Z")]
        coeff: String,
        #[arg(long, value_enum, default_value_t = Convention::Both)]
        convention: Convention,
    },
    /// Circle-valued cochains.
    Cocycle {
        #[command(subcommand)]
        op: CocycleCmd,
    },
    /// Graphviz rendering of a skeleton.
    Dot { graph: String },
    /// Run the worked-example battery.
    PaperSuite {
        #[arg(long, default_value_t = 200)]
        cases: usize,
        /// Print a JSON report instead of the table.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum GenCmd {
    /// One vertex and n loops.
    Bouquet { n: usize },
    /// Single-vertex 2-graph from a permutation file `[[[i, j], [i', j']], ...]`.
    Theta { m: usize, n: usize, perm: String },
    /// The truncated tower with N vertices; `--auto-out` also writes the automorphism.
    Tower {
        n: usize,
        #[arg(long)]
        auto_out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct GroupArgs {
    #[arg(default_value = "-")]
    graph: String,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value = "Z")]
    coeff: String,
    /// Use the universal coefficient theorem instead of the direct computation.
    #[arg(long)]
    uct: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Convention {
    DeltaE,
    OneMinusBetaStar,
    Both,
}

#[derive(Args, Debug)]
struct CochainArgs {
    graph: String,
    cochain: String,
    /// Automorphism. Required for the product commands; with `check` and `witness` the cochain then lives on the product.
    #[arg(long)]
    auto: Option<String>,
    /// Number of free generators t1..tg allowed in phases.
    #[arg(long, default_value_t = 8)]
    free: usize,
    /// Write the resulting cochain here.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum CocycleCmd {
    /// Whether δφ = 0
    Check(CochainArgs),
    /// A cochain b with δb = φ, if one exists
    Witness(CochainArgs),
    /// Base r-cochain to product (r+1)-cochain supported on (λ,1)
    Inflate(CochainArgs),
    /// Product cochain to its values on (λ,0)
    Restrict(CochainArgs),
    /// Scalars of the twisted automorphism defined by a product 2-cocycle
    TwistData(CochainArgs),
    /// Extend a β-invariant base 2-cocycle class to the product
    Cor2Lift(CochainArgs),
    /// Square-by-square check of the cocycle relations for a product 2-cochain
    Cohrel(CochainArgs),
}

struct Ctx<'a> {
    stdin: &'a mut dyn Read,
    stdin_cache: Option<Vec<u8>>,
    inputs: Vec<Value>,
}

impl Ctx<'_> {
    fn read(&mut self, path: &str) -> Result<Vec<u8>> {
        let bytes = if path == "-" {
            if self.stdin_cache.is_none() {
                let mut buf = Vec::new();
                self.stdin.read_to_end(&mut buf).map_err(|e| Error::Input(format!("stdin: {e}")))?;
                self.stdin_cache = Some(buf);
            }
            self.stdin_cache.clone().unwrap_or_default()
        } else {
            std::fs::read(path).map_err(|e| Error::Input(format!("{path}: {e}")))?
        };
        self.inputs.push(json!({ "path": path, "sha256": hex::encode(Sha256::digest(&bytes)) }));
        Ok(bytes)
    }

    fn json<T: DeserializeOwned>(&mut self, path: &str) -> Result<T> {
        let bytes = self.read(path)?;
        let de = &mut serde_json::Deserializer::from_slice(&bytes);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let at = e.path().to_string();
            Error::Input(format!("{path}: at `{at}`: {}", e.into_inner()))
        })
    }

    fn graph(&mut self, path: &str) -> Result<KGraph> {
        let spec: SkeletonSpec = self.json(path)?;
        Ok(spec.build()?)
    }

    fn automorphism(&mut self, g: &KGraph, path: &str) -> Result<Automorphism> {
        let spec: AutomorphismSpec = self.json(path)?;
        Ok(spec.build(g)?)
    }
}

/// What a command produced: a JSON result (wrapped in a report), or raw text.
enum Output {
    Report { result: Value, verified: bool },
    Raw(String, bool),
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// Parses `argv`, runs the command and writes its output; returns the exit code.
pub fn run<I, T>(argv: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    configure_threads();
    let mut ctx = Ctx { stdin, stdin_cache: None, inputs: Vec::new() };
    match dispatch(&cli, &mut ctx) {
        Ok(Output::Raw(text, ok)) => {
            let _ = out.write_all(text.as_bytes());
            if ok {
                0
            } else {
                1
            }
        }
        Ok(Output::Report { result, verified }) => {
            let command: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
            let report = json!({
                "tool": "kgraphlab",
                "version": env!("CARGO_PKG_VERSION"),
                "command": command,
                "inputs": ctx.inputs,
                "timestamp": timestamp(),
                "verdict": if verified { "ok" } else { "false" },
                "result": result,
            });
            let _ = out.write_all(pretty(&report).as_bytes());
            if verified {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error [{}]: {e}", e.kind());
            match e {
                Error::NotACocycle | Error::ClassNotInvariant => 1,
                _ => 2,
            }
        }
    }
}

fn timestamp() -> u64 {
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn configure_threads() {
    if let Some(n) = std::env::var("KGRAPHLAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn report(result: Value, verified: bool) -> Result<Output> {
    Ok(Output::Report { result, verified })
}

fn dispatch(cli: &Cli, ctx: &mut Ctx) -> Result<Output> {
    match &cli.command {
        Command::Gen { which, output } => gen(ctx, which, output.as_ref()),
        Command::Validate { graph } => {
            let g = ctx.graph(graph)?;
            let cubes: Vec<usize> = (0..=g.rank()).map(|r| g.enumerate_cubes(r).len()).collect();
            report(
                json!({
                    "valid": true,
                    "rank": g.rank(),
                    "vertices": g.vertex_count(),
                    "edges": g.edge_count(),
                    "squares": g.squares().len(),
                    "cube_counts": cubes,
                }),
                true,
            )
        }
        Command::Cubes { graph, dim } => {
            let g = ctx.graph(graph)?;
            let cubes = g.enumerate_cubes(*dim);
            let mut list = Vec::new();
            for c in &cubes {
                let mut faces = Vec::new();
                for j in 1..=c.dim() {
                    faces.push([g.cube_id(&g.face(c, j, 0)?), g.cube_id(&g.face(c, j, 1)?)]);
                }
                list.push(json!({
                    "id": g.cube_id(c),
                    "colors": g.cube_colors(c),
                    "range": g.vertex_id(c.range),
                    "source": g.vertex_id(g.cube_source(c)),
                    "faces": faces,
                }));
            }
            report(json!({ "dim": dim, "count": cubes.len(), "cubes": list }), true)
        }
        Command::Homology(a) => groups(ctx, a, false),
        Command::Cohomology(a) => groups(ctx, a, true),
        Command::Crossed { graph, auto, output } => {
            let g = ctx.graph(graph)?;
            let beta = ctx.automorphism(&g, auto)?;
            let cp = crossed_product(&g, &beta)?;
            let text = pretty(&cp.to_spec());
            match output {
                None => Ok(Output::Raw(text, true)),
                Some(p) => {
                    write_file(p, &text)?;
                    let counts: Vec<usize> = (0..=cp.k() + 1).map(|r| cp.product().cube_count(r)).collect();
                    report(
                        json!({ "output": p.display().to_string(), "rank": cp.k() + 1, "cube_counts": counts }),
                        true,
                    )
                }
            }
        }
        Command::Les { graph, auto, coeff, convention } => {
            let g = ctx.graph(graph)?;
            let beta = ctx.automorphism(&g, auto)?;
            let coeff: CoeffGroup = coeff.parse()?;
            let cp = crossed_product(&g, &beta)?;
            let convs = match convention {
                Convention::DeltaE => vec![ConnectingConvention::DeltaE],
                Convention::OneMinusBetaStar => vec![ConnectingConvention::OneMinusBetaStar],
                Convention::Both => vec![ConnectingConvention::DeltaE, ConnectingConvention::OneMinusBetaStar],
            };
            let reports: Vec<LesReport> =
                convs.into_iter().map(|c| les_assemble(&cp, &coeff, c)).collect::<Result<_>>()?;
            let exact = reports.iter().all(|r| r.all_exact);
            report(json!({ "all_exact": exact, "sequences": reports }), exact)
        }
        Command::Cocycle { op } => cocycle(ctx, op),
        Command::Dot { graph } => Ok(Output::Raw(ctx.graph(graph)?.to_dot(), true)),
        Command::PaperSuite { cases, json } => {
            let outcomes = suite::run(cli.seed, *cases);
            let passed = outcomes.iter().all(|o| o.passed);
            if *json {
                report(json!({ "seed": cli.seed, "criteria": outcomes }), passed)
            } else {
                let mut t = suite::table(&outcomes);
                t.push_str(&format!(
                    "{} of {} criteria passed\n",
                    outcomes.iter().filter(|o| o.passed).count(),
                    outcomes.len()
                ));
                Ok(Output::Raw(t, passed))
            }
        }
    }
}

fn gen(ctx: &mut Ctx, which: &GenCmd, output: Option<&PathBuf>) -> Result<Output> {
    let g = match which {
        GenCmd::Bouquet { n } => build_bouquet(*n)?,
        GenCmd::Theta { m, n, perm } => {
            let theta: ThetaPerm = ctx.json(perm)?;
            build_theta_graph(*m, *n, &theta)?
        }
        GenCmd::Tower { n, auto_out } => {
            let (g, beta) = build_tower(*n)?;
            if let Some(p) = auto_out {
                write_file(p, &pretty(&AutomorphismSpec::from_automorphism(&g, &beta)))?;
            }
            g
        }
    };
    let text = pretty(&SkeletonSpec::from_graph(&g));
    match output {
        None => Ok(Output::Raw(text, true)),
        Some(p) => {
            write_file(p, &text)?;
            report(json!({ "output": p.display().to_string() }), true)
        }
    }
}

fn groups(ctx: &mut Ctx, a: &GroupArgs, co: bool) -> Result<Output> {
    let g = ctx.graph(&a.graph)?;
    let coeff: CoeffGroup = a.coeff.parse()?;
    let cx = build_complex(&g)?;
    let dims: Vec<usize> = match a.dim {
        Some(r) => vec![r],
        None => (0..=cx.top()).collect(),
    };
    let label = coeff.to_string();
    let mut list = Vec::new();
    for r in dims {
        let entry = if co {
            let h = if a.uct { cohomology_uct(&cx, r, &coeff)? } else { cx.cohomology(r, &coeff)? };
            match h {
                Cohomology::Group(h) => group_report(r, &h, &label),
                Cohomology::Circle(c) => {
                    let mut v = serde_json::to_value(&c).expect("serializable");
                    v["degree"] = r.into();
                    v["coeff"] = label.clone().into();
                    v
                }
            }
        } else {
            let h = if a.uct { homology_uct(&cx, r, &coeff)? } else { cx.homology_with(r, &coeff)? };
            group_report(r, &h, &label)
        };
        list.push(entry);
    }
    report(
        json!({ "kind": if co { "cohomology" } else { "homology" }, "method": if a.uct { "uct" } else { "direct" }, "groups": list }),
        true,
    )
}

fn phase_cochain(ctx: &mut Ctx, cx: &CubicalComplex, path: &str, free: usize) -> Result<PhaseCochain> {
    let v: Value = ctx.json(path)?;
    PhaseCochain::from_json(cx, &v, &PhaseGroup::new(free))
}

fn cocycle(ctx: &mut Ctx, op: &CocycleCmd) -> Result<Output> {
    let (a, needs_auto) = match op {
        CocycleCmd::Check(a) | CocycleCmd::Witness(a) => (a, false),
        CocycleCmd::Inflate(a)
        | CocycleCmd::Restrict(a)
        | CocycleCmd::TwistData(a)
        | CocycleCmd::Cor2Lift(a)
        | CocycleCmd::Cohrel(a) => (a, true),
    };
    let g = ctx.graph(&a.graph)?;
    let cp = match &a.auto {
        Some(p) => {
            let beta = ctx.automorphism(&g, p)?;
            Some(crossed_product(&g, &beta)?)
        }
        None if needs_auto => return Err(Error::Input("this operation needs --auto".into())),
        None => None,
    };
    let base;
    let ambient: &CubicalComplex = match &cp {
        Some(cp) => cp.product(),
        None => {
            base = build_complex(&g)?;
            &base
        }
    };
    let emit = |c: &PhaseCochain, cx: &CubicalComplex| -> Result<Value> {
        let v = c.to_json(cx);
        if let Some(p) = &a.output {
            write_file(p, &pretty(&v))?;
        }
        Ok(v)
    };
    match op {
        CocycleCmd::Check(_) => {
            let f = phase_cochain(ctx, ambient, &a.cochain, a.free)?;
            let d = delta(ambient, &f);
            let ok = d.is_zero();
            report(json!({ "is_cocycle": ok, "delta": d.to_json(ambient) }), ok)
        }
        CocycleCmd::Witness(_) => {
            let f = phase_cochain(ctx, ambient, &a.cochain, a.free)?;
            match coboundary_witness(ambient, &f) {
                Some(b) => report(json!({ "is_coboundary": true, "witness": emit(&b, ambient)? }), true),
                None => report(json!({ "is_coboundary": false }), false),
            }
        }
        CocycleCmd::Inflate(_) => {
            let cp = cp.as_ref().expect("checked above");
            let c = phase_cochain(ctx, cp.base(), &a.cochain, a.free)?;
            let phi = inflate(cp, &c)?;
            report(json!({ "cochain": emit(&phi, cp.product())? }), true)
        }
        CocycleCmd::Restrict(_) => {
            let cp = cp.as_ref().expect("checked above");
            let phi = phase_cochain(ctx, cp.product(), &a.cochain, a.free)?;
            let psi = restrict(cp, &phi)?;
            report(json!({ "cochain": emit(&psi, cp.base())? }), true)
        }
        CocycleCmd::TwistData(_) => {
            let cp = cp.as_ref().expect("checked above");
            let phi = phase_cochain(ctx, cp.product(), &a.cochain, a.free)?;
            let td = twist_data(cp, &phi)?;
            report(serde_json::to_value(&td).expect("serializable"), true)
        }
        CocycleCmd::Cor2Lift(_) => {
            let cp = cp.as_ref().expect("checked above");
            let psi = phase_cochain(ctx, cp.base(), &a.cochain, a.free)?;
            let (phi, b) = cor2_lift(cp, &psi)?;
            report(json!({ "phi": emit(&phi, cp.product())?, "b": b.to_json(cp.base()) }), true)
        }
        CocycleCmd::Cohrel(_) => {
            let cp = cp.as_ref().expect("checked above");
            let phi = phase_cochain(ctx, cp.product(), &a.cochain, a.free)?;
            let rep = verify_cohrel(cp, &phi)?;
            let ok = rep.holds && rep.tg2_holds;
            report(serde_json::to_value(&rep).expect("serializable"), ok)
        }
    }
}
