//! Command-line front end. Every command prints one JSON report (or a network
//! document / CSV table where that is the natural output) and maps failures to
//! exit codes through [`Error::exit_code`].

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::abstraction::{epsilon_omp, generate_and, generate_chain, Epsilon};
use crate::completeness::{check_complete, is_definite};
use crate::experiment::{load_networks, run_experiment, write_rows, ExperimentConfig};
use crate::model::{
    parse_kappa_network, parse_network, parse_prob_network, ActionSet, AnyNetwork, Evidence,
    NetworkStructure,
};
use crate::oracle::KappaOracle;
use crate::predict::{predict, OpCounter, PlausibleSetMap};
use crate::probinfer::{
    bounded_conditioning, exact_query_with_cap, poole_search, write_trace_csv, BoundedConfig,
    Budget, Query, SearchConfig, Strategy, TracePoint,
};
use crate::random::{random_dag, random_kappa_tables, random_polytree, random_prob_tables, seeded, Shape};
use crate::scomplete::{scomplete, ScompleteConfig, DEFAULT_CS_CAP};
use crate::worlds::DEFAULT_WORLD_CAP;
use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "kappanet", version, about = "Plausibility inference over kappa networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
    /// Record wall-clock times (otherwise reported as 0 so runs are reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct Inputs {
    /// Network document; `-` reads stdin.
    #[arg(long, default_value = "-")]
    net: String,
    /// JSON object of variable -> observed value.
    #[arg(long)]
    evidence: Option<String>,
    /// JSON object of variable -> forced value.
    #[arg(long)]
    actions: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Plausible sets in one sweep.
    Predict {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        out: Output,
    },
    /// Plausible sets made exact by staged clamping.
    Scomplete {
        #[command(flatten)]
        inputs: Inputs,
        /// Largest blocking-set instantiation space allowed.
        #[arg(long, default_value_t = DEFAULT_CS_CAP)]
        cs_cap: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Structural completeness certificate.
    Check {
        #[command(flatten)]
        inputs: Inputs,
        /// JSON list of believed variables; defaults to those Predict believes.
        #[arg(long)]
        believed: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Stratify a probability network at ε into a kappa network.
    Abstract {
        #[arg(long, default_value = "-")]
        net: String,
        #[arg(long)]
        eps: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Generate a network document.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Exact plausible sets and marginal ranks by enumeration.
    Oracle {
        #[command(flatten)]
        inputs: Inputs,
        /// Largest number of worlds to enumerate.
        #[arg(long, default_value_t = DEFAULT_WORLD_CAP)]
        cap: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Probability of a query on a probability network.
    Infer {
        #[arg(value_enum)]
        method: Method,
        #[arg(long, default_value = "-")]
        net: String,
        /// Target conjunction, `var=val[,var=val]`.
        #[arg(long)]
        query: String,
        #[arg(long)]
        evidence: Option<String>,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Instances (bounded) or expansions (search) before stopping.
        #[arg(long)]
        budget: Option<usize>,
        /// Wall-clock limit in milliseconds.
        #[arg(long)]
        time_limit_ms: Option<u64>,
        #[arg(long, default_value = "none")]
        strategy: Strategy,
        /// Comma-separated cutset overriding the greedy one (bounded only).
        #[arg(long)]
        cutset: Option<String>,
        /// Write the anytime trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_WORLD_CAP)]
        cap: u64,
        #[command(flatten)]
        out: Output,
    },
    /// ε sweep over a network suite; writes CSV.
    Experiment {
        #[arg(long)]
        config: String,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Subcommand)]
enum GenFamily {
    /// Binary chain x1 -> ... -> xn.
    Chain {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Roots x1..xn and their deterministic AND y.
    And {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// A random network drawn from a seeded stream.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = GenKind::Kappa)]
        kind: GenKind,
        #[arg(long, value_enum, default_value_t = GenShape::Dag)]
        shape: GenShape,
        /// Kappa rows with exactly one rank-0 value.
        #[arg(long)]
        definite: bool,
        #[arg(long, default_value_t = 10)]
        max_vars: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Bounded,
    Search,
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum GenKind {
    Kappa,
    Prob,
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum GenShape {
    Dag,
    Cyclic,
    Polytree,
}

/// Entry point for the binary: real argv and standard streams.
pub fn main() -> i32 {
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}

/// Run one invocation against the given streams; returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut ctx = Context {
        stdin,
        stdout,
        stderr,
        stdin_text: None,
        digests: Map::new(),
        echo,
    };
    match ctx.dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(ctx.stderr, "error: {e}");
            e.exit_code()
        }
    }
}

struct Context<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    stdin_text: Option<String>,
    digests: Map<String, Value>,
    echo: Vec<String>,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn io_error(path: impl Into<String>) -> impl FnOnce(std::io::Error) -> Error {
    let path = path.into();
    move |source| Error::Io { path, source }
}

fn json_error(what: &str) -> impl FnOnce(serde_json::Error) -> Error + '_ {
    move |source| Error::Json {
        what: what.to_string(),
        source,
    }
}

fn eps(value: f64) -> Result<Epsilon, Error> {
    Ok(Epsilon::new(value)?)
}

fn names(structure: &NetworkStructure, vars: impl IntoIterator<Item = usize>) -> Value {
    vars.into_iter().map(|v| Value::from(structure.name(v))).collect()
}

fn believed_json(structure: &NetworkStructure, plsets: &PlausibleSetMap) -> Value {
    let mut out = Map::new();
    for (v, value) in plsets.believed() {
        out.insert(structure.name(v).into(), structure.variable(v).values()[value].clone().into());
    }
    Value::Object(out)
}

fn ops_json(ops: &OpCounter) -> Value {
    json!({"lookups": ops.lookups, "edge_visits": ops.edge_visits, "total": ops.total()})
}

impl Context<'_> {
    /// Read a named input (`-` is stdin, read once) and record its digest.
    fn read(&mut self, role: &str, path: &str) -> Result<String, Error> {
        let text = if path == "-" {
            if self.stdin_text.is_none() {
                let mut buf = String::new();
                self.stdin.read_to_string(&mut buf).map_err(io_error("<stdin>"))?;
                self.stdin_text = Some(buf);
            }
            self.stdin_text.clone().unwrap_or_default()
        } else {
            std::fs::read_to_string(path).map_err(io_error(path))?
        };
        self.digests.insert(role.to_string(), Value::from(digest(text.as_bytes())));
        Ok(text)
    }

    fn assignment(&mut self, role: &str, path: &Option<String>) -> Result<Evidence, Error> {
        match path {
            None => Ok(Evidence::new()),
            Some(p) => {
                let text = self.read(role, p)?;
                serde_json::from_str(&text).map_err(json_error(role))
            }
        }
    }

    fn emit(&mut self, output: &Option<PathBuf>, text: &str) -> Result<(), Error> {
        match output {
            Some(path) => std::fs::write(path, text).map_err(io_error(path.display().to_string())),
            None => self.stdout.write_all(text.as_bytes()).map_err(io_error("<stdout>")),
        }
    }

    fn report(
        &mut self,
        command: &str,
        out: &Output,
        results: Value,
        counters: Value,
        started: Instant,
    ) -> Result<(), Error> {
        let wall = if out.timing { started.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
        let report = json!({
            "command": command,
            "args": self.echo,
            "inputs": Value::Object(std::mem::take(&mut self.digests)),
            "results": results,
            "counters": counters,
            "wall_time_ms": wall,
        });
        let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
        text.push('\n');
        self.emit(&out.output, &text)
    }

    fn dispatch(&mut self, command: Command) -> Result<(), Error> {
        let started = Instant::now();
        match command {
            Command::Predict { inputs, out } => {
                let net = parse_kappa_network(&self.read("net", &inputs.net)?)?;
                let evidence = self.assignment("evidence", &inputs.evidence)?;
                let actions: ActionSet = self.assignment("actions", &inputs.actions)?;
                let run = predict(&net, &evidence, &actions)?;
                let s = run.network.structure();
                let results = json!({
                    "plausible": run.plsets.to_json(s),
                    "believed": believed_json(s, &run.plsets),
                    "provenance": run.plsets.provenance(),
                });
                self.report("predict", &out, results, ops_json(&run.ops), started)
            }
            Command::Scomplete { inputs, cs_cap, out } => {
                let net = parse_kappa_network(&self.read("net", &inputs.net)?)?;
                let evidence = self.assignment("evidence", &inputs.evidence)?;
                let actions = self.assignment("actions", &inputs.actions)?;
                let outcome = scomplete(&net, &evidence, &actions, ScompleteConfig { cs_cap })?;
                let s = net.structure();
                let stages: Vec<Value> = outcome
                    .stages
                    .iter()
                    .map(|st| {
                        json!({
                            "stage": st.state.stage,
                            "cut_set": names(s, st.state.cut_set.iter().copied()),
                            "bset": names(s, st.state.bset.iter().copied()),
                            "instances": st.instances,
                            "skipped": st.skipped,
                        })
                    })
                    .collect();
                let results = json!({
                    "plausible": outcome.plsets.to_json(s),
                    "believed": believed_json(s, &outcome.plsets),
                    "provenance": outcome.plsets.provenance(),
                    "initial": outcome.initial.to_json(s),
                    "stages": stages,
                });
                self.report("scomplete", &out, results, ops_json(&outcome.ops), started)
            }
            Command::Check { inputs, believed, out } => {
                let net = parse_kappa_network(&self.read("net", &inputs.net)?)?;
                let s = net.structure().clone();
                let believed: Vec<usize> = match &believed {
                    Some(path) => {
                        let text = self.read("believed", path)?;
                        let list: Vec<String> = serde_json::from_str(&text).map_err(json_error("believed"))?;
                        list.iter()
                            .map(|name| {
                                s.index_of(name).ok_or_else(|| {
                                    Error::Model(crate::model::ModelError::UnknownVariable {
                                        name: name.clone(),
                                        location: "believed".into(),
                                    })
                                })
                            })
                            .collect::<Result<_, _>>()?
                    }
                    None => {
                        let evidence = self.assignment("evidence", &inputs.evidence)?;
                        let actions = self.assignment("actions", &inputs.actions)?;
                        let run = predict(&net, &evidence, &actions)?;
                        run.plsets.believed().into_iter().map(|(v, _)| v).collect()
                    }
                };
                let cert = check_complete(&s, &believed);
                let results = json!({
                    "verdict": cert.verdict,
                    "witness": cert.witness.as_ref().map(|w| names(&s, w.iter().copied())),
                    "believed": names(&s, believed.iter().copied()),
                    "definite": is_definite(&net),
                });
                let counters = json!({"edges_examined": cert.edges_examined, "edges": s.edge_count()});
                self.report("check", &out, results, counters, started)
            }
            Command::Abstract { net, eps: e, out } => {
                let pnet = parse_prob_network(&self.read("net", &net)?)?;
                let abs = epsilon_omp(&pnet, eps(e)?);
                for shift in &abs.shifts {
                    let _ = writeln!(
                        self.stderr,
                        "note: table `{}` row {} shifted down by {}",
                        pnet.structure().name(shift.child),
                        shift.row,
                        shift.shift
                    );
                }
                let mut text = abs.network.to_json();
                text.push('\n');
                self.emit(&out.output, &text)
            }
            Command::Gen { family } => self.generate(family),
            Command::Oracle { inputs, cap, out } => {
                let net = parse_kappa_network(&self.read("net", &inputs.net)?)?;
                let evidence = self.assignment("evidence", &inputs.evidence)?;
                let actions = self.assignment("actions", &inputs.actions)?;
                let net = net.apply_actions(&actions)?;
                let s = net.structure();
                let given = evidence.resolve(s, "evidence")?;
                let oracle = KappaOracle::new(&net).with_cap(cap);
                let marginals = oracle.marginals(&given)?;
                let mut plausible = Map::new();
                let mut ranks = Map::new();
                for (v, row) in marginals.iter().enumerate() {
                    let labels = s.variable(v).values();
                    let zero: Vec<Value> =
                        (0..row.len()).filter(|&i| row[i].is_zero()).map(|i| labels[i].clone().into()).collect();
                    plausible.insert(s.name(v).into(), Value::Array(zero));
                    let per: Map<String, Value> = row
                        .iter()
                        .enumerate()
                        .map(|(i, k)| (labels[i].clone(), serde_json::to_value(k).expect("kappa serializes")))
                        .collect();
                    ranks.insert(s.name(v).into(), Value::Object(per));
                }
                let results = json!({"plausible": plausible, "kappa": ranks});
                let counters = json!({"worlds": s.space_size(0..s.len())});
                self.report("oracle", &out, results, counters, started)
            }
            Command::Infer {
                method,
                net,
                query,
                evidence,
                eps: e,
                budget,
                time_limit_ms,
                strategy,
                cutset,
                trace,
                cap,
                out,
            } => {
                let pnet = parse_prob_network(&self.read("net", &net)?)?;
                let evidence = self.assignment("evidence", &evidence)?;
                let s = pnet.structure();
                let q = Query::parse(s, &query, &evidence)?;
                let budget = Budget {
                    max_steps: budget,
                    time_limit: time_limit_ms.map(Duration::from_millis),
                };
                let (results, counters, points): (Value, Value, Option<Vec<TracePoint>>) = match method {
                    Method::Exact => {
                        let p = exact_query_with_cap(&pnet, &q, cap)?;
                        (json!({"probability": p}), json!({"worlds": s.space_size(0..s.len())}), None)
                    }
                    Method::Bounded => {
                        let mut config = BoundedConfig::new(eps(e)?);
                        config.budget = budget;
                        config.world_cap = cap;
                        if let Some(list) = &cutset {
                            let resolved = list
                                .split(',')
                                .map(str::trim)
                                .filter(|n| !n.is_empty())
                                .map(|n| {
                                    s.index_of(n).ok_or_else(|| crate::model::ModelError::UnknownVariable {
                                        name: n.to_string(),
                                        location: "cutset".into(),
                                    })
                                })
                                .collect::<Result<Vec<_>, _>>()?;
                            config.cutset = Some(resolved);
                        }
                        let o = bounded_conditioning(&pnet, &q, &config)?;
                        let per_variable: Map<String, Value> = o
                            .loss
                            .per_variable
                            .iter()
                            .enumerate()
                            .map(|(v, &lm)| (s.name(v).to_string(), Value::from(lm)))
                            .collect();
                        let pruned: Vec<Value> = o
                            .pruned_values
                            .iter()
                            .map(|&(v, value)| json!({"variable": s.name(v), "value": s.variable(v).values()[value]}))
                            .collect();
                        let results = json!({
                            "lower": o.bounds.lower,
                            "upper": o.bounds.upper,
                            "residual": o.bounds.residual,
                            "lm": {"average": o.loss.average, "per_variable": per_variable},
                            "cutset": names(s, o.cutset.iter().copied()),
                            "pruned_values": pruned,
                            "exhausted": o.exhausted,
                            "warnings": o.warnings,
                        });
                        let counters = json!({
                            "instances_processed": o.bounds.processed,
                            "instances_surviving": o.instances.len(),
                            "instances_pruned": o.pruned_instances,
                            "predict": ops_json(&o.ops),
                        });
                        (results, counters, Some(o.trace))
                    }
                    Method::Search => {
                        let config = SearchConfig {
                            eps: eps(e)?,
                            budget,
                            strategy,
                        };
                        let o = poole_search(&pnet, &q, &config)?;
                        let results = json!({
                            "lower": o.bounds.lower,
                            "upper": o.bounds.upper,
                            "residual": o.bounds.residual,
                            "strategy": strategy,
                            "pruned_mass": o.pruned_mass,
                            "exhausted": o.exhausted,
                            "warnings": o.warnings,
                        });
                        let counters = json!({
                            "expansions": o.expansions,
                            "leaves": o.leaves,
                            "pruned_nodes": o.pruned_nodes,
                            "predict": ops_json(&o.ops),
                        });
                        (results, counters, Some(o.trace))
                    }
                };
                if let (Some(path), Some(points)) = (&trace, &points) {
                    let file = std::fs::File::create(path).map_err(io_error(path.display().to_string()))?;
                    write_trace_csv(points, std::io::BufWriter::new(file), out.timing)?;
                }
                let name = match method {
                    Method::Exact => "infer exact",
                    Method::Bounded => "infer bounded",
                    Method::Search => "infer search",
                };
                self.report(name, &out, results, counters, started)
            }
            Command::Experiment { config, seed, out } => {
                let text = self.read("config", &config)?;
                let parsed = ExperimentConfig::parse(&text)?;
                let base = if config == "-" {
                    PathBuf::from(".")
                } else {
                    Path::new(&config).parent().map(Path::to_path_buf).unwrap_or_default()
                };
                let nets = load_networks(&parsed, &base, seed.unwrap_or(parsed.seed))?;
                let rows = run_experiment(&parsed, &nets, out.timing)?;
                let mut buf = Vec::new();
                write_rows(&rows, &mut buf)?;
                self.emit(&out.output, &String::from_utf8(buf).expect("csv is utf-8"))
            }
        }
    }

    fn generate(&mut self, family: GenFamily) -> Result<(), Error> {
        let (network, output): (AnyNetwork, Option<PathBuf>) = match family {
            GenFamily::Chain { n, eps: e, output } => (generate_chain(n, eps(e)?)?.into(), output),
            GenFamily::And { n, eps: e, output } => (generate_and(n, eps(e)?)?.into(), output),
            GenFamily::Random {
                seed,
                kind,
                shape,
                definite,
                max_vars,
                output,
            } => {
                if max_vars < 3 {
                    return Err(Error::Usage("--max-vars must be at least 3".into()));
                }
                let mut rng = seeded(seed);
                let limits = Shape {
                    max_vars,
                    ..Shape::default()
                };
                let structure = match shape {
                    GenShape::Dag => random_dag(&mut rng, &limits, false),
                    GenShape::Cyclic => random_dag(&mut rng, &limits, true),
                    GenShape::Polytree => random_polytree(&mut rng, &limits),
                };
                let network = match kind {
                    GenKind::Kappa => random_kappa_tables(&mut rng, &structure, definite).into(),
                    GenKind::Prob => random_prob_tables(&mut rng, &structure).into(),
                };
                (network, output)
            }
        };
        let mut text = network.to_json();
        text.push('\n');
        self.emit(&output, &text)
    }
}

/// Parse a network document of either kind (exposed for examples).
pub fn load_network(path: &Path) -> Result<AnyNetwork, Error> {
    let text = std::fs::read_to_string(path).map_err(io_error(path.display().to_string()))?;
    Ok(parse_network(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], input: &str) -> (i32, String, String) {
        let mut stdin = input.as_bytes();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("kappanet").chain(args.iter().copied()),
            &mut stdin,
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, _, err) = run_str(&["predict", "--bogus"], "");
        assert_eq!(code, 1);
        assert!(err.contains("Usage"));
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_str(&["--help"], "");
        assert_eq!(code, 0);
        assert!(out.contains("predict"));
    }

    #[test]
    fn gen_then_predict_on_stdin() {
        let (code, chain, _) = run_str(&["gen", "chain", "--n", "3", "--eps", "0.1"], "");
        assert_eq!(code, 0);
        let (code, kappa, _) = run_str(&["abstract", "--eps", "0.1"], &chain);
        assert_eq!(code, 0);
        let (code, report, _) = run_str(&["predict"], &kappa);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&report).unwrap();
        assert_eq!(v["results"]["believed"]["x3"], "x3");
        assert_eq!(v["wall_time_ms"], 0.0);
    }

    #[test]
    fn wrong_kind_is_validation_error() {
        let (_, chain, _) = run_str(&["gen", "chain", "--n", "2", "--eps", "0.1"], "");
        let (code, _, err) = run_str(&["predict"], &chain);
        assert_eq!(code, 2);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn oracle_cap_is_exit_three() {
        let (_, chain, _) = run_str(&["gen", "chain", "--n", "4", "--eps", "0.1"], "");
        let (_, kappa, _) = run_str(&["abstract", "--eps", "0.1"], &chain);
        let (code, _, _) = run_str(&["oracle", "--cap", "8"], &kappa);
        assert_eq!(code, 3);
    }
}
