use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use addcomb::connectivity::{
    check_connected, check_strongly_connected, extract_almost_basis, extract_connected_subset, konyagin_containment,
    partition_min_sigma, strong_partition, ConnectivityParams, Mode, PartitionOptions, PartitionStart,
};
use addcomb::dissociation::{
    check_rudin, maximal_dissociated_subset_with, span_cover, span_enumerate_with, Caps, DissociatedSet,
};
use addcomb::energy::{check_holder, check_tk_vs_t2, doubling_energy_bound, energy_range_checks};
use addcomb::{energy, zeta, Error, GroupSet, IntFn, RationalConstant, Result};
use addcomb_harness::generate::{generate, GeneratorSpec};
use addcomb_harness::pipeline::{run_main_pipeline, PipelineOptions};
use addcomb_harness::report::{recheck, to_value, Report};
use addcomb_harness::suites::{verify_suite, Suite};
use addcomb_harness::exit_code;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

/// Exact additive-energy computations, connectivity checks and structure
/// extraction over finite abelian groups and the integers.
#[derive(Parser)]
#[command(name = "addcomb", version)]
struct Cli {
    /// Seed for every randomized choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write JSON here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Heuristic,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Heuristic => Mode::Heuristic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StartArg {
    Singletons,
    AllInOne,
}

#[derive(Args)]
struct ConnArgs {
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long = "C", default_value = "1")]
    c: RationalConstant,
    #[arg(long, default_value = "0")]
    beta1: RationalConstant,
    #[arg(long, default_value = "1")]
    beta2: RationalConstant,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Largest |A| searched exhaustively.
    #[arg(long, default_value_t = 20)]
    exhaustive_cap: usize,
    /// Random subsets per size in heuristic mode.
    #[arg(long, default_value_t = 64)]
    samples: usize,
}

impl ConnArgs {
    fn params(&self, seed: u64) -> ConnectivityParams {
        ConnectivityParams {
            k: self.k,
            c: self.c.clone(),
            beta1: self.beta1.clone(),
            beta2: self.beta2.clone(),
            mode: self.mode.into(),
            seed,
            exhaustive_cap: self.exhaustive_cap,
            samples: self.samples,
            ..Default::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a set from a generator spec file.
    Gen { spec: PathBuf },
    /// T_k(A) and zeta_k(A).
    Energy {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
    /// A + B (or A - B); B defaults to A.
    Sumset {
        input: PathBuf,
        other: Option<PathBuf>,
        #[arg(long)]
        difference: bool,
    },
    /// Greedy maximal dissociated subset.
    Dissociate {
        input: PathBuf,
        /// Scan in sorted order even when --seed is given.
        #[arg(long)]
        sorted: bool,
    },
    /// Span of a set, optionally intersected with a target.
    Span {
        lambda: PathBuf,
        #[arg(long)]
        target: Option<PathBuf>,
        /// Include the span's elements in the output.
        #[arg(long)]
        list: bool,
    },
    #[command(subcommand)]
    Check(CheckCommand),
    /// Extract a (beta1, beta2)-connected subset.
    Extract {
        input: PathBuf,
        #[command(flatten)]
        conn: ConnArgs,
        /// Accept any C <= 1 instead of C <= 1/32.
        #[arg(long)]
        relaxed: bool,
    },
    /// Dissociated almost-basis of a connected set.
    AlmostBasis {
        input: PathBuf,
        #[command(flatten)]
        conn: ConnArgs,
        /// Use this slice length instead of the derived one.
        #[arg(long)]
        l: Option<u64>,
    },
    /// Local optimum of the partition functional.
    Partition {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long)]
        epsilon1: RationalConstant,
        #[arg(long, value_enum, default_value = "singletons")]
        start: StartArg,
        #[arg(long, default_value_t = 16)]
        cut_cap: usize,
    },
    /// Partition into strongly connected pieces plus an exceptional set.
    StrongPartition {
        input: PathBuf,
        #[arg(long)]
        epsilon: RationalConstant,
        #[arg(long)]
        beta: RationalConstant,
        #[arg(long, default_value_t = 16)]
        cut_cap: usize,
    },
    /// Containment of A in a translate of the group generated by popular differences.
    Konyagin {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long = "C")]
        c: RationalConstant,
        #[arg(long, default_value_t = 14)]
        exhaustive_cap: usize,
    },
    /// Extraction followed by the almost-basis stage, with the hypothesis ledger.
    Pipeline {
        input: PathBuf,
        #[arg(long)]
        epsilon: RationalConstant,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long, default_value_t = 8)]
        max_order: u32,
    },
    /// Run verification suites (all when none are named).
    Verify { suites: Vec<String> },
    /// Re-derive every inequality embedded in a report.
    Recheck { report: PathBuf },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// (beta1, beta2)-connectedness of degree k.
    Connected {
        input: PathBuf,
        #[command(flatten)]
        conn: ConnArgs,
    },
    /// Strong connectedness of degree k.
    Strong {
        input: PathBuf,
        #[command(flatten)]
        conn: ConnArgs,
    },
    /// Convolution Hoelder inequality; input is {"fs": [...], "gs": [...]}.
    Holder { input: PathBuf },
    /// Rudin's bound for a dissociated set.
    Rudin {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
    /// T_k(A) |A|^(k-2) >= T_2(A)^(k-1).
    Tk2 {
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: u32,
    },
    /// |A|^4 <= T_2(A) |A+A|.
    Doubling { input: PathBuf },
}

fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Error::Usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value> {
    serde_json::from_str(&read_text(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_set(path: &Path) -> Result<GroupSet> {
    GroupSet::from_json(&read_json(path)?)
}

struct Outcome {
    body: Value,
    passed: bool,
}

impl From<Report> for Outcome {
    fn from(r: Report) -> Self {
        Outcome { passed: r.passed, body: to_value(&r) }
    }
}

fn report(command: &str, a: &GroupSet, params: Value) -> Report {
    let mut r = Report::new(command, Some(a));
    r.params = params;
    r
}

fn run(cli: &Cli) -> Result<Outcome> {
    let seed = cli.seed.unwrap_or(0);
    Ok(match &cli.command {
        Command::Gen { spec } => {
            let mut g: GeneratorSpec =
                serde_json::from_value(read_json(spec)?).map_err(|e| Error::Parse(format!("generator spec: {e}")))?;
            if let Some(s) = cli.seed {
                g.seed = s;
            }
            Outcome { body: generate(&g)?.to_json(), passed: true }
        }
        Command::Energy { input, k } => {
            let a = read_set(input)?;
            let t = energy(&a, *k)?;
            let mut r = report("energy", &a, json!({ "k": k }));
            let checks = energy_range_checks(&a, *k, &t.value);
            r.passed = checks.iter().all(|q| q.holds);
            r.verdicts = json!({ "energy": t, "zeta": zeta(&a, *k)?, "range": checks });
            r.into()
        }
        Command::Sumset { input, other, difference } => {
            let a = read_set(input)?;
            let b = match other {
                Some(p) => read_set(p)?,
                None => a.clone(),
            };
            let s = if *difference { a.difference_set(&b)? } else { a.sumset(&b)? };
            Outcome { body: s.to_json(), passed: true }
        }
        Command::Dissociate { input, sorted } => {
            let a = read_set(input)?;
            let shuffle = if *sorted { None } else { cli.seed };
            let found = maximal_dissociated_subset_with(&a, shuffle, Caps::default())?;
            let cover = span_cover(found.lambda.base(), &a, Caps::default())?;
            let covered = cover.covered.unwrap_or(0);
            Outcome {
                passed: covered == a.len(),
                body: json!({
                    "input_digest": addcomb_harness::report::input_digest(&a),
                    "lambda": found.lambda.base().to_json(),
                    "span_size": cover.size,
                    "covered_count": covered,
                    "insertion_order": found.insertion_order.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
                    "trace": to_value(&found.trace),
                }),
            }
        }
        Command::Span { lambda, target, list } => {
            let l = read_set(lambda)?;
            let res = match target {
                Some(t) => span_cover(&l, &read_set(t)?, Caps::default())?,
                None => span_enumerate_with(&l, None, Caps::default())?,
            };
            let mut body = json!({
                "lambda": l.to_json(),
                "span_size": res.size,
                "covered_count": res.covered,
            });
            if *list {
                body["elements"] = res.elements.as_ref().map_or(Value::Null, GroupSet::to_json);
            }
            Outcome { body, passed: true }
        }
        Command::Check(c) => run_check(c, seed)?,
        Command::Extract { input, conn, relaxed } => {
            let a = read_set(input)?;
            let params = ConnectivityParams { relaxed: *relaxed, ..conn.params(seed) };
            let x = extract_connected_subset(&a, &params)?;
            let mut r = report("extract", &a, to_value(&params));
            r.certified = x.certified;
            r.passed = x.ok();
            r.verdicts = json!({
                "step_bound": x.step_bound,
                "zeta_initial": x.zeta_initial,
                "zeta_final": x.zeta_final,
                "zeta_asserted": x.zeta_asserted,
                "size_floor": x.size_floor,
            });
            r.witnesses = json!({ "result": x.result.to_json() });
            r.trace = to_value(&x.trace);
            r.into()
        }
        Command::AlmostBasis { input, conn, l } => {
            let a = read_set(input)?;
            let params = ConnectivityParams { l_override: *l, ..conn.params(seed) };
            let ab = extract_almost_basis(&a, &params, Caps::default())?;
            let mut r = report("almost-basis", &a, to_value(&params));
            r.passed = ab.ok();
            r.verdicts = json!({ "l": ab.l, "l_overridden": ab.l_overridden, "l_bound": ab.l_bound });
            r.witnesses = to_value(&ab.outcome);
            r.trace = to_value(&ab.trace);
            r.into()
        }
        Command::Partition { input, k, epsilon1, start, cut_cap } => {
            let a = read_set(input)?;
            let start = match start {
                StartArg::Singletons => PartitionStart::Singletons,
                StartArg::AllInOne => PartitionStart::AllInOne,
            };
            let opts = PartitionOptions { start, cut_cap: *cut_cap, seed, max_moves: None };
            let st = partition_min_sigma(&a, *k, epsilon1, &opts)?;
            let mut r = report("partition", &a, json!({ "k": k, "epsilon1": epsilon1, "options": opts }));
            r.certified = st.certified();
            r.passed = st.ok();
            r.witnesses = json!({ "parts": st.parts.iter().map(GroupSet::to_json).collect::<Vec<_>>() });
            r.trace = to_value(&st.moves);
            r.verdicts = to_value(&st);
            r.verdicts.as_object_mut().map(|m| m.remove("moves"));
            r.into()
        }
        Command::StrongPartition { input, epsilon, beta, cut_cap } => {
            let a = read_set(input)?;
            let opts = PartitionOptions { cut_cap: *cut_cap, seed, ..Default::default() };
            let sp = strong_partition(&a, epsilon, beta, &opts)?;
            let mut r = report("strong-partition", &a, json!({ "epsilon": epsilon, "beta": beta, "options": opts }));
            r.passed = sp.ok();
            r.certified = sp.parts.iter().all(|p| p.certified);
            r.trace = to_value(&sp.trace);
            r.verdicts = to_value(&sp);
            r.verdicts.as_object_mut().map(|m| m.remove("trace"));
            r.into()
        }
        Command::Konyagin { input, k, c, exhaustive_cap } => {
            let a = read_set(input)?;
            let kr = konyagin_containment(&a, *k, c, *exhaustive_cap)?;
            let mut r = report("konyagin", &a, json!({ "k": k, "C": c, "exhaustive_cap": exhaustive_cap }));
            r.passed = kr.ok();
            r.certified = kr.strong.is_some();
            r.verdicts = to_value(&kr);
            r.into()
        }
        Command::Pipeline { input, epsilon, mode, max_order } => {
            let a = read_set(input)?;
            let opts = PipelineOptions { mode: (*mode).into(), seed, max_order: *max_order, ..PipelineOptions::new(epsilon.clone()) };
            run_main_pipeline(&a, &opts)?.into_report(&a).into()
        }
        Command::Verify { suites } => {
            let scope = if suites.is_empty() {
                Suite::ALL.to_vec()
            } else {
                suites.iter().map(|s| s.parse()).collect::<Result<Vec<Suite>>>()?
            };
            let results = verify_suite(&scope, seed)?;
            let passed = results.iter().all(|r| r.passed());
            Outcome { body: json!({ "seed": seed, "passed": passed, "suites": results }), passed }
        }
        Command::Recheck { report } => {
            let s = recheck(&read_json(report)?)?;
            Outcome { passed: s.ok(), body: to_value(&s) }
        }
    })
}

fn run_check(c: &CheckCommand, seed: u64) -> Result<Outcome> {
    Ok(match c {
        CheckCommand::Connected { input, conn } => {
            let a = read_set(input)?;
            let params = conn.params(seed);
            let v = check_connected(&a, &params)?;
            let mut r = report("check connected", &a, to_value(&params));
            r.passed = v.holds;
            r.certified = v.certification != addcomb::connectivity::Certification::NoCounterexampleFound;
            r.verdicts = to_value(&v);
            r.into()
        }
        CheckCommand::Strong { input, conn } => {
            let a = read_set(input)?;
            let params = conn.params(seed);
            let v = check_strongly_connected(&a, &params)?;
            let mut r = report("check strong", &a, to_value(&params));
            r.passed = v.holds;
            r.certified = v.certification != addcomb::connectivity::Certification::NoCounterexampleFound;
            r.verdicts = to_value(&v);
            r.into()
        }
        CheckCommand::Holder { input } => {
            let v = read_json(input)?;
            let fns = |key: &str| -> Result<Vec<IntFn>> {
                v.get(key)
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse(format!("missing \"{key}\" array")))?
                    .iter()
                    .map(IntFn::from_json)
                    .collect()
            };
            let (fs, gs) = (fns("fs")?, fns("gs")?);
            let h = check_holder(&fs, &gs, fs.len(), gs.len())?;
            let mut r = Report::new("check holder", None);
            r.params = json!({ "k1": fs.len(), "k2": gs.len() });
            r.passed = h.holds();
            r.verdicts = to_value(&h);
            r.into()
        }
        CheckCommand::Rudin { input, k } => {
            let a = read_set(input)?;
            let q = check_rudin(&DissociatedSet::certify(a.clone(), Caps::default())?, *k)?;
            let mut r = report("check rudin", &a, json!({ "k": k }));
            r.passed = q.holds;
            r.verdicts = to_value(&q);
            r.into()
        }
        CheckCommand::Tk2 { input, k } => {
            let a = read_set(input)?;
            let q = check_tk_vs_t2(&a, *k)?;
            let mut r = report("check tk2", &a, json!({ "k": k }));
            r.passed = q.holds;
            r.verdicts = to_value(&q);
            r.into()
        }
        CheckCommand::Doubling { input } => {
            let a = read_set(input)?;
            let d = doubling_energy_bound(&a)?;
            let mut r = report("check doubling", &a, Value::Null);
            r.passed = d.inequality.holds;
            r.verdicts = to_value(&d);
            r.into()
        }
    })
}

fn emit(out: Option<&Path>, body: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(body).expect("JSON value serializes") + "\n";
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Usage(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Error::Usage(format!("stdout: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|o| emit(cli.output.as_deref(), &o.body).map(|_| o.passed));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("addcomb: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
