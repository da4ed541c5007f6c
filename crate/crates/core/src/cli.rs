//! Command-line front end.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error, 3 a checked
//! identity (or a verification sweep) failed.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analysis::emit::{self, Tabular};
use crate::analysis::{census, drift_report, residue_class, table1, table2, table3, ClassStats};
use crate::bitpoly::BitPoly;
use crate::collatz::{
    check_corollary1, collatz_compose, collatz_step, fixed_point_check, g_relations_check,
    h_chain_check, mersenne_prefix_check, predict_case, trajectory, Family, TrajectoryLimits,
};
use crate::error::Error;
use crate::treegraph::{build_tree, path_to_sink, to_dot, DotOptions, LabelStyle, TreeLimits};
use crate::verify::{
    checkpoint_load, checkpoint_save, resume, verify_partial, RangeReport, VerifyPolicy,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "polycollatz",
    version,
    about = "Exact accelerated Collatz map on odd integers read as binary polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One step (or `--times L` composed steps) of the accelerated map.
    Step {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        times: u64,
        /// Also report the closed-form prediction for the value, if any.
        #[arg(long)]
        predict: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Full trajectory down to 1 or a limit.
    Traj {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: u64,
        #[arg(long, default_value_t = 1 << 20)]
        max_degree: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Build a family member and describe it.
    Family {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Check an exact identity; exits 3 when it fails.
    Check {
        #[arg(value_enum)]
        identity: Identity,
        #[command(flatten)]
        input: Input,
        /// Lifting count for corollary1.
        #[arg(long, default_value_t = 1)]
        j: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Per-residue-class statistics of single steps over odd n in [lo, hi).
    Census {
        #[arg(long)]
        lo: BitPoly,
        #[arg(long)]
        hi: BitPoly,
        #[command(flatten)]
        output: Output,
    },
    /// Degree drift of a trajectory against the average envelope.
    Drift {
        #[command(flatten)]
        input: Input,
        /// Use the envelope for starts of the form x^(p+1) - 1.
        #[arg(long)]
        mersenne: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Reproduce a table: 1 = powers of x+1, 2 = G family, 3 = second-step exponents.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        /// Largest q (table 1) or even p (tables 2 and 3). Defaults 10, 32, 32.
        #[arg(long)]
        max: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Functional graph of the map over odd values up to a degree.
    Tree {
        #[arg(long, default_value_t = 4)]
        max_degree: u64,
        #[arg(long, value_enum, default_value_t = Label::Decimal)]
        label: Label,
        #[arg(long)]
        max_label_degree: Option<u64>,
        /// Collapse runs above --max-label-degree into counted dotted edges.
        #[arg(long, requires = "max_label_degree")]
        elide: bool,
        /// Print the path from this node to 1 instead of the graph.
        #[arg(long)]
        path: Option<BitPoly>,
        #[command(flatten)]
        output: Output,
    },
    /// Sweep odd n in [lo, hi) to 1; exits 3 if any walk hits the step limit.
    Verify {
        #[arg(long, required_unless_present = "resume")]
        lo: Option<BitPoly>,
        #[arg(long, required_unless_present = "resume")]
        hi: Option<BitPoly>,
        #[arg(long, default_value = "1")]
        floor: BitPoly,
        #[arg(long, env = "COLLATZ_WORKERS")]
        workers: Option<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        step_limit: u64,
        /// Walk every start all the way to 1.
        #[arg(long)]
        no_early_exit: bool,
        /// Stop the sweep at this value, leaving a partial report.
        #[arg(long)]
        stop_at: Option<BitPoly>,
        /// Write a checkpoint after the sweep.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Continue the sweep recorded in this checkpoint.
        #[arg(long, conflicts_with_all = ["lo", "hi", "floor"])]
        resume: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Args)]
struct Input {
    /// Decimal value.
    #[arg(long, group = "source")]
    n: Option<BitPoly>,
    /// Polynomial text such as "x^4+x+1".
    #[arg(long, group = "source")]
    poly: Option<String>,
    /// Family member, parameterised by --p, --k, --index or --exps.
    #[arg(long, value_enum, group = "source")]
    family: Option<FamilyKind>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    index: Option<u64>,
    /// Inner exponents of an F member, comma separated.
    #[arg(long, value_delimiter = ',')]
    exps: Vec<u64>,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the document here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyKind {
    #[value(name = "F", alias = "f")]
    F,
    #[value(name = "U", alias = "u")]
    U,
    #[value(name = "G", alias = "g")]
    G,
    #[value(name = "H", alias = "h")]
    H,
    #[value(alias = "Mersenne")]
    Mersenne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Identity {
    Corollary1,
    GRelations,
    HChain,
    MersennePrefix,
    FixedPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Label {
    Decimal,
    Poly,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// A rendered document plus whether the command's check held.
struct Doc {
    body: String,
    holds: bool,
}

impl Doc {
    fn ok(body: String) -> Self {
        Doc { body, holds: true }
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let out_path = cli.command.output().out.clone();
    match dispatch(cli.command) {
        Ok(doc) => {
            let written = match &out_path {
                Some(path) => std::fs::write(path, &doc.body),
                None => stdout.write_all(doc.body.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_DOMAIN;
            }
            if doc.holds {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "usage error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_DOMAIN
        }
    }
}

impl Command {
    fn output(&self) -> &Output {
        match self {
            Command::Step { output, .. }
            | Command::Traj { output, .. }
            | Command::Family { output, .. }
            | Command::Check { output, .. }
            | Command::Census { output, .. }
            | Command::Drift { output, .. }
            | Command::Table { output, .. }
            | Command::Tree { output, .. }
            | Command::Verify { output, .. } => output,
        }
    }
}

fn format_of(output: &Output, default: Format, allowed: &[Format]) -> Outcome<Format> {
    let f = output.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::Usage(format!(
            "format {} is not available here",
            f.to_possible_value()
                .expect("no skipped variants")
                .get_name()
        )))
    }
}

impl Input {
    fn family_spec(&self) -> Outcome<Option<Family>> {
        let Some(kind) = self.family else {
            return Ok(None);
        };
        let need = |v: Option<u64>, flag: &str| {
            v.ok_or_else(|| Failure::Usage(format!("--family {kind:?} needs --{flag}")))
        };
        Ok(Some(match kind {
            FamilyKind::F => Family::F {
                p: need(self.p, "p")?,
                inner: self.exps.clone(),
            },
            FamilyKind::U => Family::U {
                k: need(self.k, "k")?,
            },
            FamilyKind::G => Family::G {
                p: need(self.p, "p")?,
            },
            FamilyKind::H => Family::H {
                index: need(self.index, "index")?,
            },
            FamilyKind::Mersenne => Family::Mersenne {
                p: need(self.p, "p")?,
            },
        }))
    }

    fn value(&self) -> Outcome<BitPoly> {
        if let Some(n) = &self.n {
            return Ok(n.clone());
        }
        if let Some(text) = &self.poly {
            return Ok(BitPoly::parse_poly(text)?);
        }
        match self.family_spec()? {
            Some(f) => Ok(f.build()?),
            None => Err(Failure::Usage(
                "one of --n, --poly or --family is required".into(),
            )),
        }
    }

    fn param(&self, v: Option<u64>, flag: &str) -> Outcome<u64> {
        v.ok_or_else(|| Failure::Usage(format!("--{flag} is required")))
    }
}

fn kv(pairs: &[(&str, String)]) -> String {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in pairs {
        writeln!(out, "{k:<width$}  {v}").expect("write to string");
    }
    out
}

fn json_line<T: Serialize + ?Sized>(v: &T) -> Outcome<String> {
    let mut s = serde_json::to_string(v).map_err(Error::from)?;
    s.push('\n');
    Ok(s)
}

fn join(qs: &[u64]) -> String {
    qs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Serialize)]
struct StepDoc<'a> {
    value: &'a BitPoly,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    qs: Option<&'a Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    prediction: Option<&'a Option<crate::collatz::CasePrediction>>,
}

#[derive(Serialize)]
struct StepRow {
    l: u64,
    q: u64,
    value: BitPoly,
    poly: String,
    degree: u64,
}

impl Tabular for StepRow {
    const HEADERS: &'static [&'static str] = &["l", "q", "value", "poly", "degree"];

    fn cells(&self) -> Vec<String> {
        vec![
            self.l.to_string(),
            self.q.to_string(),
            self.value.to_string(),
            self.poly.clone(),
            self.degree.to_string(),
        ]
    }
}

impl Tabular for ClassStats {
    const HEADERS: &'static [&'static str] = &[
        "class", "count", "q_sum", "min_q", "max_q", "mean_q", "fraction",
    ];

    fn cells(&self) -> Vec<String> {
        let opt = |v: Option<u64>| v.map_or_else(String::new, |v| v.to_string());
        vec![
            format!("{:?}", self.class),
            self.count.to_string(),
            self.q_sum.to_string(),
            opt(self.min_q),
            opt(self.max_q),
            self.mean_q.map_or_else(String::new, |m| format!("{m:.6}")),
            format!("{:.6}", self.fraction),
        ]
    }
}

#[derive(Serialize)]
struct DriftRow {
    l: u64,
    degree: u64,
    bound: f64,
    exceeds: bool,
}

impl Tabular for DriftRow {
    const HEADERS: &'static [&'static str] = &["l", "degree", "bound", "exceeds"];

    fn cells(&self) -> Vec<String> {
        vec![
            self.l.to_string(),
            self.degree.to_string(),
            format!("{:.6}", self.bound),
            self.exceeds.to_string(),
        ]
    }
}

fn dispatch(cmd: Command) -> Outcome<Doc> {
    match cmd {
        Command::Step {
            input,
            times,
            predict,
            output,
        } => step(&input, times, predict, &output),
        Command::Traj {
            input,
            max_steps,
            max_degree,
            output,
        } => traj(
            &input,
            TrajectoryLimits {
                max_steps,
                max_degree,
            },
            &output,
        ),
        Command::Family { input, output } => family(&input, &output),
        Command::Check {
            identity,
            input,
            j,
            output,
        } => check(identity, &input, j, &output),
        Command::Census { lo, hi, output } => census_cmd(&lo, &hi, &output),
        Command::Drift {
            input,
            mersenne,
            output,
        } => drift(&input, mersenne, &output),
        Command::Table { which, max, output } => table(which, max, &output),
        Command::Tree {
            max_degree,
            label,
            max_label_degree,
            elide,
            path,
            output,
        } => {
            let opts = DotOptions {
                label: match label {
                    Label::Decimal => LabelStyle::Decimal,
                    Label::Poly => LabelStyle::Poly,
                },
                max_label_degree,
                elide,
            };
            tree(max_degree, opts, path.as_ref(), &output)
        }
        Command::Verify {
            lo,
            hi,
            floor,
            workers,
            step_limit,
            no_early_exit,
            stop_at,
            checkpoint,
            resume: resume_from,
            output,
        } => {
            let mut policy = VerifyPolicy {
                step_limit,
                floor,
                early_exit: !no_early_exit,
                ..VerifyPolicy::default()
            };
            if let Some(w) = workers {
                policy.workers = w;
            }
            let report = match resume_from {
                Some(path) => {
                    let loaded = checkpoint_load(&path)?;
                    match &stop_at {
                        Some(stop) => verify_continue(loaded, stop, &policy)?,
                        None => resume(loaded, &policy)?,
                    }
                }
                None => {
                    let (lo, hi) = (lo.expect("required by clap"), hi.expect("required by clap"));
                    verify_partial(&lo, &hi, stop_at.as_ref().unwrap_or(&hi), &policy)?
                }
            };
            if let Some(path) = checkpoint {
                checkpoint_save(&report, &path)?;
            }
            verify_doc(&report, &output)
        }
    }
}

/// Advances a loaded partial report to `stop` rather than to its end.
fn verify_continue(
    loaded: RangeReport,
    stop: &BitPoly,
    policy: &VerifyPolicy,
) -> Outcome<RangeReport> {
    let mut bounded = loaded.clone();
    bounded.hi = stop.clone().min(loaded.hi.clone());
    let mut r = resume(
        bounded,
        &VerifyPolicy {
            floor: loaded.floor.clone(),
            ..policy.clone()
        },
    )?;
    r.hi = loaded.hi;
    r.verified = r.is_complete() && r.counterexamples.is_empty();
    Ok(r)
}

fn step(input: &Input, times: u64, predict: bool, output: &Output) -> Outcome<Doc> {
    let n = input.value()?;
    let fmt = format_of(output, Format::Json, &[Format::Json, Format::Text])?;
    if times == 0 {
        return Err(Failure::Usage("--times must be at least 1".into()));
    }
    let prediction = if predict { predict_case(&n)? } else { None };
    let (value, qs) = if times == 1 {
        let (v, q) = collatz_step(&n)?;
        (v, vec![q])
    } else {
        collatz_compose(&n, times)?
    };
    let body = match fmt {
        Format::Json => json_line(&StepDoc {
            value: &value,
            q: (times == 1).then_some(qs[0]),
            qs: (times > 1).then_some(&qs),
            prediction: predict.then_some(&prediction),
        })?,
        _ => {
            let mut rows = vec![
                ("value", value.to_string()),
                ("poly", value.format_poly()),
                (if times == 1 { "q" } else { "qs" }, join(&qs)),
            ];
            if predict {
                rows.push((
                    "prediction",
                    prediction.as_ref().map_or_else(
                        || "none".to_string(),
                        |p| format!("{} via {:?} [{}]", p.predicted, p.rule, join(&p.ops)),
                    ),
                ));
            }
            kv(&rows)
        }
    };
    Ok(Doc::ok(body))
}

fn traj(input: &Input, limits: TrajectoryLimits, output: &Output) -> Outcome<Doc> {
    let n = input.value()?;
    let fmt = format_of(
        output,
        Format::Json,
        &[Format::Json, Format::Text, Format::Csv],
    )?;
    let t = trajectory(&n, limits)?;
    let rows: Vec<StepRow> = t
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| StepRow {
            l: i as u64 + 1,
            q: s.q,
            value: s.value.clone(),
            poly: s.value.format_poly(),
            degree: s.degree,
        })
        .collect();
    let body = match fmt {
        Format::Json => {
            let mut s = t.to_json()?;
            s.push('\n');
            s
        }
        Format::Csv => emit::to_csv(&rows)?,
        _ => {
            let mut s = kv(&[
                ("start", t.start.to_string()),
                ("poly", t.start.format_poly()),
                ("k", t.k.to_string()),
                ("q_sum", t.q_sum.to_string()),
                ("max_degree", t.max_degree.to_string()),
                ("terminated", format!("{:?}", t.terminated).to_lowercase()),
            ]);
            s.push('\n');
            s.push_str(&emit::to_text(&rows));
            s
        }
    };
    Ok(Doc::ok(body))
}

fn family(input: &Input, output: &Output) -> Outcome<Doc> {
    let spec = input
        .family_spec()?
        .ok_or_else(|| Failure::Usage("family needs --family".into()))?;
    let fmt = format_of(output, Format::Json, &[Format::Json, Format::Text])?;
    let v = spec.build()?;
    let degree = v.degree()?;
    let class = residue_class(&v)?;
    let body = match fmt {
        Format::Json => json_line(&json!({
            "family": spec,
            "value": v.to_string(),
            "poly": v.format_poly(),
            "degree": degree,
            "terms": v.term_count(),
            "class": class,
        }))?,
        _ => kv(&[
            ("family", format!("{spec:?}")),
            ("value", v.to_string()),
            ("poly", v.format_poly()),
            ("degree", degree.to_string()),
            ("terms", v.term_count().to_string()),
            ("class", format!("{class:?}")),
        ]),
    };
    Ok(Doc::ok(body))
}

fn check(identity: Identity, input: &Input, j: u64, output: &Output) -> Outcome<Doc> {
    let fmt = format_of(output, Format::Json, &[Format::Json, Format::Text])?;
    let (name, subject, holds, detail) = match identity {
        Identity::Corollary1 => {
            let f = input.value()?;
            let holds = check_corollary1(&f, j)?;
            (
                "corollary1",
                json!({"f": f.to_string(), "j": j}),
                holds,
                None,
            )
        }
        Identity::GRelations => {
            let p = input.param(input.p, "p")?;
            let g = g_relations_check(p)?;
            let detail = serde_json::to_value(&g).map_err(Error::from)?;
            ("g-relations", json!({"p": p}), g.ok, Some(detail))
        }
        Identity::HChain => {
            let k = input.param(input.k, "k")?;
            ("h-chain", json!({"k": k}), h_chain_check(k)?, None)
        }
        Identity::MersennePrefix => {
            let p = input.param(input.p, "p")?;
            (
                "mersenne-prefix",
                json!({"p": p}),
                mersenne_prefix_check(p)?,
                None,
            )
        }
        Identity::FixedPoint => {
            let n = input.value()?;
            (
                "fixed-point",
                json!({"n": n.to_string()}),
                fixed_point_check(&n)?,
                None,
            )
        }
    };
    let body = match fmt {
        Format::Json => {
            let mut doc = json!({"identity": name, "input": subject, "holds": holds});
            if let Some(d) = detail {
                doc["detail"] = d;
            }
            json_line(&doc)?
        }
        _ => kv(&[
            ("identity", name.to_string()),
            ("input", subject.to_string()),
            ("holds", holds.to_string()),
        ]),
    };
    Ok(Doc { body, holds })
}

fn census_cmd(lo: &BitPoly, hi: &BitPoly, output: &Output) -> Outcome<Doc> {
    let fmt = format_of(
        output,
        Format::Json,
        &[Format::Json, Format::Text, Format::Csv],
    )?;
    let r = census(lo, hi)?;
    let body = match fmt {
        Format::Json => json_line(&r)?,
        Format::Csv => emit::to_csv(&r.classes)?,
        _ => {
            let mut s = kv(&[
                ("lo", r.lo.to_string()),
                ("hi", r.hi.to_string()),
                ("total", r.total.to_string()),
                ("q_sum", r.q_sum.to_string()),
                ("mean_q", format!("{:.6}", r.mean_q)),
                ("class_laws_hold", r.class_laws_hold().to_string()),
            ]);
            s.push('\n');
            s.push_str(&emit::to_text(&r.classes));
            s
        }
    };
    Ok(Doc::ok(body))
}

fn drift(input: &Input, mersenne: bool, output: &Output) -> Outcome<Doc> {
    let n = input.value()?;
    let fmt = format_of(
        output,
        Format::Json,
        &[Format::Json, Format::Text, Format::Csv],
    )?;
    let t = trajectory(&n, TrajectoryLimits::default())?;
    let r = drift_report(&t, mersenne);
    let rows: Vec<DriftRow> = r
        .points
        .iter()
        .map(|p| DriftRow {
            l: p.l,
            degree: p.degree,
            bound: p.bound,
            exceeds: p.exceeds,
        })
        .collect();
    let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), |v| format!("{v:.6}"));
    let body = match fmt {
        Format::Json => json_line(&r)?,
        Format::Csv => emit::to_csv(&rows)?,
        _ => {
            let mut s = kv(&[
                ("start", r.start.to_string()),
                ("p", r.p.to_string()),
                ("k", r.k.to_string()),
                ("mersenne_related", r.mersenne_related.to_string()),
                ("slope", opt(r.slope)),
                ("net_drift", opt(r.net_drift)),
                ("violations", r.violations.to_string()),
            ]);
            s.push('\n');
            s.push_str(&emit::to_text(&rows));
            s
        }
    };
    Ok(Doc::ok(body))
}

fn render<T: Tabular>(rows: &[T], fmt: Format) -> Outcome<String> {
    Ok(match fmt {
        Format::Json => emit::to_json(rows)?,
        Format::Csv => emit::to_csv(rows)?,
        _ => emit::to_text(rows),
    })
}

fn table(which: u8, max: Option<u64>, output: &Output) -> Outcome<Doc> {
    let fmt = format_of(
        output,
        Format::Text,
        &[Format::Json, Format::Text, Format::Csv],
    )?;
    let body = match which {
        1 => render(&table1(max.unwrap_or(10)), fmt)?,
        2 => render(&table2(max.unwrap_or(32))?, fmt)?,
        _ => render(&table3(max.unwrap_or(32))?, fmt)?,
    };
    Ok(Doc::ok(body))
}

fn tree(
    max_degree: u64,
    opts: DotOptions,
    path: Option<&BitPoly>,
    output: &Output,
) -> Outcome<Doc> {
    let g = build_tree(max_degree, TreeLimits::default())?;
    if let Some(n) = path {
        let fmt = format_of(output, Format::Json, &[Format::Json, Format::Text])?;
        let nodes = path_to_sink(&g, n)?;
        let body = match fmt {
            Format::Json => json_line(&nodes)?,
            _ => nodes.iter().map(|v| format!("{v}\n")).collect(),
        };
        return Ok(Doc::ok(body));
    }
    let fmt = format_of(
        output,
        Format::Dot,
        &[Format::Dot, Format::Json, Format::Text],
    )?;
    let body = match fmt {
        Format::Dot => to_dot(&g, opts),
        Format::Json => {
            let mut s = g.to_json()?;
            s.push('\n');
            s
        }
        _ => g.to_text(),
    };
    Ok(Doc::ok(body))
}

fn verify_doc(r: &RangeReport, output: &Output) -> Outcome<Doc> {
    let fmt = format_of(output, Format::Json, &[Format::Json, Format::Text])?;
    let body = match fmt {
        Format::Json => json_line(r)?,
        _ => {
            let rec = &r.records;
            let origin = |o: &BitPoly| format!(" (from {o})");
            kv(&[
                ("lo", r.lo.to_string()),
                ("hi", r.hi.to_string()),
                ("floor", r.floor.to_string()),
                ("done_upto", r.checkpoint.done_upto.to_string()),
                ("verified", r.verified.to_string()),
                (
                    "counterexamples",
                    r.counterexamples
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                ),
                (
                    "max_odd_peak",
                    rec.max_odd_peak
                        .as_ref()
                        .map_or_else(String::new, |p| format!("{}{}", p.value, origin(&p.origin))),
                ),
                (
                    "max_k",
                    rec.max_k
                        .as_ref()
                        .map_or_else(String::new, |p| format!("{}{}", p.value, origin(&p.origin))),
                ),
                (
                    "max_q",
                    rec.max_q
                        .as_ref()
                        .map_or_else(String::new, |p| format!("{}{}", p.value, origin(&p.origin))),
                ),
            ])
        }
    };
    // A partial sweep is not a failure; counterexamples are.
    Ok(Doc {
        body,
        holds: r.counterexamples.is_empty(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("polycollatz").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn step_27() {
        assert_eq!(
            call(&["step", "--n", "27"]),
            (0, "{\"value\":\"41\",\"q\":1}\n".into(), String::new())
        );
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["step", "--n", "8"]).0, EXIT_DOMAIN);
        assert_eq!(call(&["step", "--n", "7", "--poly", "x+1"]).0, EXIT_USAGE);
        assert_eq!(call(&["step"]).0, EXIT_USAGE);
        assert_eq!(call(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(call(&["step", "--n", "7", "--format", "dot"]).0, EXIT_USAGE);
        assert_eq!(call(&["check", "fixed-point", "--n", "1"]).0, EXIT_FAILED);
        assert_eq!(call(&["check", "fixed-point", "--n", "7"]).0, EXIT_OK);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn family_input_forms() {
        let (code, out, _) = call(&["step", "--family", "G", "--p", "2"]);
        assert_eq!(code, 0);
        let (_, direct, _) = call(&["step", "--n", "17"]);
        assert_eq!(out, direct);
        assert_eq!(call(&["family", "--family", "U"]).0, EXIT_USAGE);
        let (_, f, _) = call(&["family", "--family", "F", "--p", "4", "--exps", "1,3"]);
        assert!(f.contains("\"value\":\"27\""), "{f}");
    }
}
