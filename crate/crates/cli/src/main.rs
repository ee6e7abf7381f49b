use std::cmp::Ordering;
use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ldf_divform::{divide, DfError, Engine, Stats};
use ldf_normalform::nf_of;
use ldf_oracle::{oracle_compare, oracle_equal, Budget, Value};
use ldf_rewrite::{common_reduct, ld_successors, trace_records};
use ldf_term::{enumerate, iterate, parse, parse_corpus, power_app, power_comp, Format, Term};
use serde_json::{json, Value as Json};

mod check;

#[derive(Parser)]
#[command(name = "ldform", version, about = "Division forms and the left-division order for LD and Σ terms")]
struct Cli {
    /// Emit one JSON object {op, inputs, result, tier_used, cost}.
    #[arg(long, global = true)]
    json: bool,
    /// Output format for terms.
    #[arg(long, global = true, value_enum, default_value_t = Fmt::Infix)]
    format: Fmt,
    /// Node budget for oracle searches.
    #[arg(long, global = true, env = "LDFORM_BUDGET", default_value_t = 20_000, value_parser = positive)]
    budget: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Infix,
    Sexpr,
    Compact,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Kind {
    App,
    Comp,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Suite {
    Thm1,
    Canonical,
    Division,
    Nf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a term and show its structure.
    Parse { term: String },
    /// Reprint a term in the chosen format.
    Print { term: String },
    /// Compare two terms in the left-division order.
    Cmp {
        a: String,
        b: String,
        /// Decide by bounded rewriting search instead of division forms.
        #[arg(long)]
        oracle: bool,
    },
    /// Decide equality of two terms.
    Eq {
        a: String,
        b: String,
        #[arg(long)]
        oracle: bool,
    },
    /// Canonical x-division form.
    Df { term: String },
    /// Division form of Q over P.
    Div { p: String, q: String },
    /// Normal form of W over powers of P.
    Nf { p: String, w: String },
    /// Apply up to N left-distributive expansion steps, leftmost first.
    Rewrite {
        term: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Search for a common reduct of two LD terms.
    Confluence { u: String, v: String },
    /// The iterate I_n(a, b).
    Iterate { a: String, b: String, n: usize },
    /// p^(n) or the composition power p^n.
    Power {
        p: String,
        n: usize,
        #[arg(long, value_enum, default_value_t = Kind::App)]
        kind: Kind,
    },
    /// Enumerate terms by leaf count.
    Enum {
        #[arg(long)]
        leaves: usize,
        /// Only LD terms, no composition.
        #[arg(long)]
        a_only: bool,
        /// Only print the counts.
        #[arg(long)]
        count: bool,
    },
    /// Least n ≥ 1 with p^(n) above q.
    Findpow { p: String, q: String },
    /// Cross-validate against the oracle and report tier usage.
    Check {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Largest leaf count used by the suite.
        #[arg(long, default_value_t = 4)]
        leaves: usize,
    },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("budget must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

pub enum Failure {
    Parse(String),
    Budget(String),
    Invariant(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Invariant(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Parse(m) => write!(f, "parse error: {m}"),
            Failure::Budget(m) => write!(f, "budget exhausted: {m}"),
            Failure::Invariant(m) => write!(f, "invariant violation: {m}"),
        }
    }
}

impl From<DfError> for Failure {
    fn from(e: DfError) -> Failure {
        match e {
            DfError::Watchdog { .. } => Failure::Budget(e.to_string()),
            DfError::Invariant(_) => Failure::Invariant(e.to_string()),
        }
    }
}

/// Inline term, or the first term of a corpus file given as `@path`.
fn term(arg: &str) -> Result<Term, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{path}: {e}")))?;
            let terms = parse_corpus(&text).map_err(|(line, e)| Failure::Parse(format!("{path}:{line}: {e}")))?;
            terms.into_iter().next().ok_or_else(|| Failure::Parse(format!("{path}: no terms")))
        }
        None => parse(arg).map_err(|e| Failure::Parse(e.to_string())),
    }
}

fn verdict(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "Less",
        Ordering::Equal => "Equal",
        Ordering::Greater => "Greater",
    }
}

fn value_name(v: Value) -> &'static str {
    match v {
        Value::Less => "Less",
        Value::Equal => "Equal",
        Value::Greater => "Greater",
        Value::Unknown => "Unknown",
    }
}

/// What a command produced: text for humans, a JSON result, the tier and cost.
pub struct Report {
    text: String,
    result: Json,
    tier: Option<&'static str>,
    cost: Json,
    failure: Option<Failure>,
}

impl Report {
    fn plain(text: String, result: Json) -> Report {
        Report { text, result, tier: None, cost: Json::Null, failure: None }
    }

    fn engine(text: String, result: Json, stats: Stats) -> Report {
        let tier = if stats.tier1 > 0 { "tier1" } else { "tier2" };
        let cost = json!({
            "tier1": stats.tier1,
            "tier2": stats.tier2,
            "divisions": stats.divisions,
            "comparisons": stats.comparisons,
            "max_depth": stats.max_depth,
        });
        Report { text, result, tier: Some(tier), cost, failure: None }
    }
}

struct Run {
    fmt: Format,
    budget: Budget,
    eng: Engine,
}

impl Run {
    fn show(&self, t: &Term) -> String {
        t.render(self.fmt)
    }

    fn exec(&self, cmd: &Cmd) -> Result<Report, Failure> {
        let eng = &self.eng;
        Ok(match cmd {
            Cmd::Parse { term: a } => {
                let t = term(a)?;
                let text = format!(
                    "{}\nleaves {} nodes {} depth {} {}",
                    t.sexpr(),
                    t.leaves(),
                    t.nodes(),
                    t.depth(),
                    if t.is_a() { "LD" } else { "Σ" }
                );
                Report::plain(text, json!({ "sexpr": t.sexpr(), "leaves": t.leaves(), "ld_only": t.is_a() }))
            }
            Cmd::Print { term: a } => {
                let s = self.show(&term(a)?);
                Report::plain(s.clone(), Json::String(s))
            }
            Cmd::Cmp { a, b, oracle } | Cmd::Eq { a, b, oracle } => {
                let (s, t) = (term(a)?, term(b)?);
                let is_eq = matches!(cmd, Cmd::Eq { .. });
                if *oracle {
                    let v = if is_eq { oracle_equal(&s, &t, &self.budget) } else { oracle_compare(&s, &t, &self.budget) };
                    let name = match (is_eq, v.value) {
                        (true, Value::Unknown) => "Unknown",
                        (_, val) => value_name(val),
                    };
                    let mut r = Report::plain(name.into(), Json::String(name.into()));
                    r.tier = Some("oracle");
                    r.cost = json!(v.cost);
                    if v.value == Value::Unknown {
                        r.failure = Some(Failure::Budget(format!("oracle undecided after {} expansions", v.cost)));
                    }
                    r
                } else {
                    let o = eng.compare_terms(&s, &t)?;
                    let name = match (is_eq, o) {
                        (true, Ordering::Equal) => "Equal",
                        (true, _) => "NotEqual",
                        (false, o) => verdict(o),
                    };
                    Report::engine(name.into(), Json::String(name.into()), eng.stats())
                }
            }
            Cmd::Df { term: a } => {
                let d = divide(eng, &Term::gen(), &term(a)?)?;
                Report::engine(d.sexpr(), d.to_json(), eng.stats())
            }
            Cmd::Div { p, q } => {
                let d = divide(eng, &term(p)?, &term(q)?)?;
                Report::engine(d.sexpr(), d.to_json(), eng.stats())
            }
            Cmd::Nf { p, w } => {
                let f = nf_of(eng, &term(p)?, &term(w)?)?;
                Report::engine(f.sexpr(), f.to_json(), eng.stats())
            }
            Cmd::Rewrite { term: a, steps } => {
                let mut t = term(a)?;
                let mut done = Vec::new();
                for _ in 0..*steps {
                    let Some(s) = ld_successors(&t).into_iter().next() else { break };
                    t = s.after.clone();
                    done.push(s);
                }
                let mut lines: Vec<String> = done
                    .iter()
                    .map(|s| format!("{} {} {}", s.position, s.rule.name(), self.show(&s.after)))
                    .collect();
                lines.push(self.show(&t));
                let records = serde_json::to_value(trace_records(&done)).expect("trace records serialize");
                Report::plain(lines.join("\n"), json!({ "steps": records, "term": self.show(&t) }))
            }
            Cmd::Confluence { u, v } => {
                let (s, t) = (term(u)?, term(v)?);
                if !s.is_a() || !t.is_a() {
                    return Err(Failure::Parse("confluence takes terms without composition".into()));
                }
                match common_reduct(&s, &t, self.budget.nodes) {
                    Ok(r) => {
                        let text = format!(
                            "{}\nleft {} steps, right {} steps",
                            self.show(&r.term),
                            r.left.len(),
                            r.right.len()
                        );
                        let mut rep = Report::plain(
                            text,
                            json!({
                                "reduct": self.show(&r.term),
                                "left": trace_records(&r.left).len(),
                                "right": trace_records(&r.right).len(),
                            }),
                        );
                        rep.tier = Some("oracle");
                        rep.cost = json!(r.cost);
                        rep
                    }
                    Err(e) => return Err(Failure::Budget(e.to_string())),
                }
            }
            Cmd::Iterate { a, b, n } => {
                let t = iterate(&term(a)?, &term(b)?, *n).map_err(|e| Failure::Parse(e.to_string()))?;
                let s = self.show(&t);
                Report::plain(s.clone(), Json::String(s))
            }
            Cmd::Power { p, n, kind } => {
                let p = term(p)?;
                let t = match kind {
                    Kind::App => power_app(&p, *n),
                    Kind::Comp => power_comp(&p, *n).map_err(|e| Failure::Parse(e.to_string()))?,
                };
                let s = self.show(&t);
                Report::plain(s.clone(), Json::String(s))
            }
            Cmd::Enum { leaves, a_only, count } => {
                let mut lines = Vec::new();
                let mut counts = Vec::new();
                for n in 1..=*leaves {
                    let ts = enumerate(n, *a_only);
                    counts.push(ts.len());
                    if !count {
                        lines.extend(ts.iter().map(|t| self.show(t)));
                    }
                }
                let total: usize = counts.iter().sum();
                let per: Vec<String> = counts.iter().enumerate().map(|(i, c)| format!("{}:{c}", i + 1)).collect();
                lines.push(format!("total {total} ({})", per.join(" ")));
                Report::plain(lines.join("\n"), json!({ "counts": counts, "total": total }))
            }
            Cmd::Findpow { p, q } => {
                let n = eng.find_power(&term(p)?, &term(q)?)?;
                Report::engine(n.to_string(), json!(n), eng.stats())
            }
            Cmd::Check { suite, leaves } => check::run(*suite, *leaves, &self.budget)?,
        })
    }
}

fn op_name(cmd: &Cmd) -> (&'static str, Vec<&str>) {
    match cmd {
        Cmd::Parse { term } => ("parse", vec![term]),
        Cmd::Print { term } => ("print", vec![term]),
        Cmd::Cmp { a, b, .. } => ("cmp", vec![a, b]),
        Cmd::Eq { a, b, .. } => ("eq", vec![a, b]),
        Cmd::Df { term } => ("df", vec![term]),
        Cmd::Div { p, q } => ("div", vec![p, q]),
        Cmd::Nf { p, w } => ("nf", vec![p, w]),
        Cmd::Rewrite { term, .. } => ("rewrite", vec![term]),
        Cmd::Confluence { u, v } => ("confluence", vec![u, v]),
        Cmd::Iterate { a, b, .. } => ("iterate", vec![a, b]),
        Cmd::Power { p, .. } => ("power", vec![p]),
        Cmd::Enum { .. } => ("enum", vec![]),
        Cmd::Findpow { p, q } => ("findpow", vec![p, q]),
        Cmd::Check { .. } => ("check", vec![]),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let fmt = match cli.format {
        Fmt::Infix => Format::Infix,
        Fmt::Sexpr => Format::Sexpr,
        Fmt::Compact => Format::Compact,
    };
    let run = Run { fmt, budget: Budget::new(cli.budget), eng: Engine::default() };
    let (op, inputs) = op_name(&cli.cmd);
    let outcome = run.exec(&cli.cmd);
    let (report, failure) = match outcome {
        Ok(mut r) => {
            let f = r.failure.take();
            (Some(r), f)
        }
        Err(f) => (None, Some(f)),
    };
    if cli.json {
        let mut obj = json!({ "op": op, "inputs": inputs });
        match &report {
            Some(r) => {
                obj["result"] = r.result.clone();
                obj["tier_used"] = r.tier.map_or(Json::Null, |t| Json::String(t.into()));
                obj["cost"] = r.cost.clone();
            }
            None => {
                obj["result"] = Json::Null;
                obj["tier_used"] = Json::Null;
                obj["cost"] = Json::Null;
            }
        }
        if let Some(f) = &failure {
            obj["error"] = Json::String(f.to_string());
        }
        println!("{obj}");
    } else {
        if let Some(r) = &report {
            println!("{}", r.text);
        }
        if let Some(f) = &failure {
            eprintln!("{f}");
        }
    }
    ExitCode::from(failure.map_or(0, |f| f.code()))
}
