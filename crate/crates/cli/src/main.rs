//! `csys`: run the law, axiom and theorem suites and evaluate B-set
//! operations from the command line.
//!
//! Reports are JSON on standard output; diagnostics go to standard error.
//! Exit status is 0 when everything passes, 1 on a failing suite or an
//! undefined operation, and 2 on usage errors.

mod selector;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use csys::crr::{Crr, RrArgs, RrValue};
use csys::crrlm::{Crrlm, LeftModule, LmArgs, LmValue};
use csys::csystem::{check_c0_axioms, check_homomorphism, check_pullbacks, BOp, CSystem, CheckOptions};
use csys::relmonad::{check_monad_laws, LawOptions, RelativeMonad, Term};
use csys::presheaf_ext::Presheaf;
use csys::suites::{psi_is_swap, SuiteOptions};
use csys::{Check, Error, Report};

use selector::{parse_monad, parse_system};

#[derive(Parser)]
#[command(name = "csys", version, about = "C-systems of relative monads and their modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the relative-monad laws of an instance.
    Laws {
        /// vars, unit, exc or free:<file>
        instance: String,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        #[arg(long, default_value_t = 300)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Term size bound for samplers.
        #[arg(long, default_value_t = 8)]
        size: usize,
    },
    /// Check the C-system axioms, pullbacks and, for module systems, the
    /// homomorphisms tr and tr!.
    Axioms {
        /// crr:<inst>, crrlm:<inst>:rrmod or crrlm:free:<file>
        system: String,
        #[arg(long, default_value_t = 3)]
        budget: usize,
        #[arg(long, default_value_t = 300)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate one B-set operation on JSON arguments.
    Bops {
        system: String,
        /// T, Tt, S, St or delta
        op: String,
        args: String,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
    },
    /// Check that ψ is the swap of the first two variables.
    DemoPerm {
        instance: String,
        #[arg(long, default_value_t = 300)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Explicit,
    Definitional,
    Both,
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: &'a str,
    target: &'a str,
    seed: u64,
    budgets: Value,
    passed: bool,
    reports: Vec<Report>,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("csys: {msg}");
    ExitCode::from(2)
}

/// Writes to stdout; a closed pipe is not an error worth a panic.
fn emit(value: &impl Serialize) {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn finish_run(run: RunReport<'_>) -> ExitCode {
    let ok = run.passed;
    emit(&run);
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let code = run(cli.command);
    eprintln!("wall time: {:.3}s", start.elapsed().as_secs_f64());
    code
}

fn run(command: Command) -> ExitCode {
    match command {
        Command::Laws {
            instance,
            max_n,
            samples,
            seed,
            size,
        } => {
            let m = match parse_monad(&instance) {
                Ok(m) => m,
                Err(e) => return usage(e),
            };
            let opts = LawOptions {
                max_n,
                samples,
                seed,
                size,
                ..LawOptions::default()
            };
            let report = with_monad!(&m, |inst| check_monad_laws(&inst, &opts));
            finish_run(RunReport {
                command: "laws",
                target: &instance,
                seed,
                budgets: json!({"max_n": max_n, "samples": samples, "size": size}),
                passed: report.passed(),
                reports: vec![report],
            })
        }
        Command::Axioms {
            system,
            budget,
            samples,
            seed,
        } => {
            let sys = match parse_system(&system) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let opts = CheckOptions {
                budget,
                samples,
                seed,
                ..CheckOptions::default()
            };
            let reports = with_system!(
                &sys,
                |c| vec![check_c0_axioms(&c, &opts), check_pullbacks(&c, &opts)],
                |s| lm_axioms(&s, &opts)
            );
            finish_run(RunReport {
                command: "axioms",
                target: &system,
                seed,
                budgets: json!({"budget": budget, "samples": samples}),
                passed: reports.iter().all(Report::passed),
                reports,
            })
        }
        Command::Bops {
            system,
            op,
            args,
            mode,
        } => {
            let sys = match parse_system(&system) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let op = match BOp::parse(&op) {
                Ok(op) => op,
                Err(e) => return usage(e),
            };
            let args: Value = match serde_json::from_str(&args) {
                Ok(v) => v,
                Err(e) => return usage(format!("arguments are not JSON: {e}")),
            };
            let out = with_system!(
                &sys,
                |c| crr_bops(&c, op, &args, mode),
                |s| lm_bops(&s, op, &args, mode)
            );
            match out {
                Ok((value, ok)) => {
                    emit(&value);
                    if ok {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => usage(e),
            }
        }
        Command::DemoPerm {
            instance,
            samples,
            seed,
        } => {
            let m = match parse_monad(&instance) {
                Ok(m) => m,
                Err(e) => return usage(e),
            };
            let opts = SuiteOptions {
                samples,
                seed,
                ..SuiteOptions::default()
            };
            let report = with_monad!(&m, |inst| psi_is_swap(&Crr::new(inst), &opts));
            finish_run(RunReport {
                command: "demo-perm",
                target: &instance,
                seed,
                budgets: json!({"samples": samples}),
                passed: report.passed(),
                reports: vec![report],
            })
        }
    }
}

fn lm_axioms<M: RelativeMonad, L: LeftModule<M>>(s: &Crrlm<M, L>, opts: &CheckOptions) -> Vec<Report> {
    let mut reports = vec![
        check_c0_axioms(s, opts),
        check_pullbacks(s, opts),
        check_homomorphism(&s.tr_hom(), opts),
    ];
    let mut rng = csys::prng(opts.seed);
    let pt = s.base().pt();
    let y = s
        .presheaf()
        .elements(s.base(), &pt)
        .and_then(|v| v.into_iter().next())
        .or_else(|| Presheaf::sample(s.presheaf(), s.base(), &pt, &mut rng));
    match y.and_then(|y| s.tr_bang(y)) {
        Some(h) => reports.push(check_homomorphism(&h, opts)),
        None => {
            let mut r = Report::new(format!("hom:tr!:{}", s.name()));
            r.push(Check::skipped("all", "no element of the module at pt"));
            reports.push(r);
        }
    }
    reports
}

fn error_json(e: &Error) -> Value {
    let mut v = json!({"kind": e.kind(), "message": e.to_string()});
    if let Error::BopDomain { op, violated } = e {
        v["op"] = json!(op);
        v["violated"] = json!(violated);
    }
    v
}

fn side(r: &Result<Value, Error>) -> Value {
    match r {
        Ok(v) => json!({"value": v}),
        Err(e) => json!({"error": error_json(e)}),
    }
}

/// Formats the outcome of one or both evaluations; the flag is false when
/// an evaluation failed or the two disagree.
fn verdict(
    op: BOp,
    mode: Mode,
    explicit: impl FnOnce() -> (Result<Value, Error>, Option<Value>),
    definitional: impl FnOnce() -> (Result<Value, Error>, Option<Value>),
) -> (Value, bool) {
    match mode {
        Mode::Explicit | Mode::Definitional => {
            let (r, _) = if mode == Mode::Explicit {
                explicit()
            } else {
                definitional()
            };
            let ok = r.is_ok();
            let mut v = side(&r);
            v["op"] = json!(op.name());
            (v, ok)
        }
        Mode::Both => {
            let (x, kx) = explicit();
            let (d, kd) = definitional();
            let agree = match (&x, &d) {
                (Ok(_), Ok(_)) => kx == kd,
                (Err(a), Err(b)) => a.kind() == b.kind(),
                _ => false,
            };
            let ok = agree && x.is_ok();
            (
                json!({"op": op.name(), "explicit": side(&x), "definitional": side(&d), "agree": agree}),
                ok,
            )
        }
    }
}

fn field<'a>(v: &'a Value, k: &str) -> Result<&'a Value, String> {
    v.get(k).ok_or_else(|| format!("missing field {k:?} in {v}"))
}

fn nat(v: &Value, k: &str) -> Result<usize, String> {
    field(v, k)?
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| format!("field {k:?} must be a natural number"))
}

/// A term is `{"ctx": n, "term": e}` or `[n, e]`.
fn term<M: RelativeMonad>(inst: &M, v: &Value) -> Result<Term<M::Expr>, String> {
    let (n, e) = match v {
        Value::Array(a) if a.len() == 2 && a[0].is_u64() => (a[0].as_u64().unwrap() as usize, &a[1]),
        Value::Object(_) => (nat(v, "ctx")?, field(v, "term")?),
        _ => return Err(format!("expected a term {{\"ctx\": n, \"term\": e}}, got {v}")),
    };
    inst.decode_in(n, e)
        .map(|e| Term::new(n, e))
        .map_err(|e| e.to_string())
}

fn crr_bops<M: RelativeMonad>(c: &Crr<M>, op: BOp, a: &Value, mode: Mode) -> Result<(Value, bool), String> {
    let inst = c.inst();
    let args = match op {
        BOp::T => RrArgs::T {
            m: nat(a, "m")?,
            n: nat(a, "n")?,
        },
        BOp::TTilde => RrArgs::TTilde {
            m: nat(a, "m")?,
            s: term(inst, field(a, "s")?)?,
        },
        BOp::S => RrArgs::S {
            r: term(inst, field(a, "r")?)?,
            n: nat(a, "n")?,
        },
        BOp::STilde => RrArgs::STilde {
            r: term(inst, field(a, "r")?)?,
            s: term(inst, field(a, "s")?)?,
        },
        BOp::Delta => RrArgs::Delta { n: nat(a, "n")? },
    };
    let encode = |v: &RrValue<M::Expr>| match v {
        RrValue::Object(n) => json!(n),
        RrValue::Element(t) => json!([t.ctx, inst.encode(&t.expr)]),
    };
    let eval = |r: csys::Result<RrValue<M::Expr>>| {
        let key = r.as_ref().ok().map(encode);
        (r.map(|v| encode(&v)), key)
    };
    Ok(verdict(
        op,
        mode,
        || eval(c.bop_explicit(&args)),
        || eval(c.bop_definitional(&args)),
    ))
}

fn lm_bops<M: RelativeMonad, L: LeftModule<M>>(
    s: &Crrlm<M, L>,
    op: BOp,
    a: &Value,
    mode: Mode,
) -> Result<(Value, bool), String> {
    let obj = |k: &str| s.decode_obj(field(a, k)?).map_err(|e| e.to_string());
    let bt = |k: &str| s.decode_btilde(field(a, k)?).map_err(|e| e.to_string());
    let args = match op {
        BOp::T => LmArgs::T {
            x: obj("x")?,
            y: obj("y")?,
        },
        BOp::TTilde => LmArgs::TTilde {
            x: obj("x")?,
            s: bt("s")?,
        },
        BOp::S => LmArgs::S {
            r: bt("r")?,
            y: obj("y")?,
        },
        BOp::STilde => LmArgs::STilde {
            r: bt("r")?,
            s: bt("s")?,
        },
        BOp::Delta => LmArgs::Delta { x: obj("x")? },
    };
    let eval = |r: csys::Result<LmValue<M::Expr, L::Elem>>| {
        let key = r.as_ref().ok().map(|v| s.encode_value(v));
        (r.map(|v| s.encode_value(&v)), key)
    };
    Ok(verdict(
        op,
        mode,
        || eval(s.bop_lm_explicit(&args)),
        || eval(s.bop_lm_definitional(&args)),
    ))
}
