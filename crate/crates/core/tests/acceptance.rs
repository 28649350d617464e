//! The acceptance suite: ten criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines are always printed; the
//! process exits non-zero when any criterion fails.

use std::time::{Duration, Instant};

use csys::crr::Crr;
use csys::crrlm::{crrlm_build, lm_of_rr, Crrlm, LeftModule, TwoSortedModule, TypeSignature};
use csys::csystem::{check_c0_axioms, check_homomorphism, check_pullbacks, CSystem, CheckOptions};
use csys::relmonad::{
    check_monad_laws, exceptions, unit_carrier, variables, BindingSignature, FreeMonad, LawOptions,
    RelativeMonad, Tree, ASSOC,
};
use csys::suites::{
    crr_bop_agreement, crr_mb_round_trip, crrlm_bop_agreement, crrlm_mb_round_trip,
    p_star_weakening_closed_form, psi_is_swap, qq_iter_closed_form, star_iter_closed_form,
    SuiteOptions,
};
use csys::{Report, Status};

const LAWS_LIMIT: Duration = Duration::from_secs(10);
const AXIOMS_LIMIT: Duration = Duration::from_secs(30);
const PULLBACK_LIMIT: Duration = Duration::from_secs(60);

const SEED: u64 = 7;
const MAX_N: usize = 3;
/// Free-instance samples reach deeper contexts than the exhaustive runs.
const FREE_MAX_CTX: usize = 5;
const FREE_LAW_SAMPLES: usize = 500;
const BOP_SAMPLES: usize = 300;
const SMALL_SAMPLES: usize = 200;

struct Outcome {
    pass: bool,
    detail: String,
}

fn free() -> FreeMonad {
    FreeMonad::new(BindingSignature::lam_app())
}

fn two_sorted() -> TwoSortedModule {
    TwoSortedModule::new(TypeSignature::el_pi())
}

/// A one-line summary of a report, naming the first failing check.
fn summarize(r: &Report) -> String {
    let cases: u64 = r.checks.iter().map(|c| c.cases).sum();
    // The agreement suites note how many cases fell inside the domain.
    let defined: u64 = r
        .checks
        .iter()
        .filter_map(|c| c.note.as_deref()?.strip_suffix(" defined")?.rsplit(' ').next()?.parse::<u64>().ok())
        .sum();
    let cases = if defined > 0 {
        format!("{cases} cases, {defined} defined")
    } else {
        format!("{cases} cases")
    };
    match r.failing().next() {
        None => format!("{}: ok ({cases})", r.suite),
        Some(c) => format!(
            "{}: {} FAILED, e.g. {}",
            r.suite,
            c.name,
            c.counterexample.as_deref().unwrap_or("?")
        ),
    }
}

fn all_exhaustive(r: &Report) -> bool {
    r.checks
        .iter()
        .all(|c| c.note.as_deref().is_some_and(|n| n.starts_with("exhaustive")))
}

fn min_cases(r: &Report, want: u64) -> bool {
    r.checks.iter().all(|c| c.cases >= want)
}

fn collect(reports: &[(Report, bool)]) -> Outcome {
    let pass = reports.iter().all(|(r, extra)| r.passed() && *extra);
    let detail = reports
        .iter()
        .map(|(r, extra)| {
            let mut s = summarize(r);
            if !extra {
                s.push_str(" [coverage requirement not met]");
            }
            s
        })
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { pass, detail }
}

fn within(outcome: Outcome, took: Duration, limit: Duration) -> Outcome {
    if took <= limit {
        outcome
    } else {
        Outcome {
            pass: false,
            detail: format!("over time limit {limit:?}; {}", outcome.detail),
        }
    }
}

fn law_opts() -> LawOptions {
    LawOptions {
        max_n: MAX_N,
        seed: SEED,
        ..LawOptions::default()
    }
}

fn criterion_1() -> Outcome {
    let opts = law_opts();
    let free_opts = LawOptions {
        samples: FREE_LAW_SAMPLES,
        ..law_opts()
    };
    let free_report = check_monad_laws(&free(), &free_opts);
    let free_ok = min_cases(&free_report, FREE_LAW_SAMPLES as u64);
    let reports = vec![
        {
            let r = check_monad_laws(&variables(), &opts);
            let e = all_exhaustive(&r);
            (r, e)
        },
        {
            let r = check_monad_laws(&unit_carrier(), &opts);
            let e = all_exhaustive(&r);
            (r, e)
        },
        {
            let r = check_monad_laws(&exceptions(), &opts);
            let e = all_exhaustive(&r);
            (r, e)
        },
        (free_report, free_ok),
    ];
    collect(&reports)
}

fn check_opts() -> CheckOptions {
    CheckOptions {
        budget: MAX_N,
        seed: SEED,
        ..CheckOptions::default()
    }
}

fn axioms<C: CSystem>(cc: &C) -> (Report, bool) {
    (check_c0_axioms(cc, &check_opts()), true)
}

fn criterion_2() -> Outcome {
    let crr_free = Crr::new(free());
    let reports = vec![
        axioms(&Crr::new(variables())),
        axioms(&Crr::new(unit_carrier())),
        axioms(&Crr::new(exceptions())),
        axioms(&crr_free),
        axioms(&crrlm_build(Crr::new(variables()), lm_of_rr())),
        axioms(&crrlm_build(Crr::new(unit_carrier()), lm_of_rr())),
        axioms(&crrlm_build(Crr::new(exceptions()), lm_of_rr())),
        axioms(&crrlm_build(Crr::new(free()), lm_of_rr())),
        axioms(&crrlm_build(Crr::new(free()), two_sorted())),
    ];
    collect(&reports)
}

fn pullbacks<C: CSystem>(cc: &C) -> (Report, bool) {
    let r = check_pullbacks(cc, &check_opts());
    let ran = r.checks.iter().all(|c| c.status != Status::Skipped);
    (r, ran)
}

fn criterion_3() -> Outcome {
    let reports = vec![
        pullbacks(&Crr::new(variables())),
        pullbacks(&Crr::new(unit_carrier())),
        pullbacks(&Crr::new(exceptions())),
    ];
    collect(&reports)
}

fn exhaustive_opts() -> SuiteOptions {
    SuiteOptions {
        max_ctx: MAX_N,
        seed: SEED,
        ..SuiteOptions::default()
    }
}

fn free_opts(samples: usize) -> SuiteOptions {
    SuiteOptions {
        max_ctx: FREE_MAX_CTX,
        samples,
        seed: SEED,
        ..SuiteOptions::default()
    }
}

fn criterion_4() -> Outcome {
    let exc = crr_bop_agreement(&Crr::new(exceptions()), &exhaustive_opts());
    let exc_ok = all_exhaustive(&exc);
    let fr = crr_bop_agreement(&Crr::new(free()), &free_opts(BOP_SAMPLES));
    let fr_ok = min_cases(&fr, BOP_SAMPLES as u64);
    collect(&[(exc, exc_ok), (fr, fr_ok)])
}

fn lm_bops<M: RelativeMonad, L: LeftModule<M>>(sys: &Crrlm<M, L>, opts: &SuiteOptions, exhaustive: bool) -> (Report, bool) {
    let r = crrlm_bop_agreement(sys, opts);
    let ok = if exhaustive {
        all_exhaustive(&r)
    } else {
        min_cases(&r, opts.samples as u64)
    };
    (r, ok)
}

fn criterion_5() -> Outcome {
    let lm_opts = SuiteOptions {
        max_ctx: 4,
        ..free_opts(BOP_SAMPLES)
    };
    collect(&[
        lm_bops(&crrlm_build(Crr::new(exceptions()), lm_of_rr()), &exhaustive_opts(), true),
        lm_bops(&crrlm_build(Crr::new(free()), lm_of_rr()), &lm_opts, false),
        lm_bops(&crrlm_build(Crr::new(free()), two_sorted()), &lm_opts, false),
    ])
}

fn criterion_6() -> Outcome {
    let exc = crr_mb_round_trip(&Crr::new(exceptions()), &exhaustive_opts());
    let exc_ok = all_exhaustive(&exc);
    let fr = crr_mb_round_trip(&Crr::new(free()), &free_opts(SMALL_SAMPLES));
    let fr_ok = min_cases(&fr, SMALL_SAMPLES as u64);
    let lm_exc = crrlm_mb_round_trip(&crrlm_build(Crr::new(exceptions()), lm_of_rr()), &exhaustive_opts());
    let lm_exc_ok = all_exhaustive(&lm_exc);
    let lm_opts = SuiteOptions {
        max_ctx: 3,
        ..free_opts(SMALL_SAMPLES)
    };
    let lm_fr = crrlm_mb_round_trip(&crrlm_build(Crr::new(free()), two_sorted()), &lm_opts);
    let lm_fr_ok = min_cases(&lm_fr, SMALL_SAMPLES as u64);
    collect(&[(exc, exc_ok), (fr, fr_ok), (lm_exc, lm_exc_ok), (lm_fr, lm_fr_ok)])
}

fn criterion_7() -> Outcome {
    let ex = |r: Report| {
        let e = all_exhaustive(&r);
        (r, e)
    };
    let fr = psi_is_swap(&Crr::new(free()), &free_opts(SMALL_SAMPLES));
    let fr_ok = min_cases(&fr, SMALL_SAMPLES as u64);
    collect(&[
        ex(psi_is_swap(&Crr::new(variables()), &exhaustive_opts())),
        ex(psi_is_swap(&Crr::new(unit_carrier()), &exhaustive_opts())),
        ex(psi_is_swap(&Crr::new(exceptions()), &exhaustive_opts())),
        (fr, fr_ok),
    ])
}

fn homs<M: RelativeMonad, L: LeftModule<M>>(sys: &Crrlm<M, L>, y: Option<L::Elem>) -> Vec<(Report, bool)> {
    let opts = CheckOptions {
        samples: SMALL_SAMPLES,
        ..check_opts()
    };
    let tr = check_homomorphism(&sys.tr_hom(), &opts);
    let tr_ok = min_cases(&tr, SMALL_SAMPLES as u64);
    let mut out = vec![(tr, tr_ok)];
    match y.and_then(|y| sys.tr_bang(y)) {
        Some(h) => {
            let r = check_homomorphism(&h, &opts);
            let ok = min_cases(&r, SMALL_SAMPLES as u64);
            out.push((r, ok));
        }
        None => {
            let mut r = Report::new(format!("hom:tr!:{}", sys.name()));
            r.push(csys::Check::skipped("all", "no element at pt"));
            out.push((r, false));
        }
    }
    out
}

fn criterion_8() -> Outcome {
    let inst = free();
    let closed = inst.op("lam", vec![Tree::Var(0)]).expect("lam is in the signature");
    let ty = two_sorted().el(closed.clone()).expect("El is in the signature");
    let mut reports = Vec::new();
    reports.extend(homs(&crrlm_build(Crr::new(exceptions()), lm_of_rr()), Some(None)));
    reports.extend(homs(&crrlm_build(Crr::new(unit_carrier()), lm_of_rr()), Some(())));
    reports.extend(homs(&crrlm_build(Crr::new(inst.clone()), lm_of_rr()), Some(closed)));
    reports.extend(homs(&crrlm_build(Crr::new(inst), two_sorted()), Some(ty)));
    collect(&reports)
}

fn criterion_9() -> Outcome {
    let opts = SuiteOptions {
        samples: SMALL_SAMPLES,
        ..free_opts(SMALL_SAMPLES)
    };
    let lm_opts = SuiteOptions {
        max_ctx: 4,
        ..opts.clone()
    };
    let mut r = Report::new("closed-forms");
    let push = |r: &mut Report, label: &str, c: csys::Check| {
        let mut c = c;
        c.name = format!("{}:{label}", c.name);
        r.push(c);
    };
    push(&mut r, "free", qq_iter_closed_form(&free(), 6, &opts));
    push(&mut r, "exc", qq_iter_closed_form(&exceptions(), 1, &opts));
    let exc_lm = crrlm_build(Crr::new(exceptions()), lm_of_rr());
    let free_lm = crrlm_build(Crr::new(free()), two_sorted());
    push(&mut r, "exc-rrmod", star_iter_closed_form(&exc_lm, &lm_opts));
    push(&mut r, "free-two-sorted", star_iter_closed_form(&free_lm, &lm_opts));
    push(&mut r, "exc-rrmod", p_star_weakening_closed_form(&exc_lm, &lm_opts));
    push(&mut r, "free-two-sorted", p_star_weakening_closed_form(&free_lm, &lm_opts));
    let ok = min_cases(&r, SMALL_SAMPLES as u64);
    collect(&[(r, ok)])
}

fn criterion_10() -> Outcome {
    let bad = free().without_lifting();
    let laws = check_monad_laws(
        &bad,
        &LawOptions {
            samples: FREE_LAW_SAMPLES,
            ..law_opts()
        },
    );
    let bops = crr_bop_agreement(&Crr::new(bad), &free_opts(BOP_SAMPLES));
    let caught = |r: &Report, name: Option<&str>| {
        r.failing()
            .find(|c| name.is_none_or(|n| c.name == n))
            .and_then(|c| c.counterexample.clone())
    };
    let law_cx = caught(&laws, Some(ASSOC));
    let bop_cx = caught(&bops, None);
    let pass = law_cx.is_some() && bop_cx.is_some();
    let show = |cx: &Option<String>| cx.clone().unwrap_or_else(|| "not detected".into());
    Outcome {
        pass,
        detail: format!(
            "laws without lifting: {}; bops without lifting: {}",
            show(&law_cx),
            show(&bop_cx)
        ),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 10] = [
        ("relative-monad laws", criterion_1, Some(LAWS_LIMIT)),
        ("C0 axioms", criterion_2, Some(AXIOMS_LIMIT)),
        ("pullback universal property", criterion_3, Some(PULLBACK_LIMIT)),
        ("B-operations on C(RR)", criterion_4, None),
        ("B-operations on C(RR, LM)", criterion_5, None),
        ("mb round trips", criterion_6, None),
        ("psi is the swap", criterion_7, None),
        ("homomorphisms tr and tr!", criterion_8, None),
        ("closed forms", criterion_9, None),
        ("mutation sensitivity", criterion_10, None),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let took = start.elapsed();
        if let Some(limit) = limit {
            outcome = within(outcome, took, limit);
        }
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} [{tag}] {name} ({:.2}s): {}",
            i + 1,
            took.as_secs_f64(),
            outcome.detail
        );
        if !outcome.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
