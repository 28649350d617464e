//! Cross-checking suites: explicit against definitional B-set operations,
//! `mb` round trips, `ψ = σ` and closed forms against their recursions.
//!
//! Every suite is exhaustive when the instance is enumerable and the case
//! count stays under `exhaustive_limit`, and sampled from `seed` otherwise.

use rand::{Rng, SeedableRng};

use crate::crr::{Crr, RrArgs};
use crate::crrlm::{BTildeLm, Crrlm, LeftModule, LmArgs, LmObj};
use crate::csystem::{extend_randomly, ft_iter, objects_up_to, star_iter, BOp, CSystem};
use crate::error::Result;
use crate::kleisli::{all_kmors, qq_iter, qq_iter_by_iteration, sample_kmor};
use crate::relmonad::{RelativeMonad, Term};
use crate::report::{Check, Report, Tally};
use crate::Prng;

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    /// Largest context (or object length) enumerated or sampled.
    pub max_ctx: usize,
    /// Cases per check when sampling.
    pub samples: usize,
    pub seed: u64,
    /// Largest number of cases run exhaustively.
    pub exhaustive_limit: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            max_ctx: 3,
            samples: 300,
            seed: 0,
            exhaustive_limit: 200_000,
        }
    }
}

/// Equal values, or errors of the same kind on both sides.
fn agree<T: PartialEq>(a: &Result<T>, b: &Result<T>) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => x == y,
        (Err(x), Err(y)) => x.kind() == y.kind(),
        _ => false,
    }
}

struct OpTallies {
    tallies: Vec<(Tally, u64)>,
}

impl OpTallies {
    fn new() -> Self {
        OpTallies {
            tallies: BOp::ALL.iter().map(|op| (Tally::new(op.name()), 0)).collect(),
        }
    }

    fn slot(op: BOp) -> usize {
        BOp::ALL.iter().position(|&o| o == op).expect("listed")
    }

    fn record<T: PartialEq>(&mut self, op: BOp, x: &Result<T>, d: &Result<T>, witness: impl FnOnce() -> String) {
        let (t, defined) = &mut self.tallies[Self::slot(op)];
        t.record(agree(x, d), || {
            let show = |r: &Result<T>| match r {
                Ok(_) => "value".to_string(),
                Err(e) => format!("error: {e}"),
            };
            format!("{} (explicit {}, definitional {})", witness(), show(x), show(d))
        });
        *defined += x.is_ok() as u64;
    }

    fn cases(&self, op: BOp) -> u64 {
        self.tallies[Self::slot(op)].0.cases()
    }

    fn finish(self, suite: String, note: &str) -> Report {
        let mut report = Report::new(suite);
        for (t, defined) in self.tallies {
            report.push(t.finish().with_note(format!("{note}, {defined} defined")));
        }
        report.sort();
        report
    }
}

fn sampled_note(seed: u64) -> String {
    format!("sampled, seed {seed}")
}

fn terms_of<M: RelativeMonad>(inst: &M, n: usize) -> Option<Vec<Term<M::Expr>>> {
    Some(inst.elements(n)?.into_iter().map(|e| Term::new(n, e)).collect())
}

/// All B-set arguments of `C(RR)` with contexts `≤ max`, when enumerable.
pub fn all_crr_args<M: RelativeMonad>(inst: &M, max: usize, limit: usize) -> Option<Vec<RrArgs<M::Expr>>> {
    let terms: Vec<Vec<Term<M::Expr>>> = (0..=max).map(|n| terms_of(inst, n)).collect::<Option<_>>()?;
    let total: usize = terms.iter().map(Vec::len).sum();
    if total.saturating_mul(total) > limit {
        return None;
    }
    let mut out = Vec::new();
    for m in 0..=max {
        out.push(RrArgs::Delta { n: m });
        for n in 0..=max {
            out.push(RrArgs::T { m, n });
            for s in &terms[n] {
                out.push(RrArgs::TTilde { m, s: s.clone() });
            }
            for r in &terms[m] {
                out.push(RrArgs::S { r: r.clone(), n });
                for s in &terms[n] {
                    out.push(RrArgs::STilde {
                        r: r.clone(),
                        s: s.clone(),
                    });
                }
            }
        }
    }
    Some(out)
}

/// Picks `(m, n)` with `n ≥ m + gap` most of the time, so that most samples
/// fall in the domain of the operation.
fn pick_pair(rng: &mut Prng, max: usize, lo: usize, gap: usize) -> (usize, usize) {
    if rng.gen_bool(0.15) || lo + gap > max {
        return (rng.gen_range(0..=max), rng.gen_range(0..=max));
    }
    let m = rng.gen_range(lo..=max - gap);
    (m, rng.gen_range(m + gap..=max))
}

fn sample_crr_args<M: RelativeMonad>(
    c: &Crr<M>,
    op: BOp,
    max: usize,
    rng: &mut Prng,
) -> Option<RrArgs<M::Expr>> {
    let term = |n: usize, rng: &mut Prng| c.inst().sample(n, c.size(), rng).map(|e| Term::new(n, e));
    Some(match op {
        BOp::T => {
            let (m, n) = pick_pair(rng, max, 1, 0);
            RrArgs::T { m, n }
        }
        BOp::TTilde => {
            let (m, n) = pick_pair(rng, max, 1, 0);
            RrArgs::TTilde {
                m,
                s: term(n.saturating_sub(1), rng)?,
            }
        }
        BOp::S => {
            let (m, n) = pick_pair(rng, max, 0, 2);
            RrArgs::S { r: term(m, rng)?, n }
        }
        BOp::STilde => {
            let (m, n) = pick_pair(rng, max, 0, 1);
            RrArgs::STilde {
                r: term(m, rng)?,
                s: term(n, rng)?,
            }
        }
        BOp::Delta => RrArgs::Delta {
            n: rng.gen_range(0..=max),
        },
    })
}

/// Explicit against definitional B-set operations on `C(RR)`, one check
/// per operation.
pub fn crr_bop_agreement<M: RelativeMonad>(c: &Crr<M>, opts: &SuiteOptions) -> Report {
    let suite = format!("bops:crr:{}", c.inst().name());
    let mut tallies = OpTallies::new();
    if let Some(args) = all_crr_args(c.inst(), opts.max_ctx, opts.exhaustive_limit) {
        for a in &args {
            let (x, d) = (c.bop_explicit(a), c.bop_definitional(a));
            tallies.record(a.op(), &x, &d, || format!("{a:?}"));
        }
        return tallies.finish(suite, "exhaustive");
    }
    let mut rng = Prng::seed_from_u64(opts.seed);
    for op in BOp::ALL {
        for _ in 0..opts.samples * 30 {
            if tallies.cases(op) >= opts.samples as u64 {
                break;
            }
            let Some(a) = sample_crr_args(c, op, opts.max_ctx, &mut rng) else {
                continue;
            };
            let (x, d) = (c.bop_explicit(&a), c.bop_definitional(&a));
            tallies.record(op, &x, &d, || format!("{a:?}"));
        }
    }
    tallies.finish(suite, &sampled_note(opts.seed))
}

type LmArgsOf<M, L> = LmArgs<<M as RelativeMonad>::Expr, <L as LeftModule<M>>::Elem>;
type BTildeOf<M, L> = BTildeLm<<M as RelativeMonad>::Expr, <L as LeftModule<M>>::Elem>;

fn all_btildes<M: RelativeMonad, L: LeftModule<M>>(
    sys: &Crrlm<M, L>,
    objects: &[LmObj<L::Elem>],
) -> Option<Vec<BTildeOf<M, L>>> {
    let mut out = Vec::new();
    for x in objects.iter().filter(|x| x.base > 0) {
        for r in sys.inst().elements(x.base - 1)? {
            out.push(BTildeLm {
                n: x.base - 1,
                gamma: x.tele.clone(),
                r,
            });
        }
    }
    Some(out)
}

/// All B-set arguments of `C(RR, LM)` whose objects have length `≤ max`.
pub fn all_crrlm_args<M: RelativeMonad, L: LeftModule<M>>(
    sys: &Crrlm<M, L>,
    max: usize,
    limit: usize,
) -> Option<Vec<LmArgsOf<M, L>>> {
    let obs = objects_up_to(sys, max)?;
    let bts = all_btildes(sys, &obs)?;
    let cases = (obs.len() + bts.len()).saturating_mul(obs.len() + bts.len());
    if cases > limit {
        return None;
    }
    let mut out = Vec::new();
    for x in &obs {
        out.push(LmArgs::Delta { x: x.clone() });
        for y in &obs {
            out.push(LmArgs::T {
                x: x.clone(),
                y: y.clone(),
            });
        }
        for s in &bts {
            out.push(LmArgs::TTilde {
                x: x.clone(),
                s: s.clone(),
            });
        }
    }
    for r in &bts {
        for y in &obs {
            out.push(LmArgs::S {
                r: r.clone(),
                y: y.clone(),
            });
        }
        for s in &bts {
            out.push(LmArgs::STilde {
                r: r.clone(),
                s: s.clone(),
            });
        }
    }
    Some(out)
}

fn sample_crrlm_args<M: RelativeMonad, L: LeftModule<M>>(
    sys: &Crrlm<M, L>,
    op: BOp,
    max: usize,
    rng: &mut Prng,
) -> Option<LmArgsOf<M, L>> {
    let wild = rng.gen_bool(0.15);
    let object = |len: usize, rng: &mut Prng| sys.sample_object(len, rng);
    Some(match op {
        BOp::T => {
            let m = rng.gen_range(1..=max.max(1));
            let x = object(m, rng)?;
            let y = if wild {
                object(rng.gen_range(0..=max), rng)?
            } else {
                extend_randomly(sys, &sys.ft(&x), rng.gen_range(1..=max + 1 - m + 1), rng)?
            };
            LmArgs::T { x, y }
        }
        BOp::TTilde => {
            let m = rng.gen_range(1..=max.max(1));
            let x = object(m, rng)?;
            let s = if wild {
                sys.sample_btilde(&sys.pt(), rng.gen_range(0..max), rng)?
            } else {
                sys.sample_btilde(&sys.ft(&x), rng.gen_range(0..=max + 1 - m), rng)?
            };
            LmArgs::TTilde { x, s }
        }
        BOp::S => {
            let r = sys.sample_btilde(&sys.pt(), rng.gen_range(0..max), rng)?;
            let below = if wild {
                sys.pt()
            } else {
                sys.obj(r.n + 1, r.gamma.clone()).ok()?
            };
            let y = extend_randomly(sys, &below, rng.gen_range(1..=2), rng)?;
            LmArgs::S { r, y }
        }
        BOp::STilde => {
            let r = sys.sample_btilde(&sys.pt(), rng.gen_range(0..max), rng)?;
            let below = if wild {
                sys.pt()
            } else {
                sys.obj(r.n + 1, r.gamma.clone()).ok()?
            };
            let s = sys.sample_btilde(&below, rng.gen_range(0..=2), rng)?;
            LmArgs::STilde { r, s }
        }
        BOp::Delta => LmArgs::Delta {
            x: object(rng.gen_range(0..=max), rng)?,
        },
    })
}

/// Explicit against definitional B-set operations on `C(RR, LM)`.
pub fn crrlm_bop_agreement<M: RelativeMonad, L: LeftModule<M>>(
    sys: &Crrlm<M, L>,
    opts: &SuiteOptions,
) -> Report {
    let suite = format!("bops:{}", sys.name());
    let mut tallies = OpTallies::new();
    if let Some(args) = all_crrlm_args(sys, opts.max_ctx, opts.exhaustive_limit) {
        for a in &args {
            let (x, d) = (sys.bop_lm_explicit(a), sys.bop_lm_definitional(a));
            tallies.record(a.op(), &x, &d, || format!("{a:?}"));
        }
        return tallies.finish(suite, "exhaustive");
    }
    let mut rng = Prng::seed_from_u64(opts.seed);
    for op in BOp::ALL {
        for _ in 0..opts.samples * 30 {
            if tallies.cases(op) >= opts.samples as u64 {
                break;
            }
            let Some(a) = sample_crrlm_args(sys, op, opts.max_ctx, &mut rng) else {
                continue;
            };
            let (x, d) = (sys.bop_lm_explicit(&a), sys.bop_lm_definitional(&a));
            tallies.record(op, &x, &d, || format!("{a:?}"));
        }
    }
    tallies.finish(suite, &sampled_note(opts.seed))
}

/// Drives a sampled check until `samples` cases were recorded.
fn sample_until(t: &mut Tally, samples: usize, mut step: impl FnMut(&mut Tally)) {
    for _ in 0..samples * 30 {
        if t.cases() >= samples as u64 {
            break;
        }
        step(t);
    }
}

/// `mb⁻¹ ∘ mb = id` on sections and `mb ∘ mb⁻¹ = id` on `Õb` of `C(RR)`,
/// plus rejection of non-sections.
pub fn crr_mb_round_trip<M: RelativeMonad>(c: &Crr<M>, opts: &SuiteOptions) -> Report {
    let mut report = Report::new(format!("mb:crr:{}", c.inst().name()));
    let mut there = Tally::new("mb-then-inverse");
    let mut back = Tally::new("inverse-then-mb");
    let mut reject = Tally::new("rejects-non-sections");
    let inst = c.inst();
    let enumerable = (0..=opts.max_ctx).all(|n| {
        crate::kleisli::count_kmors(inst, n + 1, n).is_some_and(|k| k as usize <= opts.exhaustive_limit)
    });
    let note = if enumerable {
        for n in 0..=opts.max_ctx {
            for k in all_kmors(inst, n + 1, n).expect("enumerable") {
                let s = c.mor(k);
                match c.mb(&s) {
                    Ok(b) => {
                        there.record_result(c.mb_inv(&b).map(|t| t == s), || format!("{s:?}"));
                        back.record_result(
                            c.mb_inv(&b).and_then(|t| c.mb(&t)).map(|b2| b2 == b),
                            || format!("{b:?}"),
                        );
                    }
                    Err(e) => reject.record(
                        matches!(e, crate::Error::SectionInvariant(_)),
                        || format!("{s:?}: {e}"),
                    ),
                }
            }
        }
        "exhaustive".to_string()
    } else {
        let mut rng = Prng::seed_from_u64(opts.seed);
        sample_until(&mut there, opts.samples, |t| {
            let n = rng.gen_range(0..=opts.max_ctx);
            let Some(s) = c.sample_section(&(n + 1), &mut rng) else {
                return;
            };
            t.record_result(c.mb(&s).and_then(|b| c.mb_inv(&b)).map(|s2| s2 == s), || {
                format!("{s:?}")
            });
        });
        sample_until(&mut back, opts.samples, |t| {
            let n = rng.gen_range(0..=opts.max_ctx);
            let Some(e) = inst.sample(n, c.size(), &mut rng) else {
                return;
            };
            let b = Term::new(n, e);
            t.record_result(c.mb_inv(&b).and_then(|s| c.mb(&s)).map(|b2| b2 == b), || {
                format!("{b:?}")
            });
        });
        sample_until(&mut reject, opts.samples, |t| {
            let n = rng.gen_range(1..=opts.max_ctx.max(1));
            let Some(k) = sample_kmor(inst, n + 1, n, c.size(), &mut rng) else {
                return;
            };
            let s = c.mor(k);
            if crate::csystem::is_section(c, &s) {
                return;
            }
            t.record(matches!(c.mb(&s), Err(crate::Error::SectionInvariant(_))), || {
                format!("{s:?}")
            });
        });
        sampled_note(opts.seed)
    };
    for t in [there, back, reject] {
        report.push(t.finish().with_note(note.clone()));
    }
    report.sort();
    report
}

/// The same round trips on `C(RR, LM)`.
pub fn crrlm_mb_round_trip<M: RelativeMonad, L: LeftModule<M>>(
    sys: &Crrlm<M, L>,
    opts: &SuiteOptions,
) -> Report {
    let mut report = Report::new(format!("mb:{}", sys.name()));
    let mut there = Tally::new("mb-then-inverse");
    let mut back = Tally::new("inverse-then-mb");
    let exhaustive = objects_up_to(sys, opts.max_ctx + 1).and_then(|obs| {
        let bts = all_btildes(sys, &obs)?;
        let mut sections = Vec::new();
        for y in obs.iter().filter(|y| y.base > 0) {
            let x = sys.ft(y);
            if crate::kleisli::count_kmors(sys.inst(), y.base, x.base)? as usize > opts.exhaustive_limit {
                return None;
            }
            sections.extend(sys.homs(&x, y)?.into_iter().filter(|s| crate::csystem::is_section(sys, s)));
        }
        Some((sections, bts))
    });
    let note = if let Some((sections, bts)) = exhaustive {
        for s in &sections {
            there.record_result(sys.mb_lm(s).and_then(|b| sys.mb_lm_inv(&b)).map(|t| t == *s), || {
                sys.show_mor(s)
            });
        }
        for b in &bts {
            back.record_result(sys.mb_lm_inv(b).and_then(|s| sys.mb_lm(&s)).map(|b2| b2 == *b), || {
                format!("{b:?}")
            });
        }
        "exhaustive".to_string()
    } else {
        let mut rng = Prng::seed_from_u64(opts.seed);
        sample_until(&mut there, opts.samples, |t| {
            let len = rng.gen_range(1..=opts.max_ctx + 1);
            let Some(y) = sys.sample_object(len, &mut rng) else {
                return;
            };
            let Some(s) = sys.sample_section(&y, &mut rng) else {
                return;
            };
            t.record_result(sys.mb_lm(&s).and_then(|b| sys.mb_lm_inv(&b)).map(|s2| s2 == s), || {
                sys.show_mor(&s)
            });
        });
        sample_until(&mut back, opts.samples, |t| {
            let extra = rng.gen_range(0..=opts.max_ctx);
            let Some(b) = sys.sample_btilde(&sys.pt(), extra, &mut rng) else {
                return;
            };
            t.record_result(sys.mb_lm_inv(&b).and_then(|s| sys.mb_lm(&s)).map(|b2| b2 == b), || {
                format!("{b:?}")
            });
        });
        sampled_note(opts.seed)
    };
    for t in [there, back] {
        report.push(t.finish().with_note(note.clone()));
    }
    report.sort();
    report
}

/// `ψ(t) = σ(t)` on `RR(2)`, exhaustively when `RR(2)` is finite.
pub fn psi_is_swap<M: RelativeMonad>(c: &Crr<M>, opts: &SuiteOptions) -> Report {
    let mut report = Report::new(format!("psi:{}", c.inst().name()));
    let mut t = Tally::new("psi-equals-swap");
    let check = |t: &mut Tally, e: M::Expr| {
        let term = Term::new(2, e);
        let ok = (|| Ok::<_, crate::Error>(c.psi(&term)? == c.swap01(&term)?))();
        t.record_result(ok, || format!("{term:?}"));
    };
    let result = match c.inst().elements(2) {
        Some(all) => {
            for e in all {
                check(&mut t, e);
            }
            t.finish().with_note("exhaustive")
        }
        None => {
            let mut rng = Prng::seed_from_u64(opts.seed);
            sample_until(&mut t, opts.samples, |t| {
                if let Some(e) = c.inst().sample(2, c.size(), &mut rng) {
                    check(t, e);
                }
            });
            t.finish().with_note(sampled_note(opts.seed))
        }
    };
    report.push(result);
    report
}

/// Closed form of `qq^i` against `i` single steps.
pub fn qq_iter_closed_form<M: RelativeMonad>(inst: &M, size: usize, opts: &SuiteOptions) -> Check {
    let mut rng = Prng::seed_from_u64(opts.seed);
    let mut t = Tally::new("qq-iter");
    sample_until(&mut t, opts.samples, |t| {
        let (n, m) = (rng.gen_range(0..=opts.max_ctx), rng.gen_range(0..=opts.max_ctx));
        let i = rng.gen_range(0..=opts.max_ctx);
        let Some(f) = sample_kmor(inst, n, m, size, &mut rng) else {
            return;
        };
        t.record(qq_iter(inst, &f, i) == qq_iter_by_iteration(inst, &f, i), || {
            format!("f = {f:?}, i = {i}")
        });
    });
    t.finish().with_note(sampled_note(opts.seed))
}

/// The closed form of `f*(Y, i)` on `C(RR, LM)` against iterated one-step pullbacks.
pub fn star_iter_closed_form<M: RelativeMonad, L: LeftModule<M>>(
    sys: &Crrlm<M, L>,
    opts: &SuiteOptions,
) -> Check {
    let mut rng = Prng::seed_from_u64(opts.seed);
    let mut t = Tally::new("star-iter-ext");
    sample_until(&mut t, opts.samples, |t| {
        let ly = rng.gen_range(0..=opts.max_ctx);
        let Some(y) = sys.sample_object(ly, &mut rng) else {
            return;
        };
        let i = rng.gen_range(0..=ly);
        let z = ft_iter(sys, &y, i);
        let Some(x) = sys.sample_object(rng.gen_range(0..=opts.max_ctx), &mut rng) else {
            return;
        };
        let Some(f) = sys.sample_mor(&x, &z, &mut rng) else {
            return;
        };
        let ok = (|| Ok::<_, crate::Error>(sys.star_iter_closed(&f, &y, i)? == star_iter(sys, &f, &y, i)?))();
        t.record_result(ok, || format!("f = {}, Y = {}, i = {i}", sys.show_mor(&f), sys.show_ob(&y)));
    });
    t.finish().with_note(sampled_note(opts.seed))
}

/// The closed form of `p_Y*(X)` against the iterated pullback along `p_Y`.
pub fn p_star_weakening_closed_form<M: RelativeMonad, L: LeftModule<M>>(
    sys: &Crrlm<M, L>,
    opts: &SuiteOptions,
) -> Check {
    let mut rng = Prng::seed_from_u64(opts.seed);
    let mut t = Tally::new("p-star-weakening");
    sample_until(&mut t, opts.samples, |t| {
        let m = rng.gen_range(0..=opts.max_ctx);
        let Some(x) = sys.sample_object(m, &mut rng) else {
            return;
        };
        let n = rng.gen_range(1..=m + 1);
        let Some(y) = sys.sample_child(&ft_iter(sys, &x, m + 1 - n), &mut rng) else {
            return;
        };
        let ok = (|| {
            Ok::<_, crate::Error>(
                sys.p_star_weakening(&x, &y)? == star_iter(sys, &sys.p(&y), &x, m + 1 - n)?,
            )
        })();
        t.record_result(ok, || format!("X = {}, Y = {}", sys.show_ob(&x), sys.show_ob(&y)));
    });
    t.finish().with_note(sampled_note(opts.seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crrlm::{crrlm_build, lm_of_rr, TwoSortedModule, TypeSignature};
    use crate::relmonad::{exceptions, BindingSignature, FreeMonad};

    fn small() -> SuiteOptions {
        SuiteOptions {
            samples: 60,
            ..SuiteOptions::default()
        }
    }

    #[test]
    fn exception_suites_are_exhaustive_and_pass() {
        let c = Crr::new(exceptions());
        for r in [crr_bop_agreement(&c, &small()), crr_mb_round_trip(&c, &small()), psi_is_swap(&c, &small())] {
            assert!(r.passed(), "{r:?}");
            assert!(r.checks.iter().all(|k| k.note.as_deref().unwrap().starts_with("exhaustive")));
        }
        let sys = crrlm_build(Crr::new(exceptions()), lm_of_rr());
        let r = crrlm_bop_agreement(&sys, &small());
        assert!(r.passed(), "{r:?}");
        assert!(r.check("T").unwrap().note.as_deref().unwrap().starts_with("exhaustive"));
        assert!(crrlm_mb_round_trip(&sys, &small()).passed());
    }

    #[test]
    fn free_suites_pass_sampled() {
        let inst = FreeMonad::new(BindingSignature::lam_app());
        let c = Crr::new(inst.clone());
        assert!(crr_bop_agreement(&c, &small()).passed());
        assert!(psi_is_swap(&c, &small()).passed());
        let sys = crrlm_build(Crr::new(inst), TwoSortedModule::new(TypeSignature::el_pi()));
        let r = crrlm_bop_agreement(&sys, &small());
        assert!(r.passed(), "{r:?}");
        for k in &r.checks {
            assert_eq!(k.cases, 60, "{k:?}");
        }
        assert_eq!(star_iter_closed_form(&sys, &small()).status, crate::Status::Pass);
        assert_eq!(p_star_weakening_closed_form(&sys, &small()).status, crate::Status::Pass);
    }
}
