//! Law checker for relative monads.

use rand::{Rng, SeedableRng};

use super::{rename, RelativeMonad, Term};
use crate::finfun::FinFun;
use crate::kleisli::{self, KMor};
use crate::report::{Check, Report, Tally};
use crate::Prng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LawOptions {
    /// Largest context size touched.
    pub max_n: usize,
    /// Cases per law when sampling.
    pub samples: usize,
    pub seed: u64,
    /// Term size bound for samplers.
    pub size: usize,
    /// Exhaustive checking is used when the estimated case count stays below this.
    pub exhaustive_limit: u64,
}

impl Default for LawOptions {
    fn default() -> Self {
        LawOptions {
            max_n: 3,
            samples: 300,
            seed: 0,
            size: 8,
            exhaustive_limit: 20_000_000,
        }
    }
}

pub const UNIT_RIGHT: &str = "extend-unit";
pub const UNIT_LEFT: &str = "extend-on-generators";
pub const ASSOC: &str = "extend-composition";
pub const RENAME_FUNCTOR: &str = "renaming-functoriality";

pub fn check_monad_laws<M: RelativeMonad>(inst: &M, opts: &LawOptions) -> Report {
    let mut report = Report::new(format!("laws:{}", inst.name()));
    let checks = match exhaustive_cost(inst, opts.max_n) {
        Some(cost) if cost <= opts.exhaustive_limit => exhaustive(inst, opts.max_n),
        _ => sampled(inst, opts),
    };
    for c in checks {
        report.push(c);
    }
    report.sort();
    report
}

fn exhaustive_cost<M: RelativeMonad>(inst: &M, max_n: usize) -> Option<u64> {
    let mut total = 0u64;
    for l in 0..=max_n {
        let carrier = inst.elements(l)?.len() as u64;
        for m in 0..=max_n {
            for n in 0..=max_n {
                let f = kleisli::count_kmors(inst, l, m)?;
                let g = kleisli::count_kmors(inst, m, n)?;
                total = total.saturating_add(carrier.saturating_mul(f).saturating_mul(g));
            }
        }
    }
    Some(total)
}

fn term<M: RelativeMonad>(inst: &M, t: &Term<M::Expr>) -> String {
    format!("{}@{}", inst.encode(&t.expr), t.ctx)
}

fn law_unit<M: RelativeMonad>(inst: &M, tally: &mut Tally, t: &Term<M::Expr>) {
    let got = inst.bind(&kleisli::t_identity(inst, t.ctx), t);
    let ok = got.as_ref().map(|g| g == t);
    tally.record_result(ok, || match &got {
        Ok(g) => format!("t = {}, ρ(η)(t) = {}", term(inst, t), term(inst, g)),
        Err(_) => format!("t = {}", term(inst, t)),
    });
}

fn law_generators<M: RelativeMonad>(inst: &M, tally: &mut Tally, f: &KMor<M::Expr>) {
    for i in 0..f.dom() {
        let x = Term::new(f.dom(), inst.unit(f.dom(), i));
        let got = inst.bind(f, &x);
        let expect = Term::new(f.cod(), f.comp(i).clone());
        let ok = got.as_ref().map(|g| *g == expect);
        tally.record_result(ok, || match &got {
            Ok(g) => format!(
                "f = {}, i = {i}, ρ(f)(x_i) = {}",
                kleisli::show(inst, f),
                term(inst, g)
            ),
            Err(_) => format!("f = {}, i = {i}", kleisli::show(inst, f)),
        });
    }
}

fn law_assoc<M: RelativeMonad>(
    inst: &M,
    tally: &mut Tally,
    f: &KMor<M::Expr>,
    g: &KMor<M::Expr>,
    t: &Term<M::Expr>,
) {
    let run = || -> crate::Result<(Term<M::Expr>, Term<M::Expr>)> {
        let lhs = inst.bind(g, &inst.bind(f, t)?)?;
        let rhs = inst.bind(&kleisli::t_compose(inst, f, g)?, t)?;
        Ok((lhs, rhs))
    };
    let out = run();
    let ok = out.as_ref().map(|(a, b)| a == b);
    tally.record_result(ok, || {
        let base = format!(
            "f = {}, g = {}, t = {}",
            kleisli::show(inst, f),
            kleisli::show(inst, g),
            term(inst, t)
        );
        match &out {
            Ok((a, b)) => format!("{base}: {} ≠ {}", term(inst, a), term(inst, b)),
            Err(_) => base,
        }
    });
}

fn law_rename<M: RelativeMonad>(
    inst: &M,
    tally: &mut Tally,
    a: &FinFun,
    b: &FinFun,
    t: &Term<M::Expr>,
) {
    let run = || -> crate::Result<bool> {
        let lhs = rename(inst, &a.then(b)?, t)?;
        let rhs = rename(inst, b, &rename(inst, a, t)?)?;
        let id = rename(inst, &FinFun::identity(t.ctx), t)?;
        Ok(lhs == rhs && id == *t)
    };
    tally.record_result(run(), || {
        format!("a = {a:?}, b = {b:?}, t = {}", term(inst, t))
    });
}

fn exhaustive<M: RelativeMonad>(inst: &M, max_n: usize) -> Vec<Check> {
    let mut unit = Tally::new(UNIT_RIGHT);
    let mut gens = Tally::new(UNIT_LEFT);
    let mut assoc = Tally::new(ASSOC);
    let mut ren = Tally::new(RENAME_FUNCTOR);
    let carriers: Vec<Vec<M::Expr>> = (0..=max_n)
        .map(|n| inst.elements(n).unwrap_or_default())
        .collect();
    for (n, carrier) in carriers.iter().enumerate() {
        for e in carrier {
            law_unit(inst, &mut unit, &Term::new(n, e.clone()));
        }
    }
    for m in 0..=max_n {
        for n in 0..=max_n {
            for f in kleisli::all_kmors(inst, m, n).unwrap_or_default() {
                law_generators(inst, &mut gens, &f);
            }
        }
    }
    for l in 0..=max_n {
        for m in 0..=max_n {
            let fs = kleisli::all_kmors(inst, l, m).unwrap_or_default();
            for n in 0..=max_n {
                let gs = kleisli::all_kmors(inst, m, n).unwrap_or_default();
                for f in &fs {
                    for g in &gs {
                        for e in &carriers[l] {
                            law_assoc(inst, &mut assoc, f, g, &Term::new(l, e.clone()));
                        }
                    }
                }
            }
        }
    }
    for a in 0..=max_n {
        for b in 0..=max_n {
            for c in 0..=max_n {
                for fa in FinFun::all(a, b) {
                    for fb in FinFun::all(b, c) {
                        for e in &carriers[a] {
                            law_rename(inst, &mut ren, &fa, &fb, &Term::new(a, e.clone()));
                        }
                    }
                }
            }
        }
    }
    [unit, gens, assoc, ren]
        .into_iter()
        .map(|t| t.finish().with_note("exhaustive"))
        .collect()
}

fn random_finfun(a: usize, b: usize, rng: &mut Prng) -> Option<FinFun> {
    if a > 0 && b == 0 {
        return None;
    }
    FinFun::new(b, (0..a).map(|_| rng.gen_range(0..b)).collect()).ok()
}

fn sampled<M: RelativeMonad>(inst: &M, opts: &LawOptions) -> Vec<Check> {
    let mut rng = Prng::seed_from_u64(opts.seed);
    let (max_n, size) = (opts.max_n, opts.size);
    let attempts = opts.samples.saturating_mul(50).max(1);
    let mut unit = Tally::new(UNIT_RIGHT);
    let mut gens = Tally::new(UNIT_LEFT);
    let mut assoc = Tally::new(ASSOC);
    let mut ren = Tally::new(RENAME_FUNCTOR);

    // Each law draws until it has `samples` cases; empty carriers just cost an attempt.
    let mut tries = 0;
    while (unit.cases() as usize) < opts.samples && tries < attempts {
        tries += 1;
        let n = rng.gen_range(0..=max_n);
        if let Some(e) = inst.sample(n, size, &mut rng) {
            law_unit(inst, &mut unit, &Term::new(n, e));
        }
    }
    let mut tries = 0;
    let mut drawn = 0;
    while drawn < opts.samples && tries < attempts {
        tries += 1;
        let (m, n) = (rng.gen_range(1..=max_n.max(1)), rng.gen_range(0..=max_n));
        if let Some(f) = kleisli::sample_kmor(inst, m, n, size, &mut rng) {
            drawn += 1;
            law_generators(inst, &mut gens, &f);
        }
    }
    let mut tries = 0;
    while (assoc.cases() as usize) < opts.samples && tries < attempts {
        tries += 1;
        let (l, m, n) = (
            rng.gen_range(0..=max_n),
            rng.gen_range(0..=max_n),
            rng.gen_range(0..=max_n),
        );
        let f = kleisli::sample_kmor(inst, l, m, size, &mut rng);
        let g = kleisli::sample_kmor(inst, m, n, size, &mut rng);
        let t = inst.sample(l, size, &mut rng);
        if let (Some(f), Some(g), Some(t)) = (f, g, t) {
            law_assoc(inst, &mut assoc, &f, &g, &Term::new(l, t));
        }
    }
    let mut tries = 0;
    while (ren.cases() as usize) < opts.samples && tries < attempts {
        tries += 1;
        let (a, b, c) = (
            rng.gen_range(0..=max_n),
            rng.gen_range(0..=max_n),
            rng.gen_range(0..=max_n),
        );
        let fa = random_finfun(a, b, &mut rng);
        let fb = random_finfun(b, c, &mut rng);
        let t = inst.sample(a, size, &mut rng);
        if let (Some(fa), Some(fb), Some(t)) = (fa, fb, t) {
            law_rename(inst, &mut ren, &fa, &fb, &Term::new(a, t));
        }
    }
    [unit, gens, assoc, ren]
        .into_iter()
        .map(|t| t.finish().with_note(format!("sampled, seed {}", opts.seed)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relmonad::{exceptions, unit_carrier, variables, BindingSignature, FreeMonad};
    use crate::report::Status;

    #[test]
    fn finite_instances_pass_exhaustively() {
        let opts = LawOptions::default();
        for r in [
            check_monad_laws(&variables(), &opts),
            check_monad_laws(&exceptions(), &opts),
            check_monad_laws(&unit_carrier(), &opts),
        ] {
            assert!(r.passed(), "{r:?}");
            assert!(r.checks.iter().all(|c| c.note.as_deref() == Some("exhaustive")));
            assert_eq!(r.checks.len(), 4);
        }
    }

    #[test]
    fn free_instance_passes_sampled() {
        let free = FreeMonad::new(BindingSignature::lam_app());
        let opts = LawOptions {
            samples: 200,
            seed: 3,
            ..LawOptions::default()
        };
        let r = check_monad_laws(&free, &opts);
        assert!(r.passed(), "{r:?}");
        assert!(r.checks.iter().all(|c| c.cases >= 200));
    }

    #[test]
    fn unlifted_substitution_is_caught() {
        let broken = FreeMonad::new(BindingSignature::lam_app()).without_lifting();
        let opts = LawOptions {
            samples: 300,
            seed: 11,
            ..LawOptions::default()
        };
        let r = check_monad_laws(&broken, &opts);
        let c = r.check(ASSOC).unwrap();
        assert_eq!(c.status, Status::Fail);
        assert!(c.counterexample.is_some());
    }
}
