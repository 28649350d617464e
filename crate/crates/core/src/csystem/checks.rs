//! Axiom and pullback checkers.
//!
//! Systems whose objects and hom-sets can be listed are checked exhaustively
//! up to the length budget; the rest are checked on seeded samples.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};

use super::{is_over, objects_above, objects_up_to, p_iter, q_over, star_mor, star_over, CSystem};
use crate::report::{Check, Report, Tally};
use crate::Prng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Largest object length considered.
    pub budget: usize,
    /// Cases per check when sampling.
    pub samples: usize,
    pub seed: u64,
    /// Above this many enumerated cases a check falls back to sampling.
    pub exhaustive_limit: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            budget: 3,
            samples: 300,
            seed: 0,
            exhaustive_limit: 2_000_000,
        }
    }
}

/// Where test data comes from.
enum Source<O> {
    All(Vec<O>),
    Sampled,
}

fn source<C: CSystem>(cc: &C, budget: usize) -> Source<C::Ob> {
    match objects_up_to(cc, budget) {
        Some(obs) => {
            let pt = cc.pt();
            if obs.iter().all(|x| cc.homs(x, &pt).is_some()) {
                Source::All(obs)
            } else {
                Source::Sampled
            }
        }
        None => Source::Sampled,
    }
}

fn random_object<C: CSystem>(cc: &C, max_len: usize, min_len: usize, rng: &mut Prng) -> Option<C::Ob> {
    if min_len > max_len {
        return None;
    }
    let n = rng.gen_range(min_len..=max_len);
    cc.sample_object(n, rng)
}

/// Pairs `(f : X → ft(Y), Y)` with `l(Y) > 0`.
fn star_pairs<C: CSystem>(
    cc: &C,
    src: &Source<C::Ob>,
    opts: &CheckOptions,
    rng: &mut Prng,
) -> Vec<(C::Mor, C::Ob)> {
    let mut out = Vec::new();
    match src {
        Source::All(obs) => {
            for y in obs.iter().filter(|y| cc.length(y) > 0) {
                let base = cc.ft(y);
                for x in obs {
                    for f in cc.homs(x, &base).unwrap_or_default() {
                        out.push((f, y.clone()));
                    }
                }
            }
        }
        Source::Sampled => {
            let mut tries = 0;
            while out.len() < opts.samples && tries < opts.samples * 20 {
                tries += 1;
                let (Some(y), Some(x)) = (
                    random_object(cc, opts.budget, 1, rng),
                    random_object(cc, opts.budget, 0, rng),
                ) else {
                    continue;
                };
                if let Some(f) = cc.sample_mor(&x, &cc.ft(&y), rng) {
                    out.push((f, y));
                }
            }
        }
    }
    out
}

/// Composable pairs `(f, g)`.
fn composable<C: CSystem>(
    cc: &C,
    src: &Source<C::Ob>,
    opts: &CheckOptions,
    rng: &mut Prng,
) -> Vec<(C::Mor, C::Mor)> {
    let mut out = Vec::new();
    match src {
        Source::All(obs) => {
            'outer: for x in obs {
                for y in obs {
                    let fs = cc.homs(x, y).unwrap_or_default();
                    for z in obs {
                        let gs = cc.homs(y, z).unwrap_or_default();
                        for f in &fs {
                            for g in &gs {
                                out.push((f.clone(), g.clone()));
                                if out.len() >= opts.exhaustive_limit {
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
        }
        Source::Sampled => {
            let mut tries = 0;
            while out.len() < opts.samples && tries < opts.samples * 20 {
                tries += 1;
                let obs: Option<Vec<C::Ob>> =
                    (0..3).map(|_| random_object(cc, opts.budget, 0, rng)).collect();
                let Some(obs) = obs else { continue };
                let f = cc.sample_mor(&obs[0], &obs[1], rng);
                let g = cc.sample_mor(&obs[1], &obs[2], rng);
                if let (Some(f), Some(g)) = (f, g) {
                    out.push((f, g));
                }
            }
        }
    }
    out
}

pub fn check_c0_axioms<C: CSystem>(cc: &C, opts: &CheckOptions) -> Report {
    let mut report = Report::new(format!("c0:{}", cc.name()));
    let mut rng = Prng::seed_from_u64(opts.seed);
    let src = source(cc, opts.budget);
    let note = match &src {
        Source::All(_) => "exhaustive".to_string(),
        Source::Sampled => format!("sampled, seed {}", opts.seed),
    };
    let objects: Vec<C::Ob> = match &src {
        Source::All(obs) => obs.clone(),
        Source::Sampled => (0..opts.samples)
            .filter_map(|_| random_object(cc, opts.budget, 0, &mut rng))
            .collect(),
    };
    let pt = cc.pt();

    let mut t = Tally::new("pt-unique");
    t.record(cc.length(&pt) == 0, || "l(pt) ≠ 0".into());
    match cc.objects_of_length(0) {
        Some(zero) => t.record(zero == vec![pt.clone()], || format!("length-0 objects: {zero:?}")),
        None => {
            for x in objects.iter().filter(|x| cc.length(x) == 0) {
                t.record(*x == pt, || format!("{} has length 0", cc.show_ob(x)));
            }
        }
    }
    report.push(t.finish());

    let mut t = Tally::new("ft-pt");
    t.record(cc.ft(&pt) == pt, || format!("ft(pt) = {}", cc.show_ob(&cc.ft(&pt))));
    report.push(t.finish());

    let mut t = Tally::new("ft-length");
    for x in objects.iter().filter(|x| cc.length(x) > 0) {
        t.record(cc.length(&cc.ft(x)) + 1 == cc.length(x), || cc.show_ob(x));
    }
    report.push(t.finish());

    let mut t = Tally::new("p-typing");
    for x in objects.iter().filter(|x| cc.length(x) > 0) {
        let p = cc.p(x);
        t.record(cc.dom(&p) == *x && cc.cod(&p) == cc.ft(x), || cc.show_ob(x));
    }
    report.push(t.finish());

    let mut t = Tally::new("pt-final");
    for x in &objects {
        let canonical = p_iter(cc, x, cc.length(x));
        match cc.homs(x, &pt) {
            Some(all) => t.record(
                all.len() == 1 && canonical.as_ref().ok() == all.first(),
                || format!("{} has {} maps to pt", cc.show_ob(x), all.len()),
            ),
            None => {
                let f = cc.sample_mor(x, &pt, &mut rng);
                t.record(
                    canonical.is_ok() && (f.is_none() || f.as_ref() == canonical.as_ref().ok()),
                    || format!("two maps {} → pt", cc.show_ob(x)),
                );
            }
        }
    }
    report.push(t.finish());

    let pairs = composable(cc, &src, opts, &mut rng);
    let mut seen = std::collections::HashSet::new();
    let mors: Vec<C::Mor> = pairs
        .iter()
        .filter(|(f, _)| seen.insert(f.clone()))
        .map(|(f, _)| f.clone())
        .collect();
    let mut ident = Tally::new("category-identity");
    for f in &mors {
        let l = cc.compose(&cc.identity(&cc.dom(f)), f);
        let r = cc.compose(f, &cc.identity(&cc.cod(f)));
        ident.record(l.as_ref() == Ok(f) && r.as_ref() == Ok(f), || cc.show_mor(f));
    }
    report.push(ident.finish());

    let mut assoc = Tally::new("category-associativity");
    let mut by_dom: HashMap<C::Ob, Vec<C::Mor>> = HashMap::new();
    for (_, g) in &pairs {
        by_dom.entry(cc.dom(g)).or_default().push(g.clone());
    }
    let mut budget = if matches!(src, Source::All(_)) {
        opts.exhaustive_limit
    } else {
        opts.samples
    };
    'assoc: for (f, g) in &pairs {
        let hs = by_dom.get(&cc.cod(g)).cloned().unwrap_or_default();
        let take = if matches!(src, Source::All(_)) { hs.len() } else { hs.len().min(1) };
        for h in hs.iter().take(take) {
            if budget == 0 {
                break 'assoc;
            }
            budget -= 1;
            let ok = (|| {
                let l = cc.compose(&cc.compose(f, g)?, h)?;
                let r = cc.compose(f, &cc.compose(g, h)?)?;
                Ok::<_, crate::Error>(l == r)
            })();
            assoc.record_result(ok, || {
                format!("{} ; {} ; {}", cc.show_mor(f), cc.show_mor(g), cc.show_mor(h))
            });
        }
    }
    report.push(assoc.finish());

    let star_cases = star_pairs(cc, &src, opts, &mut rng);
    let mut typing = Tally::new("star-typing");
    let mut square = Tally::new("q-square");
    let mut sec = Tally::new("section-of");
    for (f, y) in &star_cases {
        let run = || -> crate::Result<(bool, bool)> {
            let fy = cc.star(f, y)?;
            let q = cc.q(f, y)?;
            let typed = cc.length(&fy) == cc.length(&cc.dom(f)) + 1
                && cc.ft(&fy) == cc.dom(f)
                && cc.dom(&q) == fy
                && cc.cod(&q) == *y;
            let sq = cc.compose(&q, &cc.p(y))? == cc.compose(&cc.p(&fy), f)?;
            Ok((typed, sq))
        };
        let out = run();
        let show = || format!("f = {}, Y = {}", cc.show_mor(f), cc.show_ob(y));
        typing.record_result(out.as_ref().map(|o| o.0).map_err(|e| e.clone()), show);
        square.record_result(out.map(|o| o.1), show);
    }
    // Sections of every morphism into an object of positive length.
    for f in mors.iter().filter(|f| cc.length(&cc.cod(f)) > 0) {
        let run = || -> crate::Result<bool> {
            let s = cc.section_of(f)?;
            let top = cc.cod(f);
            let ftf = cc.compose(f, &cc.p(&top))?;
            let lands = cc.cod(&s) == cc.star(&ftf, &top)?;
            let splits = cc.compose(&s, &cc.p(&cc.cod(&s)))? == cc.identity(&cc.dom(f));
            let factors = cc.compose(&s, &cc.q(&ftf, &top)?)? == *f;
            Ok(lands && splits && factors)
        };
        sec.record_result(run(), || cc.show_mor(f));
    }
    report.push(typing.finish());
    report.push(square.finish());
    report.push(sec.finish());

    let mut sid = Tally::new("star-identity");
    for y in objects.iter().filter(|y| cc.length(y) > 0) {
        let id = cc.identity(&cc.ft(y));
        let ok = (|| Ok::<_, crate::Error>(cc.star(&id, y)? == *y && cc.q(&id, y)? == cc.identity(y)))();
        sid.record_result(ok, || cc.show_ob(y));
    }
    report.push(sid.finish());

    let mut scomp = Tally::new("star-composition");
    let mut by_cod: HashMap<C::Ob, Vec<C::Mor>> = HashMap::new();
    for (f, _) in &pairs {
        by_cod.entry(cc.cod(f)).or_default().push(f.clone());
    }
    let mut budget = if matches!(src, Source::All(_)) {
        opts.exhaustive_limit
    } else {
        opts.samples
    };
    'comp: for (g, y) in &star_cases {
        let fs = by_cod.get(&cc.dom(g)).cloned().unwrap_or_default();
        let take = if matches!(src, Source::All(_)) { fs.len() } else { fs.len().min(1) };
        for f in fs.iter().take(take) {
            if budget == 0 {
                break 'comp;
            }
            budget -= 1;
            let ok = (|| {
                let fg = cc.compose(f, g)?;
                let gy = cc.star(g, y)?;
                let obj = cc.star(&fg, y)? == cc.star(f, &gy)?;
                let mor = cc.q(&fg, y)? == cc.compose(&cc.q(f, &gy)?, &cc.q(g, y)?)?;
                Ok::<_, crate::Error>(obj && mor)
            })();
            scomp.record_result(ok, || {
                format!("f = {}, g = {}, Y = {}", cc.show_mor(f), cc.show_mor(g), cc.show_ob(y))
            });
        }
    }
    report.push(scomp.finish());

    for c in report.checks.iter_mut() {
        if c.note.is_none() {
            c.note = Some(note.clone());
        }
    }
    report.sort();
    report
}

/// Brute-force universal property of every canonical square
/// `q(f, Y) ∘ p_Y = p_{f*Y} ∘ f`: each commuting cone from every test object
/// factors through `f*(Y)` exactly once.
pub fn check_pullbacks<C: CSystem>(cc: &C, opts: &CheckOptions) -> Report {
    let mut report = Report::new(format!("pullbacks:{}", cc.name()));
    let Source::All(obs) = source(cc, opts.budget) else {
        report.push(Check::skipped(
            "canonical-squares",
            "hom-sets are not enumerable for this instance",
        ));
        return report;
    };
    let mut rng = Prng::seed_from_u64(opts.seed);
    let src = Source::All(obs.clone());
    let mut t = Tally::new("canonical-squares");
    for (f, y) in star_pairs(cc, &src, opts, &mut rng) {
        let x = cc.dom(&f);
        let run = || -> crate::Result<Option<String>> {
            let fy = cc.star(&f, &y)?;
            let q = cc.q(&f, &y)?;
            let pf = cc.p(&fy);
            let py = cc.p(&y);
            for w in &obs {
                let (Some(as_), Some(bs), Some(hs)) =
                    (cc.homs(w, &x), cc.homs(w, &y), cc.homs(w, &fy))
                else {
                    return Ok(Some("enumeration unavailable".into()));
                };
                let mut left: HashMap<C::Mor, u64> = HashMap::new();
                for a in &as_ {
                    *left.entry(cc.compose(a, &f)?).or_default() += 1;
                }
                let mut cones = 0u64;
                for b in &bs {
                    cones += left.get(&cc.compose(b, &py)?).copied().unwrap_or(0);
                }
                let mut seen = HashMap::new();
                for h in &hs {
                    let a = cc.compose(h, &pf)?;
                    let b = cc.compose(h, &q)?;
                    if cc.compose(&a, &f)? != cc.compose(&b, &py)? {
                        return Ok(Some(format!("{} gives a non-commuting cone", cc.show_mor(h))));
                    }
                    if seen.insert((a, b), h.clone()).is_some() {
                        return Ok(Some(format!(
                            "two factorizations from {} (one is {})",
                            cc.show_ob(w),
                            cc.show_mor(h)
                        )));
                    }
                }
                if seen.len() as u64 != cones {
                    return Ok(Some(format!(
                        "{} of {} cones from {} factor",
                        seen.len(),
                        cones,
                        cc.show_ob(w)
                    )));
                }
            }
            Ok(None)
        };
        let out = run();
        let witness = match &out {
            Ok(Some(why)) => why.clone(),
            _ => String::new(),
        };
        t.record_result(out.map(|o| o.is_none()), || {
            format!("f = {}, Y = {}: {witness}", cc.show_mor(&f), cc.show_ob(&y))
        });
    }
    report.push(t.finish().with_note("exhaustive"));
    report
}

/// On enumerable systems, `f*(a)` is the only morphism over `Γ` with
/// `f*(a) ∘ q(f, Γ'') = q(f, Γ') ∘ a`.
pub fn check_star_mor_uniqueness<C: CSystem>(cc: &C, opts: &CheckOptions) -> Report {
    let mut report = Report::new(format!("star-mor:{}", cc.name()));
    let Source::All(obs) = source(cc, opts.budget) else {
        report.push(Check::skipped("unique-solution", "hom-sets are not enumerable"));
        return report;
    };
    let mut t = Tally::new("unique-solution");
    let mut left = opts.exhaustive_limit;
    'all: for delta in &obs {
        let above = objects_above(cc, delta, opts.budget - cc.length(delta)).unwrap_or_default();
        for gamma in &obs {
            for f in cc.homs(gamma, delta).unwrap_or_default() {
                for g1 in &above {
                    for g2 in &above {
                        for a in cc.homs(g1, g2).unwrap_or_default() {
                            if !is_over(cc, &a, delta).unwrap_or(false) {
                                continue;
                            }
                            if left == 0 {
                                break 'all;
                            }
                            left -= 1;
                            let run = || -> crate::Result<bool> {
                                let got = star_mor(cc, &f, &a)?;
                                let (s1, s2) = (star_over(cc, &f, g1)?, star_over(cc, &f, g2)?);
                                let rhs = cc.compose(&q_over(cc, &f, g1)?, &a)?;
                                let q2 = q_over(cc, &f, g2)?;
                                let mut solutions = Vec::new();
                                for h in cc.homs(&s1, &s2).unwrap_or_default() {
                                    if cc.compose(&h, &q2)? == rhs && is_over(cc, &h, gamma)? {
                                        solutions.push(h);
                                    }
                                }
                                Ok(solutions == vec![got])
                            };
                            t.record_result(run(), || {
                                format!("f = {}, a = {}", cc.show_mor(&f), cc.show_mor(&a))
                            });
                        }
                    }
                }
            }
        }
    }
    report.push(t.finish().with_note("exhaustive"));
    report
}
