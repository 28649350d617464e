//! Homomorphisms of C-systems and a sampling checker for their basic
//! compatibilities.

use rand::{Rng, SeedableRng};

use super::{
    extend_randomly, leq, lt, p_iter, sample_over, star_mor, star_over, CSystem, CheckOptions,
};
use crate::report::{Report, Tally};
use crate::Prng;

/// Candidate functor data between two C-systems.
pub trait CHom {
    type Src: CSystem;
    type Dst: CSystem;

    fn name(&self) -> String;
    fn src(&self) -> &Self::Src;
    fn dst(&self) -> &Self::Dst;
    fn ob(&self, x: &<Self::Src as CSystem>::Ob) -> <Self::Dst as CSystem>::Ob;
    fn mor(&self, f: &<Self::Src as CSystem>::Mor) -> <Self::Dst as CSystem>::Mor;
}

pub struct IdentityHom<'a, C>(pub &'a C);

impl<C: CSystem> CHom for IdentityHom<'_, C> {
    type Src = C;
    type Dst = C;

    fn name(&self) -> String {
        format!("id:{}", self.0.name())
    }
    fn src(&self) -> &C {
        self.0
    }
    fn dst(&self) -> &C {
        self.0
    }
    fn ob(&self, x: &C::Ob) -> C::Ob {
        x.clone()
    }
    fn mor(&self, f: &C::Mor) -> C::Mor {
        f.clone()
    }
}

/// Draws until `want` cases were produced or the attempt budget runs out.
fn sample_loop(want: usize, mut draw: impl FnMut() -> bool) {
    let mut got = 0;
    for _ in 0..want.saturating_mul(30) {
        if got >= want {
            break;
        }
        if draw() {
            got += 1;
        }
    }
}

/// Checks on sampled data that `h` is a functor preserving `pt`, `l`, `ft`,
/// and that it commutes with iterated projections, the order, pullbacks of
/// objects and of morphisms, and the diagonal sections.
pub fn check_homomorphism<H: CHom>(h: &H, opts: &CheckOptions) -> Report {
    let (a, b) = (h.src(), h.dst());
    let mut report = Report::new(format!("hom:{}", h.name()));
    let mut rng = Prng::seed_from_u64(opts.seed);
    let n = opts.samples;
    let max = opts.budget;

    let mut t = Tally::new("structure");
    t.record(h.ob(&a.pt()) == b.pt(), || "F(pt) ≠ pt".into());
    sample_loop(n, || {
        let len = rng.gen_range(0..=max);
        let Some(x) = a.sample_object(len, &mut rng) else {
            return false;
        };
        let fx = h.ob(&x);
        let ok = b.length(&fx) == a.length(&x)
            && h.ob(&a.ft(&x)) == b.ft(&fx)
            && h.mor(&a.p(&x)) == b.p(&fx)
            && h.mor(&a.identity(&x)) == b.identity(&fx);
        t.record(ok, || a.show_ob(&x));
        true
    });
    report.push(t.finish());

    let mut t = Tally::new("functor-composition");
    sample_loop(n, || {
        let obs: Option<Vec<_>> = (0..3)
            .map(|_| {
                let len = rng.gen_range(0..=max);
                a.sample_object(len, &mut rng)
            })
            .collect();
        let Some(obs) = obs else { return false };
        let (Some(f), Some(g)) = (
            a.sample_mor(&obs[0], &obs[1], &mut rng),
            a.sample_mor(&obs[1], &obs[2], &mut rng),
        ) else {
            return false;
        };
        let ok = a
            .compose(&f, &g)
            .and_then(|fg| Ok(h.mor(&fg) == b.compose(&h.mor(&f), &h.mor(&g))?));
        t.record_result(ok, || format!("{} ; {}", a.show_mor(&f), a.show_mor(&g)));
        true
    });
    report.push(t.finish());

    let mut t = Tally::new("p-iter");
    sample_loop(n, || {
        let len = rng.gen_range(0..=max);
        let Some(x) = a.sample_object(len, &mut rng) else {
            return false;
        };
        let i = rng.gen_range(0..=len);
        let ok = (|| Ok::<_, crate::Error>(h.mor(&p_iter(a, &x, i)?) == p_iter(b, &h.ob(&x), i)?))();
        t.record_result(ok, || format!("X = {}, i = {i}", a.show_ob(&x)));
        true
    });
    report.push(t.finish());

    let mut t = Tally::new("order");
    sample_loop(n, || {
        let len = rng.gen_range(0..=max);
        let Some(x) = a.sample_object(len, &mut rng) else {
            return false;
        };
        // Half the pairs are comparable by construction, half are unrelated.
        let y = if rng.gen_bool(0.5) {
            let extra = rng.gen_range(0..=max - len);
            extend_randomly(a, &x, extra, &mut rng)
        } else {
            let len2 = rng.gen_range(0..=max);
            a.sample_object(len2, &mut rng)
        };
        let Some(y) = y else { return false };
        let (fx, fy) = (h.ob(&x), h.ob(&y));
        let ok = (!leq(a, &x, &y) || leq(b, &fx, &fy)) && (!lt(a, &x, &y) || lt(b, &fx, &fy));
        t.record(ok, || format!("{} ≤ {}", a.show_ob(&x), a.show_ob(&y)));
        true
    });
    report.push(t.finish());

    let mut t = Tally::new("star-objects");
    sample_loop(n, || {
        let dl = rng.gen_range(0..=max);
        let gl = rng.gen_range(0..=max);
        let (Some(delta), Some(gamma)) = (a.sample_object(dl, &mut rng), a.sample_object(gl, &mut rng))
        else {
            return false;
        };
        let extra = rng.gen_range(0..=max.saturating_sub(dl).max(1));
        let Some(y) = extend_randomly(a, &delta, extra, &mut rng) else {
            return false;
        };
        let Some(f) = a.sample_mor(&gamma, &delta, &mut rng) else {
            return false;
        };
        let ok = (|| {
            Ok::<_, crate::Error>(h.ob(&star_over(a, &f, &y)?) == star_over(b, &h.mor(&f), &h.ob(&y))?)
        })();
        t.record_result(ok, || format!("f = {}, Y = {}", a.show_mor(&f), a.show_ob(&y)));
        true
    });
    report.push(t.finish());

    let mut t = Tally::new("star-morphisms");
    sample_loop(n, || {
        let dl = rng.gen_range(0..=max);
        let gl = rng.gen_range(0..=max);
        let (Some(delta), Some(gamma)) = (a.sample_object(dl, &mut rng), a.sample_object(gl, &mut rng))
        else {
            return false;
        };
        let Some(f) = a.sample_mor(&gamma, &delta, &mut rng) else {
            return false;
        };
        let Some(m) = sample_over(a, &delta, 2, &mut rng) else {
            return false;
        };
        let ok = (|| {
            Ok::<_, crate::Error>(h.mor(&star_mor(a, &f, &m)?) == star_mor(b, &h.mor(&f), &h.mor(&m))?)
        })();
        t.record_result(ok, || format!("f = {}, a = {}", a.show_mor(&f), a.show_mor(&m)));
        true
    });
    report.push(t.finish());

    let mut t = Tally::new("delta");
    sample_loop(n, || {
        let len = rng.gen_range(1..=max.max(1));
        let Some(x) = a.sample_object(len, &mut rng) else {
            return false;
        };
        let ok = (|| {
            let lhs = h.mor(&a.section_of(&a.identity(&x))?);
            Ok::<_, crate::Error>(lhs == b.section_of(&b.identity(&h.ob(&x)))?)
        })();
        t.record_result(ok, || a.show_ob(&x));
        true
    });
    report.push(t.finish());

    report.sort();
    report
}
