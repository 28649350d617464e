//! Generic C-systems and their derived calculus.
//!
//! [`CSystem`] carries the structure (length, `ft`, `p`, `f*`, `q`) together
//! with optional enumerators and samplers used by the checkers. Everything
//! else here (iterated projections and pullbacks, the order `≤`, morphisms
//! over an object, `f*(a)`, the B-set operations) is derived from it.

mod bops;
mod checks;
mod hom;

use std::fmt::Debug;
use std::hash::Hash;

pub use bops::{bop, BOp, BOpArgs, BOpValue};
pub use checks::{check_c0_axioms, check_pullbacks, check_star_mor_uniqueness, CheckOptions};
pub use hom::{check_homomorphism, CHom, IdentityHom};

use crate::error::{Error, Result};
use crate::Prng;

pub trait CSystem {
    type Ob: Clone + Eq + Hash + Debug;
    type Mor: Clone + Eq + Hash + Debug;

    fn name(&self) -> String;

    fn length(&self, x: &Self::Ob) -> usize;
    fn pt(&self) -> Self::Ob;
    fn ft(&self, x: &Self::Ob) -> Self::Ob;

    fn dom(&self, f: &Self::Mor) -> Self::Ob;
    fn cod(&self, f: &Self::Mor) -> Self::Ob;
    fn identity(&self, x: &Self::Ob) -> Self::Mor;
    /// Diagrammatic composition: `f` first, then `g`.
    fn compose(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;

    /// `p_X : X → ft(X)`; the identity on `pt`.
    fn p(&self, x: &Self::Ob) -> Self::Mor;
    /// `f*(Y)` for `f : X → ft(Y)` and `l(Y) > 0`.
    fn star(&self, f: &Self::Mor, y: &Self::Ob) -> Result<Self::Ob>;
    /// `q(f, Y) : f*(Y) → Y`.
    fn q(&self, f: &Self::Mor, y: &Self::Ob) -> Result<Self::Mor>;

    /// The canonical section `s_f : X → ft(f)*(Y)` of `f : X → Y`, `l(Y) > 0`,
    /// characterised by `s_f ∘ p = Id` and `s_f ∘ q(ft(f), Y) = f`.
    fn section_of(&self, f: &Self::Mor) -> Result<Self::Mor>;

    /// All `Y` with `ft(Y) = x` and `l(Y) = l(x) + 1`, when finite.
    fn children(&self, x: &Self::Ob) -> Option<Vec<Self::Ob>> {
        let _ = x;
        None
    }

    /// All morphisms `x → y`, when finite.
    fn homs(&self, x: &Self::Ob, y: &Self::Ob) -> Option<Vec<Self::Mor>> {
        let _ = (x, y);
        None
    }

    fn sample_child(&self, x: &Self::Ob, rng: &mut Prng) -> Option<Self::Ob>;
    fn sample_mor(&self, x: &Self::Ob, y: &Self::Ob, rng: &mut Prng) -> Option<Self::Mor>;
    /// A random section `ft(x) → x`.
    fn sample_section(&self, x: &Self::Ob, rng: &mut Prng) -> Option<Self::Mor>;

    fn show_ob(&self, x: &Self::Ob) -> String {
        format!("{x:?}")
    }

    fn show_mor(&self, f: &Self::Mor) -> String {
        format!("{f:?}")
    }

    fn objects_of_length(&self, n: usize) -> Option<Vec<Self::Ob>> {
        let mut level = vec![self.pt()];
        for _ in 0..n {
            let mut next = Vec::new();
            for x in &level {
                next.extend(self.children(x)?);
            }
            level = next;
        }
        Some(level)
    }

    fn sample_object(&self, n: usize, rng: &mut Prng) -> Option<Self::Ob> {
        let mut x = self.pt();
        for _ in 0..n {
            x = self.sample_child(&x, rng)?;
        }
        Some(x)
    }
}

pub fn ft_iter<C: CSystem>(cc: &C, x: &C::Ob, i: usize) -> C::Ob {
    (0..i).fold(x.clone(), |y, _| cc.ft(&y))
}

fn depth_error<C: CSystem>(cc: &C, x: &C::Ob, i: usize) -> Error {
    Error::Structure(format!(
        "depth {i} exceeds the length of {}",
        cc.show_ob(x)
    ))
}

/// `p_{X,i} : X → ft^i(X)`.
pub fn p_iter<C: CSystem>(cc: &C, x: &C::Ob, i: usize) -> Result<C::Mor> {
    if i > cc.length(x) {
        return Err(depth_error(cc, x, i));
    }
    let mut acc = cc.identity(x);
    let mut y = x.clone();
    for _ in 0..i {
        acc = cc.compose(&acc, &cc.p(&y))?;
        y = cc.ft(&y);
    }
    Ok(acc)
}

fn check_iter_target<C: CSystem>(cc: &C, f: &C::Mor, y: &C::Ob, i: usize) -> Result<()> {
    if i > cc.length(y) {
        return Err(depth_error(cc, y, i));
    }
    let target = ft_iter(cc, y, i);
    if cc.cod(f) != target {
        return Err(Error::Structure(format!(
            "codomain {} is not ft^{i}({}) = {}",
            cc.show_ob(&cc.cod(f)),
            cc.show_ob(y),
            cc.show_ob(&target)
        )));
    }
    Ok(())
}

/// `f*(Y, i)` for `f : X → ft^i(Y)`.
pub fn star_iter<C: CSystem>(cc: &C, f: &C::Mor, y: &C::Ob, i: usize) -> Result<C::Ob> {
    check_iter_target(cc, f, y, i)?;
    if i == 0 {
        return Ok(cc.dom(f));
    }
    let g = q_iter(cc, f, &cc.ft(y), i - 1)?;
    cc.star(&g, y)
}

/// `q(f, Y, i) : f*(Y, i) → Y` for `f : X → ft^i(Y)`.
pub fn q_iter<C: CSystem>(cc: &C, f: &C::Mor, y: &C::Ob, i: usize) -> Result<C::Mor> {
    check_iter_target(cc, f, y, i)?;
    let mut g = f.clone();
    for k in (0..i).rev() {
        g = cc.q(&g, &ft_iter(cc, y, k))?;
    }
    Ok(g)
}

/// `X ≤ Y`: `X` is an iterated father of `Y`.
pub fn leq<C: CSystem>(cc: &C, x: &C::Ob, y: &C::Ob) -> bool {
    let (lx, ly) = (cc.length(x), cc.length(y));
    lx <= ly && ft_iter(cc, y, ly - lx) == *x
}

pub fn lt<C: CSystem>(cc: &C, x: &C::Ob, y: &C::Ob) -> bool {
    cc.length(x) < cc.length(y) && leq(cc, x, y)
}

/// `p_{Y, X} : Y → X` for `X ≤ Y`.
pub fn p_over<C: CSystem>(cc: &C, y: &C::Ob, x: &C::Ob) -> Result<C::Mor> {
    if !leq(cc, x, y) {
        return Err(Error::Structure(format!(
            "{} is not below {}",
            cc.show_ob(x),
            cc.show_ob(y)
        )));
    }
    p_iter(cc, y, cc.length(y) - cc.length(x))
}

/// Whether `f : Γ' → Γ''` is a morphism over `Γ`.
pub fn is_over<C: CSystem>(cc: &C, f: &C::Mor, base: &C::Ob) -> Result<bool> {
    let (src, dst) = (cc.dom(f), cc.cod(f));
    let lhs = cc.compose(f, &p_over(cc, &dst, base)?)?;
    Ok(lhs == p_over(cc, &src, base)?)
}

/// `f*(Y')` for `f : Γ → Δ` and `Δ ≤ Y'`.
pub fn star_over<C: CSystem>(cc: &C, f: &C::Mor, y: &C::Ob) -> Result<C::Ob> {
    let delta = cc.cod(f);
    if !leq(cc, &delta, y) {
        return Err(Error::Structure(format!(
            "{} is not above {}",
            cc.show_ob(y),
            cc.show_ob(&delta)
        )));
    }
    star_iter(cc, f, y, cc.length(y) - cc.length(&delta))
}

/// `q(f, Y') : f*(Y') → Y'` for `f : Γ → Δ` and `Δ ≤ Y'`.
pub fn q_over<C: CSystem>(cc: &C, f: &C::Mor, y: &C::Ob) -> Result<C::Mor> {
    let delta = cc.cod(f);
    if !leq(cc, &delta, y) {
        return Err(Error::Structure(format!(
            "{} is not above {}",
            cc.show_ob(y),
            cc.show_ob(&delta)
        )));
    }
    q_iter(cc, f, y, cc.length(y) - cc.length(&delta))
}

/// Whether `s` is a section of `p_{cod(s)}`.
pub fn is_section<C: CSystem>(cc: &C, s: &C::Mor) -> bool {
    let (src, dst) = (cc.dom(s), cc.cod(s));
    cc.length(&dst) > 0
        && cc.ft(&dst) == src
        && cc
            .compose(s, &cc.p(&dst))
            .is_ok_and(|id| id == cc.identity(&src))
}

/// `f*(a) : f*(Γ') → f*(Γ'')` for `f : Γ → Δ` and `a : Γ' → Γ''` over `Δ`.
///
/// The unique morphism over `Γ` with `f*(a) ∘ q(f, Γ'') = q(f, Γ') ∘ a`. It is
/// built one pullback square at a time: a morphism `h` into `g*(Y)` is fixed
/// by `u = h ∘ p` and `v = h ∘ q(g, Y)`, and equals `s_v ∘ q(u, g*(Y))`.
pub fn star_mor<C: CSystem>(cc: &C, f: &C::Mor, a: &C::Mor) -> Result<C::Mor> {
    let delta = cc.cod(f);
    let (src, dst) = (cc.dom(a), cc.cod(a));
    if !leq(cc, &delta, &src) || !leq(cc, &delta, &dst) {
        return Err(Error::Structure(format!(
            "f*(a) needs both ends of a above {}",
            cc.show_ob(&delta)
        )));
    }
    if !is_over(cc, a, &delta)? {
        return Err(Error::Structure(format!(
            "{} is not a morphism over {}",
            cc.show_mor(a),
            cc.show_ob(&delta)
        )));
    }
    star_mor_rec(cc, f, a)
}

fn star_mor_rec<C: CSystem>(cc: &C, f: &C::Mor, a: &C::Mor) -> Result<C::Mor> {
    let delta = cc.cod(f);
    let (src, dst) = (cc.dom(a), cc.cod(a));
    let k = cc.length(&dst) - cc.length(&delta);
    let top = star_over(cc, f, &src)?;
    if k == 0 {
        return p_over(cc, &top, &cc.dom(f));
    }
    let u = star_mor_rec(cc, f, &cc.compose(a, &cc.p(&dst))?)?;
    let g = q_iter(cc, f, &cc.ft(&dst), k - 1)?;
    let v = cc.compose(&q_over(cc, f, &src)?, a)?;
    let target = cc.star(&g, &dst)?;
    cc.compose(&cc.section_of(&v)?, &cc.q(&u, &target)?)
}

/// A random morphism over `base`: a projection down to some `Θ ≥ base`
/// followed by a tower of random sections back up. Returns `None` when a
/// sampler comes up empty.
pub fn sample_over<C: CSystem>(
    cc: &C,
    base: &C::Ob,
    max_extra: usize,
    rng: &mut Prng,
) -> Option<C::Mor> {
    use rand::Rng;
    let theta = extend_randomly(cc, base, rng.gen_range(0..=max_extra), rng)?;
    let src = extend_randomly(cc, &theta, rng.gen_range(0..=max_extra), rng)?;
    let mut a = p_over(cc, &src, &theta).ok()?;
    let mut here = theta;
    for _ in 0..rng.gen_range(0..=max_extra) {
        let next = cc.sample_child(&here, rng)?;
        let s = cc.sample_section(&next, rng)?;
        a = cc.compose(&a, &s).ok()?;
        here = next;
    }
    Some(a)
}

pub fn extend_randomly<C: CSystem>(
    cc: &C,
    x: &C::Ob,
    steps: usize,
    rng: &mut Prng,
) -> Option<C::Ob> {
    let mut y = x.clone();
    for _ in 0..steps {
        y = cc.sample_child(&y, rng)?;
    }
    Some(y)
}

/// Every object `Y ≥ x` with `l(Y) ≤ l(x) + extra`, when enumerable.
pub fn objects_above<C: CSystem>(cc: &C, x: &C::Ob, extra: usize) -> Option<Vec<C::Ob>> {
    let mut out = vec![x.clone()];
    let mut level = vec![x.clone()];
    for _ in 0..extra {
        let mut next = Vec::new();
        for y in &level {
            next.extend(cc.children(y)?);
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    Some(out)
}

/// Every object of length at most `n`, when enumerable.
pub fn objects_up_to<C: CSystem>(cc: &C, n: usize) -> Option<Vec<C::Ob>> {
    objects_above(cc, &cc.pt(), n)
}
