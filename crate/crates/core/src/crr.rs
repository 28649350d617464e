//! The C-system `C(RR)`: the opposite of the Kleisli category.
//!
//! Objects are naturals `n̂` and a morphism `m̂ → n̂` is a Kleisli morphism
//! `n → m`. Sections `n̂ → (n+1)̂` are exactly the tuples
//! `(x_0, …, x_{n-1}, o)`, so `Õb` is identified with pairs `(n, o ∈ RR(n))`.

use std::fmt;

use crate::csystem::{self, BOp, BOpArgs, BOpValue, CSystem};
use crate::error::{Error, Result};
use crate::finfun::{delta, transposition, FinFun};
use crate::kleisli::{self, KMor};
use crate::relmonad::{rename, RelativeMonad, Term};
use crate::Prng;

/// A morphism of `C(RR)`, stored as the Kleisli morphism it reverses.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RrMor<E>(pub KMor<E>);

impl<E> RrMor<E> {
    pub fn dom(&self) -> usize {
        self.0.cod()
    }

    pub fn cod(&self) -> usize {
        self.0.dom()
    }

    pub fn kmor(&self) -> &KMor<E> {
        &self.0
    }
}

impl<E: fmt::Debug> fmt::Debug for RrMor<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}̂→{}̂ {:?}", self.dom(), self.cod(), self.0)
    }
}

/// An element `(n, r)` of `Õb'(C(RR)) = ⨿_n RR(n)`.
pub type BTilde<E> = Term<E>;

#[derive(Debug, Clone)]
pub struct Crr<M> {
    inst: M,
    size: usize,
}

impl<M: RelativeMonad> Crr<M> {
    pub fn new(inst: M) -> Self {
        Crr { inst, size: 6 }
    }

    /// Term size bound used by the samplers.
    pub fn with_size(mut self, size: usize) -> Self {
        self.size = size;
        self
    }

    pub fn inst(&self) -> &M {
        &self.inst
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mor(&self, k: KMor<M::Expr>) -> RrMor<M::Expr> {
        RrMor(k)
    }

    /// `mb(s) = (n, s(n))` for a section `s : n̂ → (n+1)̂`.
    pub fn mb(&self, s: &RrMor<M::Expr>) -> Result<BTilde<M::Expr>> {
        check_section(&self.inst, s)?;
        let n = s.dom();
        Ok(Term::new(n, s.0.comp(n).clone()))
    }

    /// `mb⁻¹(n, o) = (x_0^n, …, x_{n-1}^n, o)`.
    pub fn mb_inv(&self, b: &BTilde<M::Expr>) -> Result<RrMor<M::Expr>> {
        if !self.inst.is_element(b.ctx, &b.expr) {
            return Err(Error::IllFormed {
                ctx: b.ctx,
                detail: self.inst.encode(&b.expr).to_string(),
            });
        }
        Ok(RrMor(kleisli::section_tuple(&self.inst, b.ctx, &b.expr)))
    }

    /// `f*(s)` for `f : m̂ → n̂` and a section `s : (n+i)̂ → (n+i+1)̂`, by the
    /// closed formula `(x_0, …, x_{m+i-1}, ρ(qq^i(f))(s(n+i)))`.
    pub fn pullback_section(
        &self,
        f: &RrMor<M::Expr>,
        s: &RrMor<M::Expr>,
    ) -> Result<RrMor<M::Expr>> {
        check_section(&self.inst, s)?;
        let (m, n) = (f.dom(), f.cod());
        let top = s.dom();
        if top < n {
            return Err(Error::Structure(format!(
                "section at {top}̂ is not above {n}̂"
            )));
        }
        let i = top - n;
        let last = Term::new(top, s.0.comp(top).clone());
        let o = self.inst.bind(&kleisli::qq_iter(&self.inst, &f.0, i), &last)?;
        Ok(RrMor(kleisli::section_tuple(&self.inst, m + i, &o.expr)))
    }

    fn show_term(&self, t: &Term<M::Expr>) -> String {
        format!("({}, {})", t.ctx, self.inst.encode(&t.expr))
    }
}

fn check_section<M: RelativeMonad>(inst: &M, s: &RrMor<M::Expr>) -> Result<()> {
    let n = s.dom();
    if s.cod() != n + 1 {
        return Err(Error::SectionInvariant(format!(
            "{}̂ → {}̂ is not of the form n̂ → (n+1)̂",
            n,
            s.cod()
        )));
    }
    for i in 0..n {
        if *s.0.comp(i) != inst.unit(n, i) {
            return Err(Error::SectionInvariant(format!(
                "component {i} is {} instead of x_{i}",
                inst.encode(s.0.comp(i))
            )));
        }
    }
    Ok(())
}

impl<M: RelativeMonad> CSystem for Crr<M> {
    type Ob = usize;
    type Mor = RrMor<M::Expr>;

    fn name(&self) -> String {
        format!("crr:{}", self.inst.name())
    }

    fn length(&self, x: &usize) -> usize {
        *x
    }

    fn pt(&self) -> usize {
        0
    }

    fn ft(&self, x: &usize) -> usize {
        x.saturating_sub(1)
    }

    fn dom(&self, f: &Self::Mor) -> usize {
        f.dom()
    }

    fn cod(&self, f: &Self::Mor) -> usize {
        f.cod()
    }

    fn identity(&self, x: &usize) -> Self::Mor {
        RrMor(kleisli::t_identity(&self.inst, *x))
    }

    fn compose(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor> {
        kleisli::t_compose(&self.inst, &g.0, &f.0).map(RrMor)
    }

    fn p(&self, x: &usize) -> Self::Mor {
        let n = self.ft(x);
        RrMor(kleisli::from_finfun(&self.inst, &crate::finfun::iota(n, x - n)))
    }

    fn star(&self, f: &Self::Mor, y: &usize) -> Result<usize> {
        if *y == 0 || f.cod() != y - 1 {
            return Err(Error::Structure(format!(
                "f*(Y) needs f : X → ft(Y) with l(Y) > 0; got f into {}̂ and Y = {y}̂",
                f.cod()
            )));
        }
        Ok(f.dom() + 1)
    }

    fn q(&self, f: &Self::Mor, y: &usize) -> Result<Self::Mor> {
        self.star(f, y)?;
        Ok(RrMor(kleisli::qq(&self.inst, &f.0)))
    }

    /// `s_f = (x_0^m, …, x_{m-1}^m, f(n-1))`.
    fn section_of(&self, f: &Self::Mor) -> Result<Self::Mor> {
        let (m, n) = (f.dom(), f.cod());
        if n == 0 {
            return Err(Error::NoSection);
        }
        Ok(RrMor(kleisli::section_tuple(&self.inst, m, f.0.comp(n - 1))))
    }

    fn children(&self, x: &usize) -> Option<Vec<usize>> {
        Some(vec![x + 1])
    }

    fn homs(&self, x: &usize, y: &usize) -> Option<Vec<Self::Mor>> {
        Some(kleisli::all_kmors(&self.inst, *y, *x)?.into_iter().map(RrMor).collect())
    }

    fn sample_child(&self, x: &usize, _rng: &mut Prng) -> Option<usize> {
        Some(x + 1)
    }

    fn sample_mor(&self, x: &usize, y: &usize, rng: &mut Prng) -> Option<Self::Mor> {
        kleisli::sample_kmor(&self.inst, *y, *x, self.size, rng).map(RrMor)
    }

    fn sample_section(&self, x: &usize, rng: &mut Prng) -> Option<Self::Mor> {
        let n = x.checked_sub(1)?;
        let o = self.inst.sample(n, self.size, rng)?;
        Some(RrMor(kleisli::section_tuple(&self.inst, n, &o)))
    }

    fn show_mor(&self, f: &Self::Mor) -> String {
        format!("{}̂→{}̂ {}", f.dom(), f.cod(), kleisli::show(&self.inst, &f.0))
    }
}

/// Arguments of the B-set operations on `C(RR)` in their native form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RrArgs<E> {
    T { m: usize, n: usize },
    TTilde { m: usize, s: BTilde<E> },
    S { r: BTilde<E>, n: usize },
    STilde { r: BTilde<E>, s: BTilde<E> },
    Delta { n: usize },
}

impl<E> RrArgs<E> {
    pub fn op(&self) -> BOp {
        match self {
            RrArgs::T { .. } => BOp::T,
            RrArgs::TTilde { .. } => BOp::TTilde,
            RrArgs::S { .. } => BOp::S,
            RrArgs::STilde { .. } => BOp::STilde,
            RrArgs::Delta { .. } => BOp::Delta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RrValue<E> {
    Object(usize),
    Element(BTilde<E>),
}

fn domain(op: BOp, violated: &str) -> Error {
    Error::BopDomain {
        op: op.name(),
        violated: violated.to_string(),
    }
}

impl<M: RelativeMonad> Crr<M> {
    fn check_term(&self, t: &BTilde<M::Expr>) -> Result<()> {
        if self.inst.is_element(t.ctx, &t.expr) {
            Ok(())
        } else {
            Err(Error::IllFormed {
                ctx: t.ctx,
                detail: self.inst.encode(&t.expr).to_string(),
            })
        }
    }

    /// The B-set operations by their closed formulas.
    pub fn bop_explicit(&self, args: &RrArgs<M::Expr>) -> Result<RrValue<M::Expr>> {
        let op = args.op();
        match args {
            RrArgs::T { m, n } => {
                if *m == 0 {
                    return Err(domain(op, "m > 0"));
                }
                if *n < *m {
                    return Err(domain(op, "n > m - 1"));
                }
                Ok(RrValue::Object(n + 1))
            }
            RrArgs::TTilde { m, s } => {
                self.check_term(s)?;
                if *m == 0 {
                    return Err(domain(op, "m > 0"));
                }
                if s.ctx + 2 <= *m {
                    return Err(domain(op, "n + 1 > m - 1"));
                }
                let t = rename(&self.inst, &delta(m - 1, s.ctx)?, s)?;
                Ok(RrValue::Element(t))
            }
            RrArgs::S { r, n } => {
                self.check_term(r)?;
                if *n <= r.ctx + 1 {
                    return Err(domain(op, "n > m + 1"));
                }
                Ok(RrValue::Object(n - 1))
            }
            RrArgs::STilde { r, s } => {
                self.check_term(r)?;
                self.check_term(s)?;
                if s.ctx <= r.ctx {
                    return Err(domain(op, "n > m"));
                }
                kleisli::theta_rr(&self.inst, r, s).map(RrValue::Element)
            }
            RrArgs::Delta { n } => {
                if *n == 0 {
                    return Err(domain(op, "n > 0"));
                }
                Ok(RrValue::Element(Term::new(*n, self.inst.unit(*n, n - 1))))
            }
        }
    }

    /// The B-set operations by pullback in `C(RR)`, transported along `mb`.
    pub fn bop_definitional(&self, args: &RrArgs<M::Expr>) -> Result<RrValue<M::Expr>> {
        let generic = match args {
            RrArgs::T { m, n } => BOpArgs::T {
                gamma: *m,
                gamma2: *n,
            },
            RrArgs::TTilde { m, s } => BOpArgs::TTilde {
                gamma: *m,
                s: self.mb_inv(s)?,
            },
            RrArgs::S { r, n } => BOpArgs::S {
                r: self.mb_inv(r)?,
                gamma: *n,
            },
            RrArgs::STilde { r, s } => BOpArgs::STilde {
                r: self.mb_inv(r)?,
                s: self.mb_inv(s)?,
            },
            RrArgs::Delta { n } => BOpArgs::Delta { gamma: *n },
        };
        match csystem::bop(self, &generic).map_err(|e| rename_violation(args.op(), e))? {
            BOpValue::Object(x) => Ok(RrValue::Object(x)),
            BOpValue::Section(s) => self.mb(&s).map(RrValue::Element),
        }
    }

    /// `∂'((m, r)) = m + 1`.
    pub fn boundary(&self, b: &BTilde<M::Expr>) -> usize {
        b.ctx + 1
    }

    /// `ψ = ∂^0_2 ; ∂^0_3 ; θ_{3,4}(x_0^3, −) ; θ_{2,3}(x_1^2, −)` on `RR(2)`.
    pub fn psi(&self, t: &Term<M::Expr>) -> Result<Term<M::Expr>> {
        if t.ctx != 2 {
            return Err(Error::Arity {
                expected: 2,
                found: t.ctx,
            });
        }
        let a = rename(&self.inst, &delta(0, 2)?, t)?;
        let b = rename(&self.inst, &delta(0, 3)?, &a)?;
        let c = kleisli::theta_rr(&self.inst, &self.inst.eta(3, 0)?, &b)?;
        kleisli::theta_rr(&self.inst, &self.inst.eta(2, 1)?, &c)
    }

    /// The renaming by the transposition of `0` and `1` on `RR(2)`.
    pub fn swap01(&self, t: &Term<M::Expr>) -> Result<Term<M::Expr>> {
        let sigma: FinFun = transposition(2, 0, 1)?;
        rename(&self.inst, &sigma, t)
    }

    pub fn show_value(&self, v: &RrValue<M::Expr>) -> String {
        match v {
            RrValue::Object(n) => format!("{n}̂"),
            RrValue::Element(t) => self.show_term(t),
        }
    }
}

/// Restates a generic domain error with the numeric inequality used by the
/// closed formulas, so both routes name the same condition.
fn rename_violation(op: BOp, e: Error) -> Error {
    let Error::BopDomain { violated, .. } = &e else {
        return e;
    };
    let v = match (op, violated.as_str()) {
        (BOp::T | BOp::TTilde, "l(Γ) > 0") => "m > 0",
        (BOp::T, _) => "n > m - 1",
        (BOp::TTilde, _) => "n + 1 > m - 1",
        (BOp::S, _) => "n > m + 1",
        (BOp::STilde, _) => "n > m",
        (BOp::Delta, _) => "n > 0",
    };
    domain(op, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csystem::{check_c0_axioms, check_pullbacks, p_iter, q_iter, star_iter, CheckOptions};
    use crate::finfun::iota;
    use crate::relmonad::{exceptions, unit_carrier, variables, BindingSignature, FreeMonad, Tree};
    use rand::SeedableRng;

    #[test]
    fn structure_examples() {
        let c = Crr::new(variables());
        assert_eq!(c.ft(&0), 0);
        assert_eq!(c.p(&1), RrMor(KMor::new(1, vec![])));
        assert_eq!(c.p(&3), RrMor(KMor::new(3, vec![0, 1])));
        // composition with p drops the last component
        let g = RrMor(KMor::new(2, vec![1, 0, 1]));
        assert_eq!(c.compose(&g, &c.p(&3)).unwrap(), RrMor(KMor::new(2, vec![1, 0])));
    }

    #[test]
    fn iterated_structure() {
        let c = Crr::new(exceptions());
        let e = c.inst();
        for n in 0..4 {
            for i in 0..3 {
                assert_eq!(
                    p_iter(&c, &(n + i), i).unwrap(),
                    RrMor(kleisli::from_finfun(e, &iota(n, i)))
                );
            }
        }
        for m in 0..3 {
            for n in 0..3 {
                for f in c.homs(&m, &n).unwrap() {
                    for i in 0..3 {
                        assert_eq!(star_iter(&c, &f, &(n + i), i).unwrap(), m + i);
                        assert_eq!(
                            q_iter(&c, &f, &(n + i), i).unwrap(),
                            RrMor(kleisli::qq_iter(e, &f.0, i))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn sections() {
        let c = Crr::new(variables());
        for n in 1..4 {
            let s = c.section_of(&c.identity(&n)).unwrap();
            let mut d: Vec<usize> = (0..n).collect();
            d.push(n - 1);
            assert_eq!(s, RrMor(KMor::new(n, d)));
            assert_eq!(c.mb(&s).unwrap(), Term::new(n, n - 1));
        }
        // f : 2̂ → 1̂ given by ⟨v1⟩
        let f = RrMor(KMor::new(2, vec![1]));
        let s = c.section_of(&f).unwrap();
        assert_eq!(s, RrMor(KMor::new(2, vec![0, 1, 1])));
        assert!(matches!(c.section_of(&c.identity(&0)), Err(Error::NoSection)));
        // membership criterion
        for n in 0..3 {
            for g in c.homs(&n, &(n + 1)).unwrap() {
                let first_gens = (0..n).all(|i| *g.0.comp(i) == i);
                assert_eq!(csystem::is_section(&c, &g), first_gens);
            }
        }
    }

    #[test]
    fn pullback_section_examples() {
        let c = Crr::new(variables());
        // f = ⟨v0, v0⟩ : 2 → 1 reversed, s = (x_0, x_1, x_0) at 2̂
        let f = RrMor(KMor::new(1, vec![0, 0]));
        let s = RrMor(KMor::new(2, vec![0, 1, 0]));
        let out = c.pullback_section(&f, &s).unwrap();
        assert_eq!(out, RrMor(KMor::new(1, vec![0, 0])));
        let id = c.identity(&3);
        let s = c.mb_inv(&Term::new(3, 1)).unwrap();
        assert_eq!(c.pullback_section(&id, &s).unwrap(), s);
    }

    #[test]
    fn pullback_section_matches_star_mor() {
        let c = Crr::new(exceptions());
        for m in 0..3 {
            for n in 0..3 {
                for f in c.homs(&m, &n).unwrap() {
                    for i in 0..2 {
                        for o in c.inst().elements(n + i).unwrap() {
                            let s = c.mb_inv(&Term::new(n + i, o)).unwrap();
                            assert_eq!(
                                c.pullback_section(&f, &s).unwrap(),
                                csystem::star_mor(&c, &f, &s).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bop_examples() {
        let v = Crr::new(variables());
        assert_eq!(v.bop_explicit(&RrArgs::T { m: 1, n: 2 }).unwrap(), RrValue::Object(3));
        assert_eq!(
            v.bop_explicit(&RrArgs::Delta { n: 2 }).unwrap(),
            RrValue::Element(Term::new(2, 1))
        );
        let e = Crr::new(exceptions());
        let args = RrArgs::STilde {
            r: Term::new(0, None),
            s: Term::new(1, Some(0)),
        };
        assert_eq!(e.bop_explicit(&args).unwrap(), RrValue::Element(Term::new(0, None)));
        assert_eq!(e.bop_definitional(&args).unwrap(), RrValue::Element(Term::new(0, None)));
        for n in 0..5 {
            for m in 0..5 {
                let a = RrArgs::T { m, n };
                assert_eq!(v.bop_explicit(&a), v.bop_definitional(&a), "T({m},{n})");
            }
            let a = RrArgs::Delta { n };
            assert_eq!(v.bop_explicit(&a), v.bop_definitional(&a));
        }
        match v.bop_explicit(&RrArgs::S { r: Term::new(1, 0), n: 2 }) {
            Err(Error::BopDomain { violated, .. }) => assert_eq!(violated, "n > m + 1"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn psi_is_the_swap() {
        let v = Crr::new(variables());
        assert_eq!(v.psi(&Term::new(2, 0)).unwrap(), Term::new(2, 1));
        assert_eq!(v.psi(&Term::new(2, 1)).unwrap(), Term::new(2, 0));
        let free = Crr::new(FreeMonad::new(BindingSignature::lam_app()));
        let t = Term::new(2, Tree::Op(0, vec![Tree::Var(0), Tree::Var(1)]));
        assert_eq!(
            free.psi(&t).unwrap(),
            Term::new(2, Tree::Op(0, vec![Tree::Var(1), Tree::Var(0)]))
        );
        assert!(matches!(free.psi(&Term::new(1, Tree::Var(0))), Err(Error::Arity { .. })));
    }

    #[test]
    fn truncation_by_projections() {
        let c = Crr::new(FreeMonad::new(BindingSignature::lam_app()));
        let mut rng = Prng::seed_from_u64(1);
        for _ in 0..100 {
            let (m, n, i) = (2, 2, 3);
            let g = c.sample_mor(&m, &(n + i), &mut rng).unwrap();
            let h = c.compose(&g, &p_iter(&c, &(n + i), i).unwrap()).unwrap();
            assert_eq!(h.0.comps(), &g.0.comps()[..n]);
        }
    }

    #[test]
    fn axioms_and_pullbacks_on_small_instances() {
        let opts = CheckOptions {
            budget: 2,
            ..CheckOptions::default()
        };
        let r = check_c0_axioms(&Crr::new(unit_carrier()), &opts);
        assert!(r.passed(), "{r:?}");
        let r = check_pullbacks(&Crr::new(variables()), &opts);
        assert!(r.passed(), "{r:?}");
    }

    fn all_args<M: RelativeMonad>(c: &Crr<M>, max: usize) -> Vec<RrArgs<M::Expr>> {
        let terms = |n: usize| -> Vec<Term<M::Expr>> {
            c.inst().elements(n).unwrap().into_iter().map(|e| Term::new(n, e)).collect()
        };
        let mut out = Vec::new();
        for m in 0..=max {
            for n in 0..=max {
                out.push(RrArgs::T { m, n });
                for s in terms(n) {
                    out.push(RrArgs::TTilde { m, s: s.clone() });
                }
                for r in terms(m) {
                    out.push(RrArgs::S { r: r.clone(), n });
                    for s in terms(n) {
                        out.push(RrArgs::STilde { r: r.clone(), s });
                    }
                }
            }
            out.push(RrArgs::Delta { n: m });
        }
        out
    }

    #[test]
    fn explicit_matches_definitional_on_exceptions() {
        let c = Crr::new(exceptions());
        let mut defined = 0;
        for a in all_args(&c, 3) {
            let (x, d) = (c.bop_explicit(&a), c.bop_definitional(&a));
            assert_eq!(x, d, "{a:?}");
            defined += x.is_ok() as usize;
        }
        assert!(defined > 50, "{defined}");
    }

    #[test]
    fn unlifted_monad_breaks_substitution_pullback() {
        let good = Crr::new(FreeMonad::new(BindingSignature::lam_app()));
        let bad = Crr::new(good.inst().without_lifting());
        let r = Term::new(2, Tree::Op(1, vec![Tree::Var(2)]));
        let s = Term::new(5, Tree::Var(2));
        let a = RrArgs::STilde { r, s };
        assert_eq!(good.bop_explicit(&a), good.bop_definitional(&a));
        assert_ne!(bad.bop_explicit(&a), bad.bop_definitional(&a));
    }
}
