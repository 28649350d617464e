//! Relative monads on the inclusion `Jf` of standard finite sets into sets.
//!
//! A [`RelativeMonad`] supplies the carriers `RR(n)`, the generators
//! `x_i^n = η(n)(i)` and the Kleisli extension `ρ`. Expressions are untagged
//! payloads; [`Term`] pairs a payload with the context it lives in.

mod free;
mod laws;
mod set_monad;

use std::fmt;
use std::hash::Hash;

use serde_json::Value;

pub use free::{BindingSignature, FreeMonad, OpSpec, Tree};
pub use laws::{check_monad_laws, LawOptions, ASSOC, RENAME_FUNCTOR, UNIT_LEFT, UNIT_RIGHT};
pub use set_monad::{
    exceptions, unit_carrier, variables, ExceptionMonad, Exceptions, FromSetMonad, IdentityMonad,
    SetMonad, TerminalMonad, UnitCarrier, Variables,
};

use crate::error::{Error, Result};
use crate::finfun::FinFun;
use crate::kleisli::{self, KMor};
use crate::Prng;

/// An element of `RR(ctx)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Term<E> {
    pub ctx: usize,
    pub expr: E,
}

impl<E> Term<E> {
    pub fn new(ctx: usize, expr: E) -> Self {
        Term { ctx, expr }
    }
}

impl<E: fmt::Debug> fmt::Debug for Term<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@{}", self.expr, self.ctx)
    }
}

pub trait RelativeMonad {
    type Expr: Clone + Eq + Hash + fmt::Debug;

    fn name(&self) -> String;

    /// Payload of `x_i^n`. Callers guarantee `i < n`.
    fn unit(&self, n: usize, i: usize) -> Self::Expr;

    /// `ρ(f)(e)` on payloads. Callers guarantee `e ∈ RR(f.dom())`.
    fn extend(&self, f: &KMor<Self::Expr>, e: &Self::Expr) -> Self::Expr;

    fn is_element(&self, n: usize, e: &Self::Expr) -> bool;

    /// Every element of `RR(n)`, each exactly once, when the carrier is finite.
    fn elements(&self, n: usize) -> Option<Vec<Self::Expr>> {
        let _ = n;
        None
    }

    /// A random element of `RR(n)` of size at most `size`, or `None` when
    /// the sampler finds none (for instance because `RR(n)` is empty).
    fn sample(&self, n: usize, size: usize, rng: &mut Prng) -> Option<Self::Expr>;

    fn encode(&self, e: &Self::Expr) -> Value;

    fn decode(&self, v: &Value) -> Result<Self::Expr>;

    fn eta(&self, n: usize, i: usize) -> Result<Term<Self::Expr>> {
        if i >= n {
            return Err(Error::VariableOutOfRange { index: i, ctx: n });
        }
        Ok(Term::new(n, self.unit(n, i)))
    }

    fn bind(&self, f: &KMor<Self::Expr>, t: &Term<Self::Expr>) -> Result<Term<Self::Expr>> {
        if t.ctx != f.dom() {
            return Err(Error::Arity {
                expected: f.dom(),
                found: t.ctx,
            });
        }
        Ok(Term::new(f.cod(), self.extend(f, &t.expr)))
    }

    /// Parses and scope-checks an element of `RR(n)`.
    fn decode_in(&self, n: usize, v: &Value) -> Result<Self::Expr> {
        let e = self.decode(v)?;
        if !self.is_element(n, &e) {
            return Err(Error::IllFormed {
                ctx: n,
                detail: v.to_string(),
            });
        }
        Ok(e)
    }
}

/// `RR(ff)(t) = ρ(L(ff))(t)`: the action of a finite function on terms.
pub fn rename<M: RelativeMonad>(
    inst: &M,
    ff: &FinFun,
    t: &Term<M::Expr>,
) -> Result<Term<M::Expr>> {
    if t.ctx != ff.dom() {
        return Err(Error::Arity {
            expected: ff.dom(),
            found: t.ctx,
        });
    }
    inst.bind(&kleisli::from_finfun(inst, ff), t)
}

/// Payload-level renaming for callers that already track contexts.
pub(crate) fn rename_expr<M: RelativeMonad>(inst: &M, ff: &FinFun, e: &M::Expr) -> M::Expr {
    inst.extend(&kleisli::from_finfun(inst, ff), e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finfun::{delta, iota, FinFun};

    #[test]
    fn eta_examples() {
        let v = variables();
        assert_eq!(v.eta(2, 0).unwrap(), Term::new(2, 0));
        assert!(matches!(
            v.eta(2, 2),
            Err(Error::VariableOutOfRange { index: 2, ctx: 2 })
        ));
        let e = exceptions();
        assert_eq!(e.eta(1, 0).unwrap(), Term::new(1, Some(0)));
        let free = FreeMonad::new(BindingSignature::lam_app());
        assert_eq!(free.eta(3, 2).unwrap(), Term::new(3, Tree::Var(2)));
    }

    #[test]
    fn bind_examples() {
        let v = variables();
        let f = KMor::new(2, vec![1, 0]);
        assert_eq!(v.bind(&f, &Term::new(2, 0)).unwrap(), Term::new(2, 1));
        assert!(matches!(
            v.bind(&f, &Term::new(3, 0)),
            Err(Error::Arity { .. })
        ));

        let e = exceptions();
        for m in 0..3 {
            for n in 0..3 {
                for f in kleisli::all_kmors(&e, m, n).unwrap() {
                    assert_eq!(e.bind(&f, &Term::new(m, None)).unwrap(), Term::new(n, None));
                }
            }
        }
    }

    #[test]
    fn bind_identity_is_identity() {
        let e = exceptions();
        for n in 0..4 {
            for t in e.elements(n).unwrap() {
                let t = Term::new(n, t);
                assert_eq!(e.bind(&kleisli::t_identity(&e, n), &t).unwrap(), t);
            }
        }
    }

    #[test]
    fn rename_on_generators() {
        let e = exceptions();
        // ι_n^i(x_j^n) = x_j^{n+i}
        for n in 0..4 {
            for i in 0..3 {
                for j in 0..n {
                    let x = e.eta(n, j).unwrap();
                    assert_eq!(rename(&e, &iota(n, i), &x).unwrap(), e.eta(n + i, j).unwrap());
                }
            }
        }
        // ff(x_i^m) = x_{ff(i)}^n
        for m in 0..3 {
            for n in 0..3 {
                for ff in FinFun::all(m, n) {
                    for i in 0..m {
                        let x = e.eta(m, i).unwrap();
                        assert_eq!(rename(&e, &ff, &x).unwrap(), e.eta(n, ff.apply(i)).unwrap());
                    }
                }
            }
        }
        let t = Term::new(2, Some(1));
        assert_eq!(rename(&e, &FinFun::identity(2), &t).unwrap(), t);
        assert!(rename(&e, &delta(0, 3).unwrap(), &t).is_err());
    }

    #[test]
    fn rename_is_functorial() {
        let e = exceptions();
        for a in 0..=2 {
            for b in 0..=2 {
                for c in 0..=2 {
                    for f in FinFun::all(a, b) {
                        for g in FinFun::all(b, c) {
                            let fg = f.then(&g).unwrap();
                            for t in e.elements(a).unwrap() {
                                let t = Term::new(a, t);
                                let lhs = rename(&e, &fg, &t).unwrap();
                                let rhs = rename(&e, &g, &rename(&e, &f, &t).unwrap()).unwrap();
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }
}
