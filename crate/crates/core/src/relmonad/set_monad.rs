//! Relative monads induced by ordinary monads on sets.
//!
//! `RR(n) = R(stn(n))`, `η_n = η_{stn(n)}` and `ρ(f) = R(f) ∘ μ_{stn(n)}`.

use std::fmt::Debug;
use std::hash::Hash;
use std::marker::PhantomData;

use rand::seq::SliceRandom;
use serde_json::{json, Value};

use super::RelativeMonad;
use crate::error::{Error, Result};
use crate::kleisli::KMor;
use crate::Prng;

pub trait Carrier: Clone + Eq + Hash + Debug {}
impl<T: Clone + Eq + Hash + Debug> Carrier for T {}

/// A monad `(R, η, μ)` on sets, restricted to what the finite construction needs.
pub trait SetMonad {
    type Of<A: Carrier>: Carrier;

    const NAME: &'static str;

    fn unit<A: Carrier>(a: A) -> Self::Of<A>;
    fn map<A: Carrier, B: Carrier>(x: &Self::Of<A>, f: impl FnMut(&A) -> B) -> Self::Of<B>;
    fn join<A: Carrier>(x: Self::Of<Self::Of<A>>) -> Self::Of<A>;

    /// `R(X)` for a finite `X` given by its elements.
    fn elements_over<A: Carrier>(xs: &[A]) -> Vec<Self::Of<A>>;

    /// The atoms of `X` that occur in an element of `R(X)`.
    fn atoms(x: &Self::Of<usize>) -> Vec<usize>;

    fn encode(x: &Self::Of<usize>) -> Value;
    fn decode(v: &Value) -> Result<Self::Of<usize>>;
}

/// The relative monad obtained from a set monad.
#[derive(Debug, Clone, Copy, Default)]
pub struct FromSetMonad<S>(PhantomData<S>);

impl<S: SetMonad> FromSetMonad<S> {
    pub fn new() -> Self {
        FromSetMonad(PhantomData)
    }
}

impl<S: SetMonad> RelativeMonad for FromSetMonad<S> {
    type Expr = S::Of<usize>;

    fn name(&self) -> String {
        S::NAME.to_string()
    }

    fn unit(&self, _n: usize, i: usize) -> Self::Expr {
        S::unit(i)
    }

    fn extend(&self, f: &KMor<Self::Expr>, e: &Self::Expr) -> Self::Expr {
        S::join(S::map(e, |&i| f.comp(i).clone()))
    }

    fn is_element(&self, n: usize, e: &Self::Expr) -> bool {
        S::atoms(e).into_iter().all(|a| a < n)
    }

    fn elements(&self, n: usize) -> Option<Vec<Self::Expr>> {
        let xs: Vec<usize> = (0..n).collect();
        Some(S::elements_over(&xs))
    }

    fn sample(&self, n: usize, _size: usize, rng: &mut Prng) -> Option<Self::Expr> {
        let all = self.elements(n)?;
        all.choose(rng).cloned()
    }

    fn encode(&self, e: &Self::Expr) -> Value {
        S::encode(e)
    }

    fn decode(&self, v: &Value) -> Result<Self::Expr> {
        S::decode(v)
    }
}

fn decode_var(v: &Value) -> Option<usize> {
    match v.as_array()?.as_slice() {
        [tag, i] if tag == "Var" => i.as_u64().map(|i| i as usize),
        _ => None,
    }
}

/// `R(X) = X`.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityMonad;

impl SetMonad for IdentityMonad {
    type Of<A: Carrier> = A;
    const NAME: &'static str = "vars";

    fn unit<A: Carrier>(a: A) -> A {
        a
    }
    fn map<A: Carrier, B: Carrier>(x: &A, mut f: impl FnMut(&A) -> B) -> B {
        f(x)
    }
    fn join<A: Carrier>(x: A) -> A {
        x
    }
    fn elements_over<A: Carrier>(xs: &[A]) -> Vec<A> {
        xs.to_vec()
    }
    fn atoms(x: &usize) -> Vec<usize> {
        vec![*x]
    }
    fn encode(x: &usize) -> Value {
        json!(["Var", x])
    }
    fn decode(v: &Value) -> Result<usize> {
        decode_var(v).ok_or_else(|| Error::Parse(format!("expected [\"Var\", i], got {v}")))
    }
}

/// `R(X) = X ⊔ {⊥}`, with `⊥` represented as `None`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExceptionMonad;

impl SetMonad for ExceptionMonad {
    type Of<A: Carrier> = Option<A>;
    const NAME: &'static str = "exc";

    fn unit<A: Carrier>(a: A) -> Option<A> {
        Some(a)
    }
    fn map<A: Carrier, B: Carrier>(x: &Option<A>, f: impl FnMut(&A) -> B) -> Option<B> {
        x.as_ref().map(f)
    }
    fn join<A: Carrier>(x: Option<Option<A>>) -> Option<A> {
        x.flatten()
    }
    fn elements_over<A: Carrier>(xs: &[A]) -> Vec<Option<A>> {
        xs.iter().cloned().map(Some).chain([None]).collect()
    }
    fn atoms(x: &Option<usize>) -> Vec<usize> {
        x.iter().copied().collect()
    }
    fn encode(x: &Option<usize>) -> Value {
        match x {
            Some(i) => json!(["Var", i]),
            None => json!(["Bot"]),
        }
    }
    fn decode(v: &Value) -> Result<Option<usize>> {
        if v == &json!(["Bot"]) {
            return Ok(None);
        }
        decode_var(v)
            .map(Some)
            .ok_or_else(|| Error::Parse(format!("expected [\"Var\", i] or [\"Bot\"], got {v}")))
    }
}

/// `R(X) = pt` for every `X`.
#[derive(Debug, Clone, Copy, Default)]
pub struct TerminalMonad;

impl SetMonad for TerminalMonad {
    type Of<A: Carrier> = ();
    const NAME: &'static str = "unit";

    fn unit<A: Carrier>(_a: A) {}
    fn map<A: Carrier, B: Carrier>(_x: &(), _f: impl FnMut(&A) -> B) {}
    fn join<A: Carrier>(_x: ()) {}
    fn elements_over<A: Carrier>(_xs: &[A]) -> Vec<()> {
        vec![()]
    }
    fn atoms(_x: &()) -> Vec<usize> {
        Vec::new()
    }
    fn encode(_x: &()) -> Value {
        json!(["Pt"])
    }
    fn decode(v: &Value) -> Result<()> {
        if v == &json!(["Pt"]) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected [\"Pt\"], got {v}")))
        }
    }
}

pub type Variables = FromSetMonad<IdentityMonad>;
pub type Exceptions = FromSetMonad<ExceptionMonad>;
pub type UnitCarrier = FromSetMonad<TerminalMonad>;

pub fn variables() -> Variables {
    FromSetMonad::new()
}

pub fn exceptions() -> Exceptions {
    FromSetMonad::new()
}

pub fn unit_carrier() -> UnitCarrier {
    FromSetMonad::new()
}
