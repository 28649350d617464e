//! The free relative monad on a single-sorted binding signature.
//!
//! `RR(n)` is the set of de Bruijn syntax trees whose free indices are `< n`.
//! Inside an argument that binds `b` variables, indices `0..b` are the bound
//! variables and index `j + b` refers to the variable `j` of the outer context.

use std::collections::HashSet;
use std::sync::Arc;

use rand::Rng;
use serde_json::{json, Value};

use super::RelativeMonad;
use crate::error::{Error, Result};
use crate::kleisli::KMor;
use crate::Prng;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpSpec {
    pub sym: String,
    /// Number of variables bound in each argument.
    pub binders: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BindingSignature {
    ops: Vec<OpSpec>,
}

impl BindingSignature {
    pub fn new(ops: Vec<OpSpec>) -> Result<Self> {
        let mut seen = HashSet::new();
        for op in &ops {
            if op.sym == "Var" {
                return Err(Error::Signature("\"Var\" is reserved".into()));
            }
            if !seen.insert(op.sym.as_str()) {
                return Err(Error::Signature(format!("duplicate symbol {:?}", op.sym)));
            }
        }
        Ok(BindingSignature { ops })
    }

    /// `app : (0, 0)`, `lam : (1)`.
    pub fn lam_app() -> Self {
        BindingSignature {
            ops: vec![
                OpSpec {
                    sym: "app".into(),
                    binders: vec![0, 0],
                },
                OpSpec {
                    sym: "lam".into(),
                    binders: vec![1],
                },
            ],
        }
    }

    pub fn ops(&self) -> &[OpSpec] {
        &self.ops
    }

    pub fn lookup(&self, sym: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.sym == sym)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Var(usize),
    /// Operator index into the signature, then its arguments.
    Op(usize, Vec<Tree>),
}

impl Tree {
    pub fn size(&self) -> usize {
        match self {
            Tree::Var(_) => 1,
            Tree::Op(_, args) => 1 + args.iter().map(Tree::size).sum::<usize>(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FreeMonad {
    sig: Arc<BindingSignature>,
    lifting: bool,
}

impl FreeMonad {
    pub fn new(sig: BindingSignature) -> Self {
        FreeMonad {
            sig: Arc::new(sig),
            lifting: true,
        }
    }

    /// A deliberately wrong variant whose substitution does not shift the
    /// substituted terms when it passes under a binder. Used to make sure the
    /// law and theorem suites are not vacuous.
    pub fn without_lifting(&self) -> Self {
        FreeMonad {
            sig: Arc::clone(&self.sig),
            lifting: false,
        }
    }

    pub fn signature(&self) -> &BindingSignature {
        &self.sig
    }

    pub fn var(&self, i: usize) -> Tree {
        Tree::Var(i)
    }

    pub fn op(&self, sym: &str, args: Vec<Tree>) -> Result<Tree> {
        let idx = self
            .sig
            .lookup(sym)
            .ok_or_else(|| Error::Signature(format!("unknown symbol {sym:?}")))?;
        let arity = self.sig.ops[idx].binders.len();
        if args.len() != arity {
            return Err(Error::Signature(format!(
                "{sym} expects {arity} arguments, got {}",
                args.len()
            )));
        }
        Ok(Tree::Op(idx, args))
    }

    /// Simultaneous substitution of `comps` (terms over the target context)
    /// for the free variables of `t`, which sits under `depth` binders.
    pub(crate) fn subst(&self, t: &Tree, comps: &[Tree], depth: usize) -> Tree {
        match t {
            Tree::Var(j) if *j < depth => Tree::Var(*j),
            Tree::Var(j) => {
                let s = &comps[j - depth];
                if self.lifting && depth > 0 {
                    shift_with(&self.sig, s, depth, 0)
                } else {
                    s.clone()
                }
            }
            Tree::Op(o, args) => Tree::Op(
                *o,
                args.iter()
                    .zip(&self.sig.ops[*o].binders)
                    .map(|(a, &b)| self.subst(a, comps, depth + b))
                    .collect(),
            ),
        }
    }

    pub(crate) fn well_scoped(&self, ctx: usize, t: &Tree) -> bool {
        match t {
            Tree::Var(j) => *j < ctx,
            Tree::Op(o, args) => match self.sig.ops.get(*o) {
                Some(spec) => {
                    spec.binders.len() == args.len()
                        && args
                            .iter()
                            .zip(&spec.binders)
                            .all(|(a, &b)| self.well_scoped(ctx + b, a))
                }
                None => false,
            },
        }
    }

    fn generate(&self, ctx: usize, budget: usize, rng: &mut Prng) -> Option<Tree> {
        let nullary: Vec<usize> = (0..self.sig.ops.len())
            .filter(|&o| self.sig.ops[o].binders.is_empty())
            .collect();
        let leaf = budget <= 1 || rng.gen_bool(0.3);
        if leaf {
            if ctx > 0 && (nullary.is_empty() || rng.gen_bool(0.8)) {
                return Some(Tree::Var(rng.gen_range(0..ctx)));
            }
            if !nullary.is_empty() {
                let o = nullary[rng.gen_range(0..nullary.len())];
                return Some(Tree::Op(o, Vec::new()));
            }
            if budget <= 1 {
                return None;
            }
        }
        let fitting: Vec<usize> = (0..self.sig.ops.len())
            .filter(|&o| {
                let k = self.sig.ops[o].binders.len();
                k > 0 && k < budget
            })
            .collect();
        if fitting.is_empty() {
            return None;
        }
        let o = fitting[rng.gen_range(0..fitting.len())];
        let binders = self.sig.ops[o].binders.clone();
        let mut shares = vec![1usize; binders.len()];
        for _ in 0..budget - 1 - binders.len() {
            if rng.gen_bool(0.5) {
                let k = rng.gen_range(0..shares.len());
                shares[k] += 1;
            }
        }
        let args = binders
            .iter()
            .zip(shares)
            .map(|(&b, share)| self.generate(ctx + b, share, rng))
            .collect::<Option<Vec<_>>>()?;
        Some(Tree::Op(o, args))
    }

    pub(crate) fn encode_tree(&self, t: &Tree) -> Value {
        match t {
            Tree::Var(i) => json!(["Var", i]),
            Tree::Op(o, args) => {
                let mut v = vec![json!(self.sig.ops[*o].sym)];
                v.extend(args.iter().map(|a| self.encode_tree(a)));
                Value::Array(v)
            }
        }
    }

    pub(crate) fn decode_tree(&self, v: &Value) -> Result<Tree> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse(format!("expected a term array, got {v}")))?;
        let head = arr
            .first()
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse(format!("missing constructor tag in {v}")))?;
        if head == "Var" {
            return match arr.as_slice() {
                [_, i] => i
                    .as_u64()
                    .map(|i| Tree::Var(i as usize))
                    .ok_or_else(|| Error::Parse(format!("bad variable index in {v}"))),
                _ => Err(Error::Parse(format!("bad variable {v}"))),
            };
        }
        let args = arr[1..]
            .iter()
            .map(|a| self.decode_tree(a))
            .collect::<Result<Vec<_>>>()?;
        self.op(head, args)
    }
}

/// Adds `by` to every free index `>= cutoff`.
pub(crate) fn shift_with(sig: &BindingSignature, t: &Tree, by: usize, cutoff: usize) -> Tree {
    match t {
        Tree::Var(j) if *j >= cutoff => Tree::Var(j + by),
        Tree::Var(j) => Tree::Var(*j),
        Tree::Op(o, args) => Tree::Op(
            *o,
            args.iter()
                .zip(&sig.ops[*o].binders)
                .map(|(a, &b)| shift_with(sig, a, by, cutoff + b))
                .collect(),
        ),
    }
}

impl RelativeMonad for FreeMonad {
    type Expr = Tree;

    fn name(&self) -> String {
        if self.lifting {
            "free".into()
        } else {
            "free-unlifted".into()
        }
    }

    fn unit(&self, _n: usize, i: usize) -> Tree {
        Tree::Var(i)
    }

    fn extend(&self, f: &KMor<Tree>, e: &Tree) -> Tree {
        self.subst(e, f.comps(), 0)
    }

    fn is_element(&self, n: usize, e: &Tree) -> bool {
        self.well_scoped(n, e)
    }

    fn sample(&self, n: usize, size: usize, rng: &mut Prng) -> Option<Tree> {
        if size == 0 {
            return None;
        }
        for _ in 0..64 {
            let budget = rng.gen_range(1..=size);
            if let Some(t) = self.generate(n, budget, rng) {
                if t.size() <= size {
                    return Some(t);
                }
            }
        }
        None
    }

    fn encode(&self, e: &Tree) -> Value {
        self.encode_tree(e)
    }

    fn decode(&self, v: &Value) -> Result<Tree> {
        self.decode_tree(v)
    }
}
