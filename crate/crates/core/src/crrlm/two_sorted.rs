//! Type expressions over a free element syntax: the module `LM(n)` of type
//! expressions whose free element variables are `< n`.

use std::sync::Arc;

use rand::Rng;
use serde_json::{json, Value};

use super::LeftModule;
use crate::error::{Error, Result};
use crate::kleisli::KMor;
use crate::relmonad::{FreeMonad, RelativeMonad, Tree};
use crate::Prng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArgSort {
    El,
    Ty,
}

/// One argument: its sort and the number of element variables it binds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TyArgSpec {
    pub sort: ArgSort,
    pub bind: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TyOpSpec {
    pub sym: String,
    pub args: Vec<TyArgSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeSignature {
    ops: Vec<TyOpSpec>,
}

impl TypeSignature {
    pub fn new(ops: Vec<TyOpSpec>) -> Result<Self> {
        for (i, op) in ops.iter().enumerate() {
            if op.sym == "Var" {
                return Err(Error::Signature("\"Var\" is reserved".into()));
            }
            if ops[..i].iter().any(|o| o.sym == op.sym) {
                return Err(Error::Signature(format!("duplicate type symbol {:?}", op.sym)));
            }
        }
        Ok(TypeSignature { ops })
    }

    /// `El : el` and `Pi : (ty, ty binding one element variable)`.
    pub fn el_pi() -> Self {
        let arg = |sort, bind| TyArgSpec { sort, bind };
        TypeSignature {
            ops: vec![
                TyOpSpec {
                    sym: "El".into(),
                    args: vec![arg(ArgSort::El, 0)],
                },
                TyOpSpec {
                    sym: "Pi".into(),
                    args: vec![arg(ArgSort::Ty, 0), arg(ArgSort::Ty, 1)],
                },
            ],
        }
    }

    pub fn ops(&self) -> &[TyOpSpec] {
        &self.ops
    }

    pub fn lookup(&self, sym: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.sym == sym)
    }
}

/// A type expression; `op` indexes into the type signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TyExpr {
    pub op: usize,
    pub args: Vec<TyArg>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TyArg {
    El(Tree),
    Ty(TyExpr),
}

#[derive(Debug, Clone)]
pub struct TwoSortedModule {
    sig: Arc<TypeSignature>,
}

impl TwoSortedModule {
    pub fn new(sig: TypeSignature) -> Self {
        TwoSortedModule { sig: Arc::new(sig) }
    }

    pub fn signature(&self) -> &TypeSignature {
        &self.sig
    }

    /// Applies a type constructor, checking arity and argument sorts.
    pub fn ty_op(&self, sym: &str, args: Vec<TyArg>) -> Result<TyExpr> {
        let op = self
            .sig
            .lookup(sym)
            .ok_or_else(|| Error::Signature(format!("unknown type symbol {sym:?}")))?;
        let spec = &self.sig.ops[op];
        if spec.args.len() != args.len() {
            return Err(Error::Signature(format!(
                "{sym} expects {} arguments, got {}",
                spec.args.len(),
                args.len()
            )));
        }
        for (k, (a, s)) in args.iter().zip(&spec.args).enumerate() {
            let found = match a {
                TyArg::El(_) => ArgSort::El,
                TyArg::Ty(_) => ArgSort::Ty,
            };
            if found != s.sort {
                return Err(Error::Sort(format!(
                    "argument {k} of {sym} has sort {found:?}, expected {:?}",
                    s.sort
                )));
            }
        }
        Ok(TyExpr { op, args })
    }

    /// `El(t)`, when the signature has an `El` constructor.
    pub fn el(&self, t: Tree) -> Result<TyExpr> {
        self.ty_op("El", vec![TyArg::El(t)])
    }

    fn well_scoped(&self, inst: &FreeMonad, ctx: usize, t: &TyExpr) -> bool {
        let Some(spec) = self.sig.ops.get(t.op) else {
            return false;
        };
        spec.args.len() == t.args.len()
            && t.args.iter().zip(&spec.args).all(|(a, s)| match (a, s.sort) {
                (TyArg::El(e), ArgSort::El) => inst.well_scoped(ctx + s.bind, e),
                (TyArg::Ty(u), ArgSort::Ty) => self.well_scoped(inst, ctx + s.bind, u),
                _ => false,
            })
    }

    fn subst(&self, inst: &FreeMonad, t: &TyExpr, comps: &[Tree], depth: usize) -> TyExpr {
        let spec = &self.sig.ops[t.op];
        TyExpr {
            op: t.op,
            args: t
                .args
                .iter()
                .zip(&spec.args)
                .map(|(a, s)| match a {
                    TyArg::El(e) => TyArg::El(inst.subst(e, comps, depth + s.bind)),
                    TyArg::Ty(u) => TyArg::Ty(self.subst(inst, u, comps, depth + s.bind)),
                })
                .collect(),
        }
    }

    fn generate(&self, inst: &FreeMonad, ctx: usize, budget: usize, rng: &mut Prng) -> Option<TyExpr> {
        let leaves: Vec<usize> = (0..self.sig.ops.len())
            .filter(|&o| self.sig.ops[o].args.iter().all(|a| a.sort == ArgSort::El))
            .collect();
        let pick_leaf = budget <= 2 || rng.gen_bool(0.4);
        let pool: Vec<usize> = if pick_leaf && !leaves.is_empty() {
            leaves
        } else {
            (0..self.sig.ops.len()).collect()
        };
        if pool.is_empty() {
            return None;
        }
        let op = pool[rng.gen_range(0..pool.len())];
        let specs = &self.sig.ops[op].args;
        let share = (budget.saturating_sub(1) / specs.len().max(1)).max(2);
        let args = specs
            .iter()
            .map(|s| match s.sort {
                ArgSort::El => inst.sample(ctx + s.bind, share, rng).map(TyArg::El),
                ArgSort::Ty if budget > 2 => {
                    self.generate(inst, ctx + s.bind, share, rng).map(TyArg::Ty)
                }
                ArgSort::Ty => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(TyExpr { op, args })
    }

    fn encode_ty(&self, inst: &FreeMonad, t: &TyExpr) -> Value {
        let mut v = vec![json!(self.sig.ops[t.op].sym)];
        v.extend(t.args.iter().map(|a| match a {
            TyArg::El(e) => inst.encode(e),
            TyArg::Ty(u) => self.encode_ty(inst, u),
        }));
        Value::Array(v)
    }

    fn decode_ty(&self, inst: &FreeMonad, v: &Value) -> Result<TyExpr> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse(format!("expected a type array, got {v}")))?;
        let sym = arr
            .first()
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse(format!("missing constructor tag in {v}")))?;
        let op = self
            .sig
            .lookup(sym)
            .ok_or_else(|| Error::Signature(format!("unknown type symbol {sym:?}")))?;
        let specs = &self.sig.ops[op].args;
        if specs.len() + 1 != arr.len() {
            return Err(Error::Signature(format!(
                "{sym} expects {} arguments, got {}",
                specs.len(),
                arr.len() - 1
            )));
        }
        let args = arr[1..]
            .iter()
            .zip(specs)
            .map(|(a, s)| match s.sort {
                ArgSort::El => inst.decode(a).map(TyArg::El),
                ArgSort::Ty => self.decode_ty(inst, a).map(TyArg::Ty),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TyExpr { op, args })
    }
}

impl LeftModule<FreeMonad> for TwoSortedModule {
    type Elem = TyExpr;

    fn name(&self) -> String {
        let syms: Vec<&str> = self.sig.ops.iter().map(|o| o.sym.as_str()).collect();
        format!("ty[{}]", syms.join(","))
    }

    fn act(&self, inst: &FreeMonad, f: &KMor<Tree>, e: &TyExpr) -> TyExpr {
        self.subst(inst, e, f.comps(), 0)
    }

    fn is_element(&self, inst: &FreeMonad, n: usize, e: &TyExpr) -> bool {
        self.well_scoped(inst, n, e)
    }

    fn sample(&self, inst: &FreeMonad, n: usize, size: usize, rng: &mut Prng) -> Option<TyExpr> {
        (0..64).find_map(|_| self.generate(inst, n, size, rng))
    }

    fn encode(&self, inst: &FreeMonad, e: &TyExpr) -> Value {
        self.encode_ty(inst, e)
    }

    fn decode(&self, inst: &FreeMonad, v: &Value) -> Result<TyExpr> {
        self.decode_ty(inst, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crrlm::{check_module_laws, LeftModule};
    use crate::finfun::transposition;
    use crate::kleisli::from_finfun;
    use crate::relmonad::{BindingSignature, LawOptions};

    fn setup() -> (FreeMonad, TwoSortedModule) {
        (
            FreeMonad::new(BindingSignature::lam_app()),
            TwoSortedModule::new(TypeSignature::el_pi()),
        )
    }

    #[test]
    fn scoping_and_sorts() {
        let (inst, m) = setup();
        let el0 = m.el(Tree::Var(0)).unwrap();
        assert!(m.is_element(&inst, 1, &el0));
        assert!(!m.is_element(&inst, 0, &el0));
        let pi = m
            .ty_op("Pi", vec![TyArg::Ty(el0.clone()), TyArg::Ty(m.el(Tree::Var(1)).unwrap())])
            .unwrap();
        assert!(m.is_element(&inst, 1, &pi));
        assert!(!m.is_element(&inst, 0, &pi));
        let err = m.ty_op("El", vec![TyArg::Ty(el0)]).unwrap_err();
        assert!(matches!(err, Error::Sort(_)));
        assert!(matches!(m.ty_op("Sigma", vec![]), Err(Error::Signature(_))));
    }

    #[test]
    fn substitution_examples() {
        let (inst, m) = setup();
        let id = inst.op("lam", vec![Tree::Var(0)]).unwrap();
        let el0 = m.el(Tree::Var(0)).unwrap();
        let f = KMor::new(0, vec![id.clone()]);
        assert_eq!(m.act(&inst, &f, &el0), m.el(id).unwrap());

        let swap = from_finfun(&inst, &transposition(2, 0, 1).unwrap());
        assert_eq!(m.act(&inst, &swap, &el0), m.el(Tree::Var(1)).unwrap());

        // Under the binder of Pi the substituted term is lifted.
        let pi = m
            .ty_op("Pi", vec![TyArg::Ty(el0.clone()), TyArg::Ty(m.el(Tree::Var(1)).unwrap())])
            .unwrap();
        let g = KMor::new(2, vec![Tree::Var(1)]);
        let want = m
            .ty_op(
                "Pi",
                vec![TyArg::Ty(m.el(Tree::Var(1)).unwrap()), TyArg::Ty(m.el(Tree::Var(2)).unwrap())],
            )
            .unwrap();
        assert_eq!(m.act(&inst, &g, &pi), want);
    }

    #[test]
    fn codec_round_trip() {
        let (inst, m) = setup();
        let mut rng = crate::prng(3);
        for n in 0..3 {
            for _ in 0..50 {
                let t = m.sample(&inst, n, 8, &mut rng).unwrap();
                assert!(m.is_element(&inst, n, &t));
                assert_eq!(m.decode(&inst, &m.encode(&inst, &t)).unwrap(), t);
            }
        }
    }

    #[test]
    fn module_laws_sampled() {
        let (inst, m) = setup();
        let opts = LawOptions {
            samples: 200,
            ..LawOptions::default()
        };
        assert!(check_module_laws(&inst, &m, &opts).passed());
    }
}
