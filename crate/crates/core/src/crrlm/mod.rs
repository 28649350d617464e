//! Left modules over a relative monad, viewed as presheaves on `C(RR)`, and
//! the system `C(RR, LM) = C(RR)[LM]` with its B-set operations.
//!
//! Objects are `(n, (T_0, …, T_{n-1}))` with `T_i ∈ LM(i)`. Elements of
//! `Õb` are written [`BTildeLm`]: a telescope of length `n + 1` and a term
//! of `RR(n)`.

mod two_sorted;

use std::fmt::Debug;
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

pub use two_sorted::{ArgSort, TyArg, TyArgSpec, TyExpr, TyOpSpec, TwoSortedModule, TypeSignature};

use crate::crr::{Crr, RrMor};
use crate::csystem::{self, ft_iter, is_section, BOp, BOpArgs, BOpValue, CSystem};
use crate::error::{Error, Result};
use crate::finfun::delta;
use crate::kleisli::{self, all_kmors, qq_iter, sample_kmor, section_tuple, t_compose, t_identity, KMor};
use crate::presheaf_ext::{Ext, ExtMor, ExtObj, Presheaf};
use crate::relmonad::{rename_expr, LawOptions, RelativeMonad, Term};
use crate::report::{Report, Tally};
use crate::Prng;

/// A left module over `RR`: sets `LM(n)` with a substitution action
/// `f(E) ∈ LM(m)` for `f : n → m` in the Kleisli category and `E ∈ LM(n)`.
pub trait LeftModule<M: RelativeMonad> {
    type Elem: Clone + Eq + Hash + Debug;

    fn name(&self) -> String;

    /// Callers guarantee `e ∈ LM(f.dom())`.
    fn act(&self, inst: &M, f: &KMor<M::Expr>, e: &Self::Elem) -> Self::Elem;

    fn is_element(&self, inst: &M, n: usize, e: &Self::Elem) -> bool;

    fn elements(&self, inst: &M, n: usize) -> Option<Vec<Self::Elem>> {
        let _ = (inst, n);
        None
    }

    fn sample(&self, inst: &M, n: usize, size: usize, rng: &mut Prng) -> Option<Self::Elem>;

    fn encode(&self, inst: &M, e: &Self::Elem) -> Value;

    fn decode(&self, inst: &M, v: &Value) -> Result<Self::Elem>;

    /// `lm_act` with the context check.
    fn act_checked(&self, inst: &M, f: &KMor<M::Expr>, n: usize, e: &Self::Elem) -> Result<Self::Elem> {
        if n != f.dom() {
            return Err(Error::Arity {
                expected: f.dom(),
                found: n,
            });
        }
        Ok(self.act(inst, f, e))
    }
}

/// `RR` as a module over itself: `LM(n) = RR(n)`, acting by `ρ`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RrModule;

pub fn lm_of_rr() -> RrModule {
    RrModule
}

impl<M: RelativeMonad> LeftModule<M> for RrModule {
    type Elem = M::Expr;

    fn name(&self) -> String {
        "rrmod".into()
    }
    fn act(&self, inst: &M, f: &KMor<M::Expr>, e: &M::Expr) -> M::Expr {
        inst.extend(f, e)
    }
    fn is_element(&self, inst: &M, n: usize, e: &M::Expr) -> bool {
        inst.is_element(n, e)
    }
    fn elements(&self, inst: &M, n: usize) -> Option<Vec<M::Expr>> {
        inst.elements(n)
    }
    fn sample(&self, inst: &M, n: usize, size: usize, rng: &mut Prng) -> Option<M::Expr> {
        inst.sample(n, size, rng)
    }
    fn encode(&self, inst: &M, e: &M::Expr) -> Value {
        inst.encode(e)
    }
    fn decode(&self, inst: &M, v: &Value) -> Result<M::Expr> {
        inst.decode(v)
    }
}

pub const ACT_IDENTITY: &str = "act-identity";
pub const ACT_COMPOSITION: &str = "act-composition";

/// Checks `id(E) = E` and `(f ; g)(E) = g(f(E))` for contexts up to
/// `max_n`, exhaustively when the carriers and hom-sets are small enough.
pub fn check_module_laws<M: RelativeMonad, L: LeftModule<M>>(
    inst: &M,
    module: &L,
    opts: &LawOptions,
) -> Report {
    let mut report = Report::new(format!("module-laws:{}:{}", inst.name(), module.name()));
    let max = opts.max_n;
    let mut ident = Tally::new(ACT_IDENTITY);
    let mut comp = Tally::new(ACT_COMPOSITION);

    let cost = exhaustive_cost(inst, module, max);
    let show = |e: &L::Elem| module.encode(inst, e).to_string();
    if cost.is_some_and(|c| c <= opts.exhaustive_limit) {
        for n in 0..=max {
            let elems = module.elements(inst, n).expect("enumerable");
            for e in &elems {
                ident.record(module.act(inst, &t_identity(inst, n), e) == *e, || show(e));
            }
            for m in 0..=max {
                let fs = all_kmors(inst, n, m).expect("enumerable");
                for k in 0..=max {
                    let gs = all_kmors(inst, m, k).expect("enumerable");
                    for f in &fs {
                        for g in &gs {
                            let fg = t_compose(inst, f, g).expect("composable");
                            for e in &elems {
                                let lhs = module.act(inst, &fg, e);
                                let rhs = module.act(inst, g, &module.act(inst, f, e));
                                comp.record(lhs == rhs, || {
                                    format!("f = {f:?}, g = {g:?}, E = {}", show(e))
                                });
                            }
                        }
                    }
                }
            }
        }
        report.push(ident.finish().with_note("exhaustive"));
        report.push(comp.finish().with_note("exhaustive"));
    } else {
        let mut rng = Prng::seed_from_u64(opts.seed);
        let note = format!("sampled, seed {}", opts.seed);
        for _ in 0..opts.samples.saturating_mul(30) {
            if ident.cases() >= opts.samples as u64 && comp.cases() >= opts.samples as u64 {
                break;
            }
            let (n, m, k) = (
                rng.gen_range(0..=max),
                rng.gen_range(0..=max),
                rng.gen_range(0..=max),
            );
            let Some(e) = module.sample(inst, n, opts.size, &mut rng) else {
                continue;
            };
            ident.record(module.act(inst, &t_identity(inst, n), &e) == e, || show(&e));
            let (Some(f), Some(g)) = (
                sample_kmor(inst, n, m, opts.size, &mut rng),
                sample_kmor(inst, m, k, opts.size, &mut rng),
            ) else {
                continue;
            };
            let fg = t_compose(inst, &f, &g).expect("composable");
            let lhs = module.act(inst, &fg, &e);
            let rhs = module.act(inst, &g, &module.act(inst, &f, &e));
            comp.record(lhs == rhs, || format!("f = {f:?}, g = {g:?}, E = {}", show(&e)));
        }
        report.push(ident.finish().with_note(note.clone()));
        report.push(comp.finish().with_note(note));
    }
    report.sort();
    report
}

fn exhaustive_cost<M: RelativeMonad, L: LeftModule<M>>(inst: &M, module: &L, max: usize) -> Option<u64> {
    let mut total = 0u64;
    for n in 0..=max {
        let e = module.elements(inst, n)?.len() as u64;
        for m in 0..=max {
            let f = kleisli::count_kmors(inst, n, m)?;
            for k in 0..=max {
                let g = kleisli::count_kmors(inst, m, k)?;
                total = total.saturating_add(e.saturating_mul(f).saturating_mul(g));
            }
        }
    }
    Some(total)
}

/// A left module seen as a presheaf on `C(RR)`. A morphism `m̂ → n̂` is a
/// Kleisli map `n → m`, so the contravariant action is the module action.
#[derive(Debug, Clone)]
pub struct ModulePresheaf<L>(pub L);

impl<M: RelativeMonad, L: LeftModule<M>> Presheaf<Crr<M>> for ModulePresheaf<L> {
    type Elem = L::Elem;

    fn name(&self) -> String {
        self.0.name()
    }
    fn act(&self, cc: &Crr<M>, f: &RrMor<M::Expr>, e: &L::Elem) -> L::Elem {
        self.0.act(cc.inst(), &f.0, e)
    }
    fn contains(&self, cc: &Crr<M>, x: &usize, e: &L::Elem) -> bool {
        self.0.is_element(cc.inst(), *x, e)
    }
    fn elements(&self, cc: &Crr<M>, x: &usize) -> Option<Vec<L::Elem>> {
        self.0.elements(cc.inst(), *x)
    }
    fn sample(&self, cc: &Crr<M>, x: &usize, rng: &mut Prng) -> Option<L::Elem> {
        for _ in 0..16 {
            if let Some(e) = self.0.sample(cc.inst(), *x, cc.size(), rng) {
                return Some(e);
            }
        }
        None
    }
    fn show(&self, cc: &Crr<M>, e: &L::Elem) -> String {
        self.0.encode(cc.inst(), e).to_string()
    }
}

pub type Crrlm<M, L> = Ext<Crr<M>, ModulePresheaf<L>>;
pub type LmObj<E> = ExtObj<usize, E>;
pub type LmMor<X, E> = ExtMor<usize, E, RrMor<X>>;

pub fn crrlm_build<M: RelativeMonad, L: LeftModule<M>>(base: Crr<M>, module: L) -> Crrlm<M, L> {
    Ext::new(base, ModulePresheaf(module))
}

/// `(n, (Γ, r))` with `Γ` of length `n + 1` and `r ∈ RR(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BTildeLm<X, E> {
    pub n: usize,
    pub gamma: Vec<E>,
    pub r: X,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LmArgs<X, E> {
    T { x: LmObj<E>, y: LmObj<E> },
    TTilde { x: LmObj<E>, s: BTildeLm<X, E> },
    S { r: BTildeLm<X, E>, y: LmObj<E> },
    STilde { r: BTildeLm<X, E>, s: BTildeLm<X, E> },
    Delta { x: LmObj<E> },
}

impl<X, E> LmArgs<X, E> {
    pub fn op(&self) -> BOp {
        match self {
            LmArgs::T { .. } => BOp::T,
            LmArgs::TTilde { .. } => BOp::TTilde,
            LmArgs::S { .. } => BOp::S,
            LmArgs::STilde { .. } => BOp::STilde,
            LmArgs::Delta { .. } => BOp::Delta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LmValue<X, E> {
    Object(LmObj<E>),
    Element(BTildeLm<X, E>),
}

fn domain(op: BOp, violated: &str) -> Error {
    Error::BopDomain {
        op: op.name(),
        violated: violated.to_string(),
    }
}

type Elem<M, L> = <L as LeftModule<M>>::Elem;
type Expr<M> = <M as RelativeMonad>::Expr;

impl<M: RelativeMonad, L: LeftModule<M>> Ext<Crr<M>, ModulePresheaf<L>> {
    pub fn inst(&self) -> &M {
        self.base().inst()
    }

    pub fn module(&self) -> &L {
        &self.presheaf().0
    }

    fn lm_rename(&self, i: usize, n: usize, e: &Elem<M, L>) -> Result<Elem<M, L>> {
        let f = kleisli::from_finfun(self.inst(), &delta(i, n)?);
        Ok(self.module().act(self.inst(), &f, e))
    }

    /// `θ^LM_{m,n}(r, E) = qq^{n-m-1}(x_0^m, …, x_{m-1}^m, r)(E)` for
    /// `r ∈ RR(m)` and `E ∈ LM(n)`.
    pub fn theta_lm(&self, r: &Term<Expr<M>>, n: usize, e: &Elem<M, L>) -> Result<Elem<M, L>> {
        let m = r.ctx;
        if n <= m {
            return Err(Error::Precondition(format!(
                "theta needs n > m, got m = {m}, n = {n}"
            )));
        }
        let f = qq_iter(self.inst(), &section_tuple(self.inst(), m, &r.expr), n - m - 1);
        self.module().act_checked(self.inst(), &f, n, e)
    }

    pub fn check_btilde(&self, b: &BTildeLm<Expr<M>, Elem<M, L>>) -> Result<()> {
        if b.gamma.len() != b.n + 1 {
            return Err(Error::Telescope(format!(
                "telescope of length {} for an element at {}",
                b.gamma.len(),
                b.n
            )));
        }
        self.validate(&ExtObj {
            base: b.n + 1,
            tele: b.gamma.clone(),
        })?;
        if !self.inst().is_element(b.n, &b.r) {
            return Err(Error::IllFormed {
                ctx: b.n,
                detail: self.inst().encode(&b.r).to_string(),
            });
        }
        Ok(())
    }

    /// `mb(s) = (n, (Γ, s(n)))` for a section `s : (n, Γ_{<n}) → (n+1, Γ)`.
    pub fn mb_lm(&self, s: &LmMor<Expr<M>, Elem<M, L>>) -> Result<BTildeLm<Expr<M>, Elem<M, L>>> {
        if !is_section(self, s) {
            return Err(Error::SectionInvariant(format!(
                "{} is not a section",
                self.show_mor(s)
            )));
        }
        let b = self.base().mb(&s.base)?;
        Ok(BTildeLm {
            n: b.ctx,
            gamma: s.dst.tele.clone(),
            r: b.expr,
        })
    }

    /// `mb⁻¹(n, (Γ, o)) = (x_0^n, …, x_{n-1}^n, o)` between the evident objects.
    pub fn mb_lm_inv(&self, b: &BTildeLm<Expr<M>, Elem<M, L>>) -> Result<LmMor<Expr<M>, Elem<M, L>>> {
        self.check_btilde(b)?;
        let dst = ExtObj {
            base: b.n + 1,
            tele: b.gamma.clone(),
        };
        Ok(ExtMor {
            src: self.ft(&dst),
            dst,
            base: RrMor(section_tuple(self.inst(), b.n, &b.r)),
        })
    }

    /// `s_f = (x_0^m, …, x_{m-1}^m, f(n-1))` for `f : (m, Γ) → (n, Γ')`,
    /// landing in `(m+1, (Γ, (f(0), …, f(n-2))(T'_{n-1})))`.
    pub fn section_of_lm(&self, f: &LmMor<Expr<M>, Elem<M, L>>) -> Result<LmMor<Expr<M>, Elem<M, L>>> {
        let (m, n) = (f.src.base, f.dst.base);
        if n == 0 {
            return Err(Error::NoSection);
        }
        let comps = f.base.0.comps();
        let head = KMor::new(m, comps[..n - 1].to_vec());
        let mut tele = f.src.tele.clone();
        tele.push(self.module().act(self.inst(), &head, &f.dst.tele[n - 1]));
        Ok(ExtMor {
            src: f.src.clone(),
            dst: ExtObj { base: m + 1, tele },
            base: RrMor(section_tuple(self.inst(), m, &comps[n - 1])),
        })
    }

    /// `f*(s)` for `f : X → Z` and a section `s` whose domain lies `i` steps
    /// above `Z`.
    pub fn pullback_section_lm(
        &self,
        f: &LmMor<Expr<M>, Elem<M, L>>,
        s: &LmMor<Expr<M>, Elem<M, L>>,
    ) -> Result<LmMor<Expr<M>, Elem<M, L>>> {
        if !is_section(self, s) {
            return Err(Error::SectionInvariant(format!(
                "{} is not a section",
                self.show_mor(s)
            )));
        }
        let (z, top) = (f.dst.base, s.src.base);
        if top < z || ft_iter(self, &s.src, top - z) != f.dst {
            return Err(Error::Structure(format!(
                "{} does not lie over {}",
                self.show_ob(&s.src),
                self.show_ob(&f.dst)
            )));
        }
        let dst = self.star_iter_closed(f, &s.dst, top - z + 1)?;
        Ok(ExtMor {
            src: self.ft(&dst),
            dst,
            base: self.base().pullback_section(&f.base, &s.base)?,
        })
    }

    /// Closed form of `p_Y*(X)` for `X = (m, (T_0, …))` and
    /// `Y = (n, (T_0, …, T_{n-2}, T))`:
    /// `(m+1, (T_0, …, T_{n-2}, T, ∂^{n-1}_{n-1}(T_{n-1}), …, ∂^{n-1}_{m-1}(T_{m-1})))`.
    pub fn p_star_weakening(&self, x: &LmObj<Elem<M, L>>, y: &LmObj<Elem<M, L>>) -> Result<LmObj<Elem<M, L>>> {
        let (m, n) = (x.base, y.base);
        if n == 0 || m + 1 < n {
            return Err(Error::Precondition(format!(
                "p_Y*(X) needs 0 < n ≤ m + 1, got m = {m}, n = {n}"
            )));
        }
        if x.tele[..n - 1] != y.tele[..n - 1] {
            return Err(Error::Telescope(format!(
                "X and Y disagree below position {}",
                n - 1
            )));
        }
        let mut tele = y.tele.clone();
        for j in n - 1..m {
            tele.push(self.lm_rename(n - 1, j, &x.tele[j])?);
        }
        Ok(ExtObj { base: m + 1, tele })
    }

    /// `T((m, Γ), (n, Γ'))` without its domain checks.
    fn t_object(&self, x: &LmObj<Elem<M, L>>, y_tele: &[Elem<M, L>]) -> Result<LmObj<Elem<M, L>>> {
        let m = x.base;
        let n = y_tele.len();
        let mut tele = x.tele.clone();
        for j in m..=n {
            tele.push(self.lm_rename(m - 1, j - 1, &y_tele[j - 1])?);
        }
        Ok(ExtObj { base: n + 1, tele })
    }

    /// `S((m, (Γ, r)), (n, Γ'))` without its domain checks.
    fn s_object(
        &self,
        r: &BTildeLm<Expr<M>, Elem<M, L>>,
        y_tele: &[Elem<M, L>],
    ) -> Result<LmObj<Elem<M, L>>> {
        let m = r.n;
        let n = y_tele.len();
        let term = Term::new(m, r.r.clone());
        let mut tele = y_tele[..m].to_vec();
        for (k, t) in y_tele.iter().enumerate().take(n).skip(m + 1) {
            tele.push(self.theta_lm(&term, k, t)?);
        }
        Ok(ExtObj { base: n - 1, tele })
    }

    /// The B-set operations of `C(RR, LM)` by their closed formulas.
    pub fn bop_lm_explicit(
        &self,
        args: &LmArgs<Expr<M>, Elem<M, L>>,
    ) -> Result<LmValue<Expr<M>, Elem<M, L>>> {
        let op = args.op();
        let prefix = |a: &[Elem<M, L>], b: &[Elem<M, L>], upto: usize, what: &str| {
            if a[..upto] == b[..upto] {
                Ok(())
            } else {
                Err(domain(op, what))
            }
        };
        match args {
            LmArgs::T { x, y } => {
                self.validate(x)?;
                self.validate(y)?;
                let (m, n) = (x.base, y.base);
                if m == 0 {
                    return Err(domain(op, "m > 0"));
                }
                if n < m {
                    return Err(domain(op, "n > m - 1"));
                }
                prefix(&x.tele, &y.tele, m - 1, "T_i = T'_i for i ≤ m - 2")?;
                self.t_object(x, &y.tele).map(LmValue::Object)
            }
            LmArgs::TTilde { x, s } => {
                self.validate(x)?;
                self.check_btilde(s)?;
                let (m, n) = (x.base, s.n);
                if m == 0 {
                    return Err(domain(op, "m > 0"));
                }
                if n + 2 <= m {
                    return Err(domain(op, "n + 1 > m - 1"));
                }
                prefix(&x.tele, &s.gamma, m - 1, "T_i = T'_i for i ≤ m - 2")?;
                let gamma = self.t_object(x, &s.gamma)?.tele;
                Ok(LmValue::Element(BTildeLm {
                    n: n + 1,
                    gamma,
                    r: rename_expr(self.inst(), &delta(m - 1, n)?, &s.r),
                }))
            }
            LmArgs::S { r, y } => {
                self.check_btilde(r)?;
                self.validate(y)?;
                let (m, n) = (r.n, y.base);
                if n <= m + 1 {
                    return Err(domain(op, "n > m + 1"));
                }
                prefix(&r.gamma, &y.tele, m + 1, "T_i = T'_i for i ≤ m")?;
                self.s_object(r, &y.tele).map(LmValue::Object)
            }
            LmArgs::STilde { r, s } => {
                self.check_btilde(r)?;
                self.check_btilde(s)?;
                let (m, n) = (r.n, s.n);
                if n <= m {
                    return Err(domain(op, "n > m"));
                }
                prefix(&r.gamma, &s.gamma, m + 1, "T_i = T'_i for i ≤ m")?;
                let gamma = self.s_object(r, &s.gamma)?.tele;
                let t = kleisli::theta_rr(
                    self.inst(),
                    &Term::new(m, r.r.clone()),
                    &Term::new(n, s.r.clone()),
                )?;
                Ok(LmValue::Element(BTildeLm {
                    n: n - 1,
                    gamma,
                    r: t.expr,
                }))
            }
            LmArgs::Delta { x } => {
                self.validate(x)?;
                let m = x.base;
                if m == 0 {
                    return Err(domain(op, "m > 0"));
                }
                let gamma = self.t_object(x, &x.tele)?.tele;
                Ok(LmValue::Element(BTildeLm {
                    n: m,
                    gamma,
                    r: self.inst().unit(m, m - 1),
                }))
            }
        }
    }

    /// The B-set operations of `C(RR, LM)` by pullback, transported along `mb`.
    pub fn bop_lm_definitional(
        &self,
        args: &LmArgs<Expr<M>, Elem<M, L>>,
    ) -> Result<LmValue<Expr<M>, Elem<M, L>>> {
        let checked = |x: &LmObj<Elem<M, L>>| self.validate(x).map(|_| x.clone());
        let generic = match args {
            LmArgs::T { x, y } => BOpArgs::T {
                gamma: checked(x)?,
                gamma2: checked(y)?,
            },
            LmArgs::TTilde { x, s } => BOpArgs::TTilde {
                gamma: checked(x)?,
                s: self.mb_lm_inv(s)?,
            },
            LmArgs::S { r, y } => BOpArgs::S {
                r: self.mb_lm_inv(r)?,
                gamma: checked(y)?,
            },
            LmArgs::STilde { r, s } => BOpArgs::STilde {
                r: self.mb_lm_inv(r)?,
                s: self.mb_lm_inv(s)?,
            },
            LmArgs::Delta { x } => BOpArgs::Delta { gamma: checked(x)? },
        };
        match csystem::bop(self, &generic)? {
            BOpValue::Object(x) => Ok(LmValue::Object(x)),
            BOpValue::Section(s) => self.mb_lm(&s).map(LmValue::Element),
        }
    }

    pub fn encode_obj(&self, x: &LmObj<Elem<M, L>>) -> Value {
        let tele: Vec<Value> = x.tele.iter().map(|t| self.module().encode(self.inst(), t)).collect();
        json!([x.base, tele])
    }

    pub fn encode_value(&self, v: &LmValue<Expr<M>, Elem<M, L>>) -> Value {
        match v {
            LmValue::Object(x) => self.encode_obj(x),
            LmValue::Element(b) => {
                let gamma: Vec<Value> =
                    b.gamma.iter().map(|t| self.module().encode(self.inst(), t)).collect();
                json!([b.n, [gamma, self.inst().encode(&b.r)]])
            }
        }
    }

    /// Parses `{"n": k, "tele": [..]}` or `[k, [..]]`.
    pub fn decode_obj(&self, v: &Value) -> Result<LmObj<Elem<M, L>>> {
        let (n, tele) = match v {
            Value::Array(a) if a.len() == 2 => (&a[0], &a[1]),
            Value::Object(o) => (
                o.get("n").ok_or_else(|| Error::Parse(format!("missing \"n\" in {v}")))?,
                o.get("tele").unwrap_or(&Value::Null),
            ),
            _ => return Err(Error::Parse(format!("expected an object, got {v}"))),
        };
        let n = n
            .as_u64()
            .ok_or_else(|| Error::Parse(format!("bad length {n}")))? as usize;
        let tele = match tele {
            Value::Null => Vec::new(),
            Value::Array(a) => a
                .iter()
                .map(|t| self.module().decode(self.inst(), t))
                .collect::<Result<Vec<_>>>()?,
            _ => return Err(Error::Parse(format!("bad telescope {tele}"))),
        };
        self.obj(n, tele)
    }

    /// Parses `{"n": k, "gamma": [..], "r": term}`.
    pub fn decode_btilde(&self, v: &Value) -> Result<BTildeLm<Expr<M>, Elem<M, L>>> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("missing {k:?} in {v}")));
        let n = field("n")?
            .as_u64()
            .ok_or_else(|| Error::Parse(format!("bad \"n\" in {v}")))? as usize;
        let gamma = field("gamma")?
            .as_array()
            .ok_or_else(|| Error::Parse(format!("bad \"gamma\" in {v}")))?
            .iter()
            .map(|t| self.module().decode(self.inst(), t))
            .collect::<Result<Vec<_>>>()?;
        let r = self.inst().decode_in(n, field("r")?)?;
        let b = BTildeLm { n, gamma, r };
        self.check_btilde(&b)?;
        Ok(b)
    }

    /// A random `(n, (Γ, r))` with `Γ` extending `below`.
    pub fn sample_btilde(
        &self,
        below: &LmObj<Elem<M, L>>,
        extra: usize,
        rng: &mut Prng,
    ) -> Option<BTildeLm<Expr<M>, Elem<M, L>>> {
        let top = csystem::extend_randomly(self, below, extra + 1, rng)?;
        let s = self.sample_section(&top, rng)?;
        self.mb_lm(&s).ok()
    }
}
