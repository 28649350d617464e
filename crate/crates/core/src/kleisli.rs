//! The Kleisli category `T` of a relative monad.
//!
//! A morphism `m → n` of `T` is an `m`-tuple of elements of `RR(n)`. The
//! codomain is carried explicitly since the empty tuple does not determine it.

use std::fmt;

use crate::error::{Error, Result};
use crate::finfun::FinFun;
use crate::relmonad::{RelativeMonad, Term};
use crate::Prng;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KMor<E> {
    cod: usize,
    comps: Vec<E>,
}

impl<E> KMor<E> {
    /// No scope checking; see [`checked`] for validated construction.
    pub fn new(cod: usize, comps: Vec<E>) -> Self {
        KMor { cod, comps }
    }

    pub fn dom(&self) -> usize {
        self.comps.len()
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn comp(&self, i: usize) -> &E {
        &self.comps[i]
    }

    pub fn comps(&self) -> &[E] {
        &self.comps
    }

    pub fn into_comps(self) -> Vec<E> {
        self.comps
    }
}

impl<E: fmt::Debug> fmt::Debug for KMor<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c:?}")?;
        }
        write!(f, "⟩:{}→{}", self.dom(), self.cod)
    }
}

/// Builds a morphism after checking that every component lies in `RR(cod)`.
pub fn checked<M: RelativeMonad>(inst: &M, cod: usize, comps: Vec<M::Expr>) -> Result<KMor<M::Expr>> {
    for c in &comps {
        if !inst.is_element(cod, c) {
            return Err(Error::IllFormed {
                ctx: cod,
                detail: inst.encode(c).to_string(),
            });
        }
    }
    Ok(KMor::new(cod, comps))
}

pub fn from_terms<M: RelativeMonad>(inst: &M, cod: usize, terms: Vec<Term<M::Expr>>) -> Result<KMor<M::Expr>> {
    let mut comps = Vec::with_capacity(terms.len());
    for t in terms {
        if t.ctx != cod {
            return Err(Error::Arity {
                expected: cod,
                found: t.ctx,
            });
        }
        comps.push(t.expr);
    }
    checked(inst, cod, comps)
}

pub fn show<M: RelativeMonad>(inst: &M, f: &KMor<M::Expr>) -> String {
    let comps: Vec<String> = f.comps.iter().map(|c| inst.encode(c).to_string()).collect();
    format!("[{}]:{}→{}", comps.join(","), f.dom(), f.cod)
}

pub fn t_identity<M: RelativeMonad>(inst: &M, n: usize) -> KMor<M::Expr> {
    KMor::new(n, (0..n).map(|i| inst.unit(n, i)).collect())
}

/// `f ∘_T g`, with `f` applied first: component `i` is `ρ(g)(f(i))`.
pub fn t_compose<M: RelativeMonad>(
    inst: &M,
    f: &KMor<M::Expr>,
    g: &KMor<M::Expr>,
) -> Result<KMor<M::Expr>> {
    if f.cod != g.dom() {
        return Err(Error::CompositionDomain {
            left: format!("{}→{}", f.dom(), f.cod),
            right: format!("{}→{}", g.dom(), g.cod),
        });
    }
    Ok(KMor::new(
        g.cod,
        f.comps.iter().map(|c| inst.extend(g, c)).collect(),
    ))
}

/// The functor `L : F → T`, `ff ↦ (x_{ff(0)}, …)`.
pub fn from_finfun<M: RelativeMonad>(inst: &M, ff: &FinFun) -> KMor<M::Expr> {
    let n = ff.cod();
    KMor::new(n, ff.values().iter().map(|&v| inst.unit(n, v)).collect())
}

/// Every morphism `m → n`, when `RR(n)` is enumerable.
pub fn all_kmors<M: RelativeMonad>(inst: &M, m: usize, n: usize) -> Option<Vec<KMor<M::Expr>>> {
    let carrier = inst.elements(n)?;
    let mut out = vec![Vec::with_capacity(m)];
    for _ in 0..m {
        let mut next = Vec::with_capacity(out.len() * carrier.len());
        for prefix in &out {
            for e in &carrier {
                let mut v = prefix.clone();
                v.push(e.clone());
                next.push(v);
            }
        }
        out = next;
    }
    Some(out.into_iter().map(|c| KMor::new(n, c)).collect())
}

/// `|RR(n)|^m`, saturating, when `RR(n)` is enumerable.
pub fn count_kmors<M: RelativeMonad>(inst: &M, m: usize, n: usize) -> Option<u64> {
    let k = inst.elements(n)?.len() as u64;
    Some((0..m).fold(1u64, |acc, _| acc.saturating_mul(k)))
}

pub fn sample_kmor<M: RelativeMonad>(
    inst: &M,
    m: usize,
    n: usize,
    size: usize,
    rng: &mut Prng,
) -> Option<KMor<M::Expr>> {
    let comps = (0..m)
        .map(|_| inst.sample(n, size, rng))
        .collect::<Option<Vec<_>>>()?;
    Some(KMor::new(n, comps))
}

/// `qq(f) = (ι^1(f(0)), …, ι^1(f(n-1)), x_m^{m+1})` for `f : n → m`.
pub fn qq<M: RelativeMonad>(inst: &M, f: &KMor<M::Expr>) -> KMor<M::Expr> {
    qq_iter(inst, f, 1)
}

/// Closed form of the `i`-fold `qq`: weaken every component by `i` and
/// append the `i` fresh generators.
pub fn qq_iter<M: RelativeMonad>(inst: &M, f: &KMor<M::Expr>, i: usize) -> KMor<M::Expr> {
    if i == 0 {
        return f.clone();
    }
    let m = f.cod;
    let weaken = from_finfun(inst, &crate::finfun::iota(m, i));
    let mut comps: Vec<M::Expr> = f.comps.iter().map(|c| inst.extend(&weaken, c)).collect();
    comps.extend((m..m + i).map(|j| inst.unit(m + i, j)));
    KMor::new(m + i, comps)
}

/// `qq` applied `i` times, one weakening at a time.
pub fn qq_iter_by_iteration<M: RelativeMonad>(
    inst: &M,
    f: &KMor<M::Expr>,
    i: usize,
) -> KMor<M::Expr> {
    let mut g = f.clone();
    for _ in 0..i {
        let m = g.cod;
        let weaken = from_finfun(inst, &crate::finfun::iota(m, 1));
        let mut comps: Vec<M::Expr> = g.comps.iter().map(|c| inst.extend(&weaken, c)).collect();
        comps.push(inst.unit(m + 1, m));
        g = KMor::new(m + 1, comps);
    }
    g
}

/// `(x_0^m, …, x_{m-1}^m, r) : m+1 → m`.
pub fn section_tuple<M: RelativeMonad>(inst: &M, m: usize, r: &M::Expr) -> KMor<M::Expr> {
    let mut comps: Vec<M::Expr> = (0..m).map(|i| inst.unit(m, i)).collect();
    comps.push(r.clone());
    KMor::new(m, comps)
}

/// `θ_{m,n}(r, s) = ρ(qq^{n-m-1}(x_0^m, …, x_{m-1}^m, r))(s)`: substitutes `r`
/// for the variable `m` of `s` and lowers the variables above it.
pub fn theta_rr<M: RelativeMonad>(
    inst: &M,
    r: &Term<M::Expr>,
    s: &Term<M::Expr>,
) -> Result<Term<M::Expr>> {
    let (m, n) = (r.ctx, s.ctx);
    if n <= m {
        return Err(Error::Precondition(format!(
            "theta needs n > m, got m = {m}, n = {n}"
        )));
    }
    let f = qq_iter(inst, &section_tuple(inst, m, &r.expr), n - m - 1);
    inst.bind(&f, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finfun::{delta, iota, sigma};
    use crate::relmonad::{exceptions, variables, BindingSignature, FreeMonad, Tree};
    use proptest::prelude::*;
    use rand::SeedableRng;

    #[test]
    fn compose_examples() {
        let v = variables();
        let a = KMor::new(2, vec![1, 0]);
        let b = KMor::new(2, vec![0, 0]);
        assert_eq!(t_compose(&v, &a, &b).unwrap(), KMor::new(2, vec![0, 0]));
        assert_eq!(t_compose(&v, &a, &t_identity(&v, 2)).unwrap(), a);
        assert_eq!(t_compose(&v, &t_identity(&v, 2), &b).unwrap(), b);
        assert!(matches!(
            t_compose(&v, &KMor::new(3, vec![0]), &a),
            Err(Error::CompositionDomain { .. })
        ));
    }

    #[test]
    fn identities() {
        let v = variables();
        assert_eq!(t_identity(&v, 0), KMor::new(0, vec![]));
        assert_eq!(t_identity(&v, 2), KMor::new(2, vec![0, 1]));
        let free = FreeMonad::new(BindingSignature::lam_app());
        assert_eq!(t_identity(&free, 1), KMor::new(1, vec![Tree::Var(0)]));
    }

    #[test]
    fn l_on_generators() {
        let v = variables();
        for n in 0..5 {
            for i in 0..=n {
                let expect: Vec<usize> = (0..=n).filter(|&j| j != i).collect();
                assert_eq!(from_finfun(&v, &delta(i, n).unwrap()), KMor::new(n + 1, expect));
                let mut s: Vec<usize> = (0..=n).collect();
                s.insert(i, i);
                assert_eq!(from_finfun(&v, &sigma(i, n).unwrap()), KMor::new(n + 1, s));
            }
            assert_eq!(
                from_finfun(&v, &iota(n, 1)),
                KMor::new(n + 1, (0..n).collect())
            );
        }
    }

    #[test]
    fn qq_examples() {
        let v = variables();
        for n in 0..4 {
            assert_eq!(qq(&v, &t_identity(&v, n)), t_identity(&v, n + 1));
        }
        assert_eq!(
            qq(&v, &KMor::new(1, vec![0, 0])),
            KMor::new(2, vec![0, 0, 1])
        );
        for n in 0..4 {
            for i in 0..3 {
                assert_eq!(
                    qq_iter(&v, &from_finfun(&v, &iota(n, 1)), i),
                    from_finfun(&v, &delta(n, n + i).unwrap())
                );
            }
        }
    }

    #[test]
    fn theta_examples() {
        let v = variables();
        let r = Term::new(1, 0);
        assert_eq!(theta_rr(&v, &r, &Term::new(2, 1)).unwrap(), Term::new(1, 0));
        assert_eq!(theta_rr(&v, &r, &Term::new(2, 0)).unwrap(), Term::new(1, 0));
        let e = exceptions();
        assert_eq!(
            theta_rr(&e, &Term::new(0, None), &Term::new(1, Some(0))).unwrap(),
            Term::new(0, None)
        );
        assert!(matches!(
            theta_rr(&v, &Term::new(2, 0), &Term::new(2, 0)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn l_is_functorial_and_truncates() {
        let e = exceptions();
        for a in 0..=2 {
            assert_eq!(from_finfun(&e, &FinFun::identity(a)), t_identity(&e, a));
            for b in 0..=2 {
                for ff in FinFun::all(a, b) {
                    for c in 0..=2 {
                        for gg in FinFun::all(b, c) {
                            let lhs = from_finfun(&e, &ff.then(&gg).unwrap());
                            let rhs =
                                t_compose(&e, &from_finfun(&e, &ff), &from_finfun(&e, &gg)).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                        for g in all_kmors(&e, b, c).unwrap() {
                            let h = t_compose(&e, &from_finfun(&e, &ff), &g).unwrap();
                            for i in 0..a {
                                assert_eq!(h.comp(i), g.comp(ff.apply(i)));
                            }
                        }
                    }
                }
                for f in all_kmors(&e, a + 1, b).unwrap() {
                    let h = t_compose(&e, &from_finfun(&e, &iota(a, 1)), &f).unwrap();
                    assert_eq!(h.comps(), &f.comps()[..a]);
                }
            }
        }
    }

    fn free() -> FreeMonad {
        FreeMonad::new(BindingSignature::lam_app())
    }

    proptest! {
        #[test]
        fn closed_form_qq_iter_matches_iteration(seed in any::<u64>(), n in 0usize..4, m in 0usize..4, i in 0usize..4) {
            let inst = free();
            let mut rng = Prng::seed_from_u64(seed);
            if let Some(f) = sample_kmor(&inst, n, m, 7, &mut rng) {
                prop_assert_eq!(qq_iter(&inst, &f, i), qq_iter_by_iteration(&inst, &f, i));
            }
        }

        #[test]
        fn t_compose_is_associative(seed in any::<u64>(), a in 0usize..3, b in 0usize..3, c in 0usize..3, d in 0usize..3) {
            let inst = free();
            let mut rng = Prng::seed_from_u64(seed);
            let fs = (
                sample_kmor(&inst, a, b, 6, &mut rng),
                sample_kmor(&inst, b, c, 6, &mut rng),
                sample_kmor(&inst, c, d, 6, &mut rng),
            );
            if let (Some(f), Some(g), Some(h)) = fs {
                let lhs = t_compose(&inst, &t_compose(&inst, &f, &g).unwrap(), &h).unwrap();
                let rhs = t_compose(&inst, &f, &t_compose(&inst, &g, &h).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
                prop_assert_eq!(t_compose(&inst, &f, &t_identity(&inst, b)).unwrap(), f.clone());
                prop_assert_eq!(t_compose(&inst, &t_identity(&inst, a), &f).unwrap(), f);
            }
        }

        #[test]
        fn qq_iter_on_section_tuple(seed in any::<u64>(), m in 0usize..4, i in 0usize..4) {
            // qq^i(x_0, …, x_{m-1}, r) = (x_0, …, x_{m-1}, ι^i(r), x_m, …, x_{m+i-1})
            let inst = free();
            let mut rng = Prng::seed_from_u64(seed);
            if let Some(r) = inst.sample(m, 7, &mut rng) {
                let got = qq_iter(&inst, &section_tuple(&inst, m, &r), i);
                let mut expect: Vec<Tree> = (0..m).map(Tree::Var).collect();
                expect.push(crate::relmonad::rename(&inst, &iota(m, i), &Term::new(m, r)).unwrap().expr);
                expect.extend((m..m + i).map(Tree::Var));
                prop_assert_eq!(got, KMor::new(m + i, expect));
            }
        }
    }
}
