//! The extension `CC[F]` of a C-system by a presheaf `F`.
//!
//! An object is a base object `X` with a telescope `(T_0, …, T_{l(X)-1})`,
//! `T_i ∈ F(ft^{l(X)-i}(X))`, stored outermost first. Morphisms are base
//! morphisms with decorated endpoints.

use std::fmt::Debug;
use std::hash::Hash;

use crate::csystem::{ft_iter, p_iter, q_iter, star_iter, CHom, CSystem};
use crate::error::{Error, Result};
use crate::Prng;

/// A presheaf on the category underlying `C`.
pub trait Presheaf<C: CSystem> {
    type Elem: Clone + Eq + Hash + Debug;

    fn name(&self) -> String;

    /// `F(f) : F(cod f) → F(dom f)`. Callers guarantee `e ∈ F(cod f)`.
    fn act(&self, cc: &C, f: &C::Mor, e: &Self::Elem) -> Self::Elem;

    fn contains(&self, cc: &C, x: &C::Ob, e: &Self::Elem) -> bool;

    fn elements(&self, cc: &C, x: &C::Ob) -> Option<Vec<Self::Elem>> {
        let _ = (cc, x);
        None
    }

    fn sample(&self, cc: &C, x: &C::Ob, rng: &mut Prng) -> Option<Self::Elem>;

    fn show(&self, cc: &C, e: &Self::Elem) -> String {
        let _ = cc;
        format!("{e:?}")
    }
}

/// The presheaf with one-point values.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitPresheaf;

impl<C: CSystem> Presheaf<C> for UnitPresheaf {
    type Elem = ();

    fn name(&self) -> String {
        "pt".into()
    }
    fn act(&self, _cc: &C, _f: &C::Mor, _e: &()) {}
    fn contains(&self, _cc: &C, _x: &C::Ob, _e: &()) -> bool {
        true
    }
    fn elements(&self, _cc: &C, _x: &C::Ob) -> Option<Vec<()>> {
        Some(vec![()])
    }
    fn sample(&self, _cc: &C, _x: &C::Ob, _rng: &mut Prng) -> Option<()> {
        Some(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtObj<O, E> {
    pub base: O,
    pub tele: Vec<E>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtMor<O, E, M> {
    pub src: ExtObj<O, E>,
    pub dst: ExtObj<O, E>,
    pub base: M,
}

pub type ObOf<C, F> = ExtObj<<C as CSystem>::Ob, <F as Presheaf<C>>::Elem>;
pub type MorOf<C, F> =
    ExtMor<<C as CSystem>::Ob, <F as Presheaf<C>>::Elem, <C as CSystem>::Mor>;

#[derive(Debug, Clone)]
pub struct Ext<C, F> {
    base: C,
    presheaf: F,
}

impl<C: CSystem, F: Presheaf<C>> Ext<C, F> {
    pub fn new(base: C, presheaf: F) -> Self {
        Ext { base, presheaf }
    }

    pub fn base(&self) -> &C {
        &self.base
    }

    pub fn presheaf(&self) -> &F {
        &self.presheaf
    }

    /// The object whose presheaf value holds `T_i`.
    pub fn slot(&self, x: &C::Ob, i: usize) -> C::Ob {
        ft_iter(&self.base, x, self.base.length(x) - i)
    }

    pub fn validate(&self, o: &ObOf<C, F>) -> Result<()> {
        let l = self.base.length(&o.base);
        if o.tele.len() != l {
            return Err(Error::Telescope(format!(
                "telescope of length {} over an object of length {l}",
                o.tele.len()
            )));
        }
        for (i, t) in o.tele.iter().enumerate() {
            let slot = self.slot(&o.base, i);
            if !self.presheaf.contains(&self.base, &slot, t) {
                return Err(Error::Telescope(format!(
                    "entry {i} = {} is not in F({})",
                    self.presheaf.show(&self.base, t),
                    self.base.show_ob(&slot)
                )));
            }
        }
        Ok(())
    }

    pub fn obj(&self, base: C::Ob, tele: Vec<F::Elem>) -> Result<ObOf<C, F>> {
        let o = ExtObj { base, tele };
        self.validate(&o)?;
        Ok(o)
    }

    pub fn mor(&self, src: ObOf<C, F>, dst: ObOf<C, F>, base: C::Mor) -> Result<MorOf<C, F>> {
        if self.base.dom(&base) != src.base || self.base.cod(&base) != dst.base {
            return Err(Error::Structure(format!(
                "{} does not run between the given base objects",
                self.base.show_mor(&base)
            )));
        }
        Ok(ExtMor { src, dst, base })
    }

    pub fn tr(&self, f: &MorOf<C, F>) -> C::Mor {
        f.base.clone()
    }

    pub fn tr_ob(&self, x: &ObOf<C, F>) -> C::Ob {
        x.base.clone()
    }

    /// `y_X = F(X → pt)(y)`.
    fn restrict(&self, y: &F::Elem, x: &C::Ob) -> Result<F::Elem> {
        let to_pt = p_iter(&self.base, x, self.base.length(x))?;
        Ok(self.presheaf.act(&self.base, &to_pt, y))
    }

    /// `X ↦ (X, (y_{ft^l X}, …, y_{ft X}))`.
    pub fn tr_bang_ob(&self, y: &F::Elem, x: &C::Ob) -> Result<ObOf<C, F>> {
        let l = self.base.length(x);
        let tele = (0..l)
            .map(|i| self.restrict(y, &self.slot(x, i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExtObj {
            base: x.clone(),
            tele,
        })
    }

    pub fn tr_bang_mor(&self, y: &F::Elem, f: &C::Mor) -> Result<MorOf<C, F>> {
        Ok(ExtMor {
            src: self.tr_bang_ob(y, &self.base.dom(f))?,
            dst: self.tr_bang_ob(y, &self.base.cod(f))?,
            base: f.clone(),
        })
    }

    /// The splitting `tr!_y`, or `None` when `y ∉ F(pt)`.
    pub fn tr_bang(&self, y: F::Elem) -> Option<TrBang<'_, C, F>> {
        self.presheaf
            .contains(&self.base, &self.base.pt(), &y)
            .then_some(TrBang { ext: self, y })
    }

    pub fn tr_hom(&self) -> Tr<'_, C, F> {
        Tr { ext: self }
    }

    /// `((X, Γ), (X, Γ'), Id_X)`.
    pub fn can_iso(
        &self,
        x: &C::Ob,
        g: Vec<F::Elem>,
        g2: Vec<F::Elem>,
    ) -> Result<MorOf<C, F>> {
        let src = self.obj(x.clone(), g)?;
        let dst = self.obj(x.clone(), g2)?;
        Ok(ExtMor {
            src,
            dst,
            base: self.base.identity(x),
        })
    }

    /// Closed form of `f*((Y, Γ'), i)`: the base pullback, with the new
    /// telescope entries `F(q(f, ft^{i-k}(Y), k))(T'_{l(Y)-i+k})`.
    pub fn star_iter_closed(
        &self,
        f: &MorOf<C, F>,
        y: &ObOf<C, F>,
        i: usize,
    ) -> Result<ObOf<C, F>> {
        let ly = self.base.length(&y.base);
        if i > ly {
            return Err(Error::Structure(format!("depth {i} exceeds length {ly}")));
        }
        if f.dst != ft_iter(self, y, i) {
            return Err(Error::Structure("codomain is not ft^i(Y)".into()));
        }
        let base = star_iter(&self.base, &f.base, &y.base, i)?;
        let mut tele = f.src.tele.clone();
        for k in 0..i {
            let yk = ft_iter(&self.base, &y.base, i - k);
            let g = q_iter(&self.base, &f.base, &yk, k)?;
            tele.push(self.presheaf.act(&self.base, &g, &y.tele[ly - i + k]));
        }
        Ok(ExtObj { base, tele })
    }

    fn ob_elements(&self, x: &C::Ob) -> Option<Vec<F::Elem>> {
        self.presheaf.elements(&self.base, x)
    }
}

impl<C: CSystem, F: Presheaf<C>> CSystem for Ext<C, F> {
    type Ob = ObOf<C, F>;
    type Mor = MorOf<C, F>;

    fn name(&self) -> String {
        format!("{}[{}]", self.base.name(), self.presheaf.name())
    }

    fn length(&self, x: &Self::Ob) -> usize {
        self.base.length(&x.base)
    }

    fn pt(&self) -> Self::Ob {
        ExtObj {
            base: self.base.pt(),
            tele: Vec::new(),
        }
    }

    fn ft(&self, x: &Self::Ob) -> Self::Ob {
        let mut tele = x.tele.clone();
        tele.pop();
        ExtObj {
            base: self.base.ft(&x.base),
            tele,
        }
    }

    fn dom(&self, f: &Self::Mor) -> Self::Ob {
        f.src.clone()
    }

    fn cod(&self, f: &Self::Mor) -> Self::Ob {
        f.dst.clone()
    }

    fn identity(&self, x: &Self::Ob) -> Self::Mor {
        ExtMor {
            src: x.clone(),
            dst: x.clone(),
            base: self.base.identity(&x.base),
        }
    }

    fn compose(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor> {
        if f.dst != g.src {
            return Err(Error::CompositionDomain {
                left: self.show_ob(&f.dst),
                right: self.show_ob(&g.src),
            });
        }
        Ok(ExtMor {
            src: f.src.clone(),
            dst: g.dst.clone(),
            base: self.base.compose(&f.base, &g.base)?,
        })
    }

    fn p(&self, x: &Self::Ob) -> Self::Mor {
        ExtMor {
            src: x.clone(),
            dst: self.ft(x),
            base: self.base.p(&x.base),
        }
    }

    /// `f*((Y, Γ')) = (f*(Y), (T_0, …, T_{l(X)-1}, F(f)(T'_{l(Y)-1})))`.
    fn star(&self, f: &Self::Mor, y: &Self::Ob) -> Result<Self::Ob> {
        if self.length(y) == 0 || f.dst != self.ft(y) {
            return Err(Error::Structure(format!(
                "f*(Y) needs f : X → ft(Y) with l(Y) > 0; got f into {} and Y = {}",
                self.show_ob(&f.dst),
                self.show_ob(y)
            )));
        }
        let base = self.base.star(&f.base, &y.base)?;
        let mut tele = f.src.tele.clone();
        let last = y.tele.last().expect("positive length");
        tele.push(self.presheaf.act(&self.base, &f.base, last));
        Ok(ExtObj { base, tele })
    }

    fn q(&self, f: &Self::Mor, y: &Self::Ob) -> Result<Self::Mor> {
        let src = self.star(f, y)?;
        Ok(ExtMor {
            src,
            dst: y.clone(),
            base: self.base.q(&f.base, &y.base)?,
        })
    }

    fn section_of(&self, f: &Self::Mor) -> Result<Self::Mor> {
        let y = &f.dst;
        if self.length(y) == 0 {
            return Err(Error::NoSection);
        }
        let ftf = self.compose(f, &self.p(y))?;
        Ok(ExtMor {
            src: f.src.clone(),
            dst: self.star(&ftf, y)?,
            base: self.base.section_of(&f.base)?,
        })
    }

    fn children(&self, x: &Self::Ob) -> Option<Vec<Self::Ob>> {
        let kids = self.base.children(&x.base)?;
        let elems = self.ob_elements(&x.base)?;
        let mut out = Vec::with_capacity(kids.len() * elems.len());
        for k in &kids {
            for e in &elems {
                let mut tele = x.tele.clone();
                tele.push(e.clone());
                out.push(ExtObj {
                    base: k.clone(),
                    tele,
                });
            }
        }
        Some(out)
    }

    fn homs(&self, x: &Self::Ob, y: &Self::Ob) -> Option<Vec<Self::Mor>> {
        Some(
            self.base
                .homs(&x.base, &y.base)?
                .into_iter()
                .map(|base| ExtMor {
                    src: x.clone(),
                    dst: y.clone(),
                    base,
                })
                .collect(),
        )
    }

    fn sample_child(&self, x: &Self::Ob, rng: &mut Prng) -> Option<Self::Ob> {
        let base = self.base.sample_child(&x.base, rng)?;
        let e = self.presheaf.sample(&self.base, &x.base, rng)?;
        let mut tele = x.tele.clone();
        tele.push(e);
        Some(ExtObj { base, tele })
    }

    fn sample_mor(&self, x: &Self::Ob, y: &Self::Ob, rng: &mut Prng) -> Option<Self::Mor> {
        Some(ExtMor {
            src: x.clone(),
            dst: y.clone(),
            base: self.base.sample_mor(&x.base, &y.base, rng)?,
        })
    }

    fn sample_section(&self, x: &Self::Ob, rng: &mut Prng) -> Option<Self::Mor> {
        if self.length(x) == 0 {
            return None;
        }
        Some(ExtMor {
            src: self.ft(x),
            dst: x.clone(),
            base: self.base.sample_section(&x.base, rng)?,
        })
    }

    fn show_ob(&self, x: &Self::Ob) -> String {
        let tele: Vec<String> = x
            .tele
            .iter()
            .map(|t| self.presheaf.show(&self.base, t))
            .collect();
        format!("({}, [{}])", self.base.show_ob(&x.base), tele.join(", "))
    }

    fn show_mor(&self, f: &Self::Mor) -> String {
        format!(
            "{} → {} by {}",
            self.show_ob(&f.src),
            self.show_ob(&f.dst),
            self.base.show_mor(&f.base)
        )
    }
}

/// The projection `tr : CC[F] → CC`.
pub struct Tr<'a, C, F> {
    ext: &'a Ext<C, F>,
}

impl<C: CSystem, F: Presheaf<C>> CHom for Tr<'_, C, F> {
    type Src = Ext<C, F>;
    type Dst = C;

    fn name(&self) -> String {
        format!("tr:{}", self.ext.name())
    }
    fn src(&self) -> &Ext<C, F> {
        self.ext
    }
    fn dst(&self) -> &C {
        &self.ext.base
    }
    fn ob(&self, x: &ObOf<C, F>) -> C::Ob {
        self.ext.tr_ob(x)
    }
    fn mor(&self, f: &MorOf<C, F>) -> C::Mor {
        self.ext.tr(f)
    }
}

/// The splitting `tr!_y : CC → CC[F]` of `tr` at `y ∈ F(pt)`.
pub struct TrBang<'a, C, F: Presheaf<C>>
where
    C: CSystem,
{
    ext: &'a Ext<C, F>,
    y: F::Elem,
}

impl<C: CSystem, F: Presheaf<C>> CHom for TrBang<'_, C, F> {
    type Src = C;
    type Dst = Ext<C, F>;

    fn name(&self) -> String {
        format!("tr!:{}", self.ext.name())
    }
    fn src(&self) -> &C {
        &self.ext.base
    }
    fn dst(&self) -> &Ext<C, F> {
        self.ext
    }
    fn ob(&self, x: &C::Ob) -> ObOf<C, F> {
        self.ext
            .tr_bang_ob(&self.y, x)
            .expect("iterated projections exist for every object")
    }
    fn mor(&self, f: &C::Mor) -> MorOf<C, F> {
        self.ext
            .tr_bang_mor(&self.y, f)
            .expect("iterated projections exist for every object")
    }
}
