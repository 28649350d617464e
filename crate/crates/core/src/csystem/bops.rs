//! The B-set operations `T, T̃, S, S̃, δ` of an arbitrary C-system, computed
//! from their definitions by pullback.

use std::fmt;

use super::{is_section, lt, star_mor, star_over, CSystem};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BOp {
    T,
    TTilde,
    S,
    STilde,
    Delta,
}

impl BOp {
    pub const ALL: [BOp; 5] = [BOp::T, BOp::TTilde, BOp::S, BOp::STilde, BOp::Delta];

    pub fn name(self) -> &'static str {
        match self {
            BOp::T => "T",
            BOp::TTilde => "Tt",
            BOp::S => "S",
            BOp::STilde => "St",
            BOp::Delta => "delta",
        }
    }

    pub fn parse(s: &str) -> Result<BOp> {
        match s {
            "T" => Ok(BOp::T),
            "Tt" | "T~" | "TTilde" => Ok(BOp::TTilde),
            "S" => Ok(BOp::S),
            "St" | "S~" | "STilde" => Ok(BOp::STilde),
            "delta" | "δ" => Ok(BOp::Delta),
            _ => Err(Error::Parse(format!(
                "unknown operation {s:?}; expected one of T, Tt, S, St, delta"
            ))),
        }
    }
}

impl fmt::Display for BOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Arguments in C-system terms. Elements of `Õb` are sections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BOpArgs<O, M> {
    T { gamma: O, gamma2: O },
    TTilde { gamma: O, s: M },
    S { r: M, gamma: O },
    STilde { r: M, s: M },
    Delta { gamma: O },
}

impl<O, M> BOpArgs<O, M> {
    pub fn op(&self) -> BOp {
        match self {
            BOpArgs::T { .. } => BOp::T,
            BOpArgs::TTilde { .. } => BOp::TTilde,
            BOpArgs::S { .. } => BOp::S,
            BOpArgs::STilde { .. } => BOp::STilde,
            BOpArgs::Delta { .. } => BOp::Delta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BOpValue<O, M> {
    Object(O),
    Section(M),
}

fn domain(op: BOp, violated: impl Into<String>) -> Error {
    Error::BopDomain {
        op: op.name(),
        violated: violated.into(),
    }
}

fn need_section<C: CSystem>(cc: &C, op: BOp, s: &C::Mor) -> Result<C::Ob> {
    if !is_section(cc, s) {
        return Err(Error::SectionInvariant(format!(
            "{op} argument {} is not a section",
            cc.show_mor(s)
        )));
    }
    Ok(cc.cod(s))
}

/// `T(Γ, Γ') = p_Γ*(Γ')`, `T̃(Γ, s) = p_Γ*(s)`, `S(r, Γ) = r*(Γ)`,
/// `S̃(r, s) = r*(s)` and `δ(Γ) = s_{Id_Γ}`.
pub fn bop<C: CSystem>(cc: &C, args: &BOpArgs<C::Ob, C::Mor>) -> Result<BOpValue<C::Ob, C::Mor>> {
    let op = args.op();
    match args {
        BOpArgs::T { gamma, gamma2 } => {
            if cc.length(gamma) == 0 {
                return Err(domain(op, "l(Γ) > 0"));
            }
            if !lt(cc, &cc.ft(gamma), gamma2) {
                return Err(domain(op, "ft(Γ) < Γ'"));
            }
            star_over(cc, &cc.p(gamma), gamma2).map(BOpValue::Object)
        }
        BOpArgs::TTilde { gamma, s } => {
            if cc.length(gamma) == 0 {
                return Err(domain(op, "l(Γ) > 0"));
            }
            let ds = need_section(cc, op, s)?;
            if !lt(cc, &cc.ft(gamma), &ds) {
                return Err(domain(op, "ft(Γ) < ∂(s)"));
            }
            star_mor(cc, &cc.p(gamma), s).map(BOpValue::Section)
        }
        BOpArgs::S { r, gamma } => {
            let dr = need_section(cc, op, r)?;
            if !lt(cc, &dr, gamma) {
                return Err(domain(op, "∂(r) < Γ"));
            }
            star_over(cc, r, gamma).map(BOpValue::Object)
        }
        BOpArgs::STilde { r, s } => {
            let dr = need_section(cc, op, r)?;
            let ds = need_section(cc, op, s)?;
            if !lt(cc, &dr, &ds) {
                return Err(domain(op, "∂(r) < ∂(s)"));
            }
            star_mor(cc, r, s).map(BOpValue::Section)
        }
        BOpArgs::Delta { gamma } => {
            if cc.length(gamma) == 0 {
                return Err(domain(op, "l(Γ) > 0"));
            }
            cc.section_of(&cc.identity(gamma)).map(BOpValue::Section)
        }
    }
}
