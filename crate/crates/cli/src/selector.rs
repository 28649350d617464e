//! Instance and system selectors: `vars`, `unit`, `exc`, `free:<file>`,
//! `crr:<inst>`, `crrlm:<inst>:rrmod` and `crrlm:free:<file>`.

use csys::crrlm::TypeSignature;
use csys::relmonad::FreeMonad;
use csys::sigfile;

pub enum Monad {
    Vars,
    Unit,
    Exc,
    Free {
        inst: FreeMonad,
        ty: Option<TypeSignature>,
    },
}

pub enum Module {
    Rr,
    TwoSorted(TypeSignature),
}

pub enum System {
    Crr(Monad),
    Crrlm(Monad, Module),
}

pub fn parse_monad(s: &str) -> Result<Monad, String> {
    match s {
        "vars" => Ok(Monad::Vars),
        "unit" => Ok(Monad::Unit),
        "exc" => Ok(Monad::Exc),
        _ => match s.strip_prefix("free:") {
            Some(path) => {
                let file = sigfile::load(path).map_err(|e| e.to_string())?;
                Ok(Monad::Free {
                    inst: FreeMonad::new(file.el),
                    ty: file.ty,
                })
            }
            None => Err(format!(
                "unknown instance {s:?}; expected vars, unit, exc or free:<file>"
            )),
        },
    }
}

pub fn parse_system(s: &str) -> Result<System, String> {
    if let Some(inst) = s.strip_prefix("crr:") {
        return parse_monad(inst).map(System::Crr);
    }
    if let Some(rest) = s.strip_prefix("crrlm:") {
        if let Some(inst) = rest.strip_suffix(":rrmod") {
            return Ok(System::Crrlm(parse_monad(inst)?, Module::Rr));
        }
        return match parse_monad(rest)? {
            Monad::Free { inst, ty: Some(ty) } => Ok(System::Crrlm(
                Monad::Free {
                    inst,
                    ty: Some(ty.clone()),
                },
                Module::TwoSorted(ty),
            )),
            Monad::Free { ty: None, .. } => Err(format!(
                "{rest:?} declares no type constructors; use crrlm:free:<file>:rrmod for the module RR"
            )),
            _ => Err(format!("{s:?} needs a module; try crrlm:{rest}:rrmod")),
        };
    }
    Err(format!(
        "unknown system {s:?}; expected crr:<inst>, crrlm:<inst>:rrmod or crrlm:free:<file>"
    ))
}

/// Runs `$body` with `$m` bound to the concrete monad of a [`Monad`].
#[macro_export]
macro_rules! with_monad {
    ($sel:expr, |$m:ident| $body:expr) => {
        match $sel {
            $crate::selector::Monad::Vars => {
                let $m = csys::relmonad::variables();
                $body
            }
            $crate::selector::Monad::Unit => {
                let $m = csys::relmonad::unit_carrier();
                $body
            }
            $crate::selector::Monad::Exc => {
                let $m = csys::relmonad::exceptions();
                $body
            }
            $crate::selector::Monad::Free { inst, .. } => {
                let $m = inst.clone();
                $body
            }
        }
    };
}

/// Runs `$crr` with `$c` bound to a `Crr`, or `$lm` with `$s` bound to a `Crrlm`.
#[macro_export]
macro_rules! with_system {
    ($sel:expr, |$c:ident| $crr:expr, |$s:ident| $lm:expr) => {
        match $sel {
            $crate::selector::System::Crr(m) => {
                $crate::with_monad!(m, |inst| {
                    let $c = csys::crr::Crr::new(inst);
                    $crr
                })
            }
            $crate::selector::System::Crrlm(m, $crate::selector::Module::Rr) => {
                $crate::with_monad!(m, |inst| {
                    let $s = csys::crrlm::crrlm_build(csys::crr::Crr::new(inst), csys::crrlm::lm_of_rr());
                    $lm
                })
            }
            $crate::selector::System::Crrlm(m, $crate::selector::Module::TwoSorted(ty)) => {
                let $crate::selector::Monad::Free { inst, .. } = m else {
                    unreachable!("two-sorted modules only come from signature files")
                };
                let $s = csys::crrlm::crrlm_build(
                    csys::crr::Crr::new(inst.clone()),
                    csys::crrlm::TwoSortedModule::new(ty.clone()),
                );
                $lm
            }
        }
    };
}
