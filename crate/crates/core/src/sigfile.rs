//! JSON signature files.
//!
//! ```json
//! {"el": [{"sym": "app", "args": [0, 0]}, {"sym": "lam", "args": [1]}],
//!  "ty": [{"sym": "El", "args": [{"sort": "el", "bind": 0}]}]}
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::crrlm::{ArgSort, TyArgSpec, TyOpSpec, TypeSignature};
use crate::error::{Error, Result};
use crate::relmonad::{BindingSignature, OpSpec};

#[derive(Debug, Clone)]
pub struct SignatureFile {
    pub el: BindingSignature,
    pub ty: Option<TypeSignature>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    el: Vec<RawElOp>,
    #[serde(default)]
    ty: Option<Vec<RawTyOp>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawElOp {
    sym: String,
    #[serde(default)]
    args: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTyOp {
    sym: String,
    #[serde(default)]
    args: Vec<RawTyArg>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTyArg {
    sort: RawSort,
    #[serde(default)]
    bind: usize,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawSort {
    El,
    Ty,
}

pub fn parse(text: &str) -> Result<SignatureFile> {
    let raw: RawFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("signature file: {e}")))?;
    let el = BindingSignature::new(
        raw.el
            .into_iter()
            .map(|o| OpSpec {
                sym: o.sym,
                binders: o.args,
            })
            .collect(),
    )?;
    let ty = raw
        .ty
        .map(|ops| {
            TypeSignature::new(
                ops.into_iter()
                    .map(|o| TyOpSpec {
                        sym: o.sym,
                        args: o
                            .args
                            .into_iter()
                            .map(|a| TyArgSpec {
                                sort: match a.sort {
                                    RawSort::El => ArgSort::El,
                                    RawSort::Ty => ArgSort::Ty,
                                },
                                bind: a.bind,
                            })
                            .collect(),
                    })
                    .collect(),
            )
        })
        .transpose()?;
    Ok(SignatureFile { el, ty })
}

pub fn load(path: impl AsRef<Path>) -> Result<SignatureFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}
