//! C-systems built from relative monads on finite sets and their left modules.
//!
//! The crate is layered bottom-up: finite functions ([`finfun`]), relative
//! monads and their instances ([`relmonad`]), the Kleisli category
//! ([`kleisli`]), the generic C-system calculus ([`csystem`]), the concrete
//! system `C(RR)` ([`crr`]), presheaf extensions ([`presheaf_ext`]) and the
//! module-extended system `C(RR, LM)` ([`crrlm`]).
//!
//! Composition is written in diagrammatic order everywhere: `compose(f, g)`
//! applies `f` first.

pub mod error;
pub mod finfun;
pub mod kleisli;
pub mod crr;
pub mod crrlm;
pub mod csystem;
pub mod presheaf_ext;
pub mod relmonad;
pub mod report;
pub mod sigfile;
pub mod suites;

pub use error::{Error, Result};
pub use finfun::FinFun;
pub use kleisli::KMor;
pub use relmonad::{RelativeMonad, Term};
pub use report::{Check, Report, Status};

/// The random generator used by every sampler. Seeded runs are reproducible.
pub type Prng = rand_chacha::ChaCha8Rng;

pub fn prng(seed: u64) -> Prng {
    use rand::SeedableRng;
    Prng::seed_from_u64(seed)
}
