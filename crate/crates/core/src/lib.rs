//! Combinatorial multi-access hotplug coded caching built from t-designs.
//!
//! * [`designs`]: t-designs, their intersection numbers and block selectors.
//! * [`pda`]: placement delivery arrays and the C1–C3 conditions.
//! * [`hppda`]: the placement, access and delivery arrays of the scheme.
//! * [`mds`]: GF(2^m) arithmetic and a systematic Reed–Solomon code.
//! * [`scheme`]: coded placement, multicast delivery and per-user decoding.
//! * [`baselines`]: rate–memory points of the comparison schemes.
//! * [`harness`]: exhaustive certification and rate–memory sweeps.

pub mod baselines;
pub mod combinatorics;
pub mod designs;
pub mod error;
pub mod harness;
pub mod hppda;
pub mod mds;
pub mod pda;
pub mod scheme;

pub use error::{Error, Result};
