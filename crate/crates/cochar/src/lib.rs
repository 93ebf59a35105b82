//! Exact cocharacter-pair calculus for unramified groups of EL type.
//!
//! Groups are products of Weil restrictions of general linear groups. The
//! crate enumerates Kottwitz sets, builds posets of cocharacter pairs, forms
//! the signed sums attached to isocrystal classes, checks the sum and
//! induction identities between them, and evaluates the associated maps on
//! symbolic Grothendieck-group elements. All arithmetic is exact.

pub mod error;
pub mod groth;
pub mod kottwitz;
pub mod mant_sum;
pub mod pair_poset;
pub mod rational;
pub mod root_datum;
pub mod sweep;

pub use error::{Error, Result};
pub use groth::{EvalResult, FormalRep};
pub use kottwitz::IsocrystalClass;
pub use mant_sum::SignedPairSum;
pub use pair_poset::{CocharacterPair, PairPoset};
pub use rational::Q;
pub use root_datum::{build_root_datum, GroupSpec, LeviSet, OrderMode, RootDatum};
