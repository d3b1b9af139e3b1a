//! Finite S4-frames, roaches and willow trees.
//!
//! The crate recognizes `n`-roaches and willow trees with checkable
//! certificates, searches p-morphisms, builds Fine–Jankov formulas, checks
//! frame validity by exhaustive valuation search, decides the logic of
//! 2-roaches up to a size bound, and classifies the logics of Čech–Stone
//! compactifications of ordinals from their Cantor normal forms.
//!
//! ```
//! use roach_core::roach::{builtin, is_2_roach, Builtin};
//!
//! let f3 = builtin(Builtin::F3).unwrap();
//! assert!(is_2_roach(&f3).unwrap().is_none());
//! ```

pub mod census;
pub mod construct;
pub mod decide;
pub mod enumerate;
pub mod error;
pub mod formula;
pub mod frame;
pub mod iso;
pub mod jankov;
pub mod json;
pub mod morphism;
pub mod ordinal;
pub mod roach;
pub mod semantics;

pub use error::{Error, Result};
pub use formula::Formula;
pub use frame::{Frame, World, WorldSet};
pub use ordinal::Ordinal;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/frames.md")]
    mod frames {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/semantics.md")]
    mod semantics {}
    #[doc = include_str!("../../../book/src/morphisms.md")]
    mod morphisms {}
    #[doc = include_str!("../../../book/src/roaches.md")]
    mod roaches {}
    #[doc = include_str!("../../../book/src/willow.md")]
    mod willow {}
    #[doc = include_str!("../../../book/src/decision.md")]
    mod decision {}
    #[doc = include_str!("../../../book/src/ordinals.md")]
    mod ordinals {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
