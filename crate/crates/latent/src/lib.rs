//! Finite restriction categories and latent fibrations, decided by exhaustive
//! search.
//!
//! A [`FinRestCat`] is a finite category stored as tables, together with a
//! restriction operator. On top of it the crate decides the notions of the
//! theory of latent fibrations (precise triangles, latent pullbacks, prone
//! arrows, admissible/separated/hyperconnected fibrations), builds the
//! standard examples, and constructs the fibrational dual of a latent
//! hyperfibration.
//!
//! Composition is diagrammatic: `c.comp(f, g)` is `f` followed by `g`.

pub mod cartesian;
pub mod category;
pub mod constructions;
pub mod dual;
pub mod error;
pub mod fixtures;
pub mod fibration;
pub mod functors;
pub mod io;
pub mod iso;
pub mod latpull;
pub mod mcat;
pub mod reindex;
pub mod report;
pub mod restriction;
pub mod split;
pub mod table1;

pub use category::{ArrId, FinRestCat, ObjId};
pub use error::{Error, Result};
pub use report::Report;
