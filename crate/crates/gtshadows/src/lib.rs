//! Finite quotients of braid groups and the groupoid of GT-shadows.
//!
//! Starting from a finite-index normal subgroup of the 4-strand braid group
//! (given as six permutation images of the standard pure-braid generators),
//! this crate builds the induced finite quotients in strands 2, 3 and 4,
//! enumerates the pairs `(m, f)` satisfying the hexagon and pentagon
//! relations in those quotients, classifies them (friendly, shadow,
//! charming), composes them, and decides settled/isolated status across a
//! catalog of subgroups.
//!
//! Modules mirror the layers of the computation:
//!
//! * [`perm`] — permutation and permutation-tuple arithmetic;
//! * [`words`] — free-group words over named alphabets;
//! * [`fingroup`] — finite permutation-group engine (enumeration with word
//!   witnesses, stabilizer chains, structure queries);
//! * [`braidq`] — subgroup specs, the nine cosimplicial homomorphisms,
//!   quotient construction and mixed braid-word evaluation;
//! * [`shadows`] — GT-shadow predicates, enumeration and composition;
//! * [`groupoid`] — kernel comparisons, intersections, settled/isolated
//!   decisions, projections and survival tests;
//! * [`analysis`] — Furusho property reports and the Abelian closed form.

pub mod analysis;
pub mod braidq;
pub mod error;
pub mod fingroup;
pub mod groupoid;
pub mod perm;
pub mod shadows;
pub mod words;

pub use error::Error;
pub use perm::{parse_cycles, Perm, PermTuple};
pub use words::{parse_word, Alphabet, Sym, Word};
