//! Exact search and verification for anti-Hales-Jewett numbers `ah(k, n)`: the
//! least `r` such that every `r`-coloring of `[k]^n` has a combinatorial line with
//! pairwise distinct colors.
//!
//! - [`hypercube`]: points, lines, layers, symmetries.
//! - [`coloring`]: colorings, rainbow checks, canonical forms, file format.
//! - [`constructions`]: explicit rainbow-free colorings.
//! - [`search`]: branch-and-bound, minimal-coloring enumeration, completion.
//! - [`bounds`]: exact bound arithmetic.
//! - [`cli`]: the `ahj` command line.

pub mod bounds;
pub mod cli;
pub mod coloring;
pub mod constructions;
pub mod error;
pub mod hypercube;
pub mod repro;
pub mod search;

pub use coloring::{Census, Coloring};
pub use error::{Error, ParseError, Result};
pub use hypercube::{Automorphism, Line, LineSet, LineTemplate, Point, Shape};
