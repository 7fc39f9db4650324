//! Exact computations with finite W-algebras of `gl_N`.

#![allow(clippy::needless_range_loop)]

pub mod format;
pub mod pyramid;
pub mod quotient;
pub mod rational;
pub mod report;
pub mod series;
pub mod uea;
pub mod walgebra;
