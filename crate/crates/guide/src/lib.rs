//! Book listings compiled as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/surfaces.md")]
pub mod surfaces {}

#[doc = include_str!("../../../book/src/frames.md")]
pub mod frames {}

#[doc = include_str!("../../../book/src/tracing.md")]
pub mod tracing {}

#[doc = include_str!("../../../book/src/classification.md")]
pub mod classification {}

#[doc = include_str!("../../../book/src/intersections.md")]
pub mod intersections {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
