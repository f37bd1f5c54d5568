//! Generalized Segal-Bargmann transform on compact Lie groups, for the tori
//! `T^r` and for `SU(2)`.
//!
//! Functions on `K` are represented by their Fourier coefficients (one
//! matrix block per irreducible representation). Holomorphic functions on
//! `K_C` are either given spectrally, as the image of such a coefficient
//! vector, or as plain closures evaluated through the polar decomposition
//! `g = x e^{iY}`.

// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod group;
pub mod heat;
pub mod kernels;
pub mod polar;
pub mod quadrature;
pub mod sampling;
pub mod sobolev;
pub mod transform;

pub use bounds::{BoundReport, LatticePoly};
pub use error::{GsbError, Result};
pub use group::{GroupElement, GroupSpec, IrrepLabel, RootData, C64};
pub use heat::{CoefVec, TruncationReport};
pub use polar::{FrameKind, PointKC};
pub use kernels::KernelQuery;
pub use quadrature::{Estimate, Integral, QuadSpec, Scheme};
pub use sobolev::PolyU;
pub use transform::{HoloFunc, Provenance};
