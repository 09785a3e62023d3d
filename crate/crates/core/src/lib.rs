//! Negative definite kernels, induced metrics, and Euclidean
//! embeddability certificates.
//!
//! The pipeline this crate implements:
//!
//! 1. **Check** a candidate kernel for (strict / strong / m-) negative
//!    definiteness with a randomized falsifier that returns replayable
//!    witnesses ([`kernel`], [`mform`]).
//! 2. **Induce** a distance on a domain `X` by pushing points through a
//!    function family `f_y` and integrating a base squared distance over
//!    an index measure ([`family`], [`measure`], [`metric`]).
//! 3. **Verify** metric and separation axioms on samples, and — for
//!    linear families — the inner-product structure that comes for free
//!    ([`metric`]).
//! 4. **Embed** finite induced configurations into Euclidean space via
//!    double centering and an eigendecomposition, with embeddability
//!    decided by the spectrum and certified by residuals ([`embed`]).
//!
//! Everything numeric is deterministic: randomized checks take explicit
//! seeds and derive one independent stream per trial, and summation is
//! compensated, so reports are reproducible bit for bit across runs.
//!
//! The crate is `no_std`-compatible (with `alloc`); the default `std`
//! feature only toggles dependency features, not functionality.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

mod eigen;
mod error;
mod fmath;
mod rng;
mod sum;

pub mod embed;
pub mod family;
pub mod kernel;
pub mod measure;
pub mod metric;
pub mod mform;
pub mod report;
pub mod vector;

pub use eigen::{eigenpair_residual, symmetric_eigen, SymmetricEigen};
pub use embed::{
    distance_matrix, double_center, isometry_residual, schoenberg_embed, DistanceMatrix,
    EmbedVerdict, EmbeddingResult, InducedDistances, DEFAULT_EMBED_TOL_REL,
};
pub use error::{Error, Result};
pub use family::FunctionFamily;
pub use kernel::{
    check_negative_definite, check_strictly_negative_definite, quadratic_form,
    CoefficientVector, Kernel, KernelRole,
};
pub use measure::{IndexMeasure, IntegralEstimate, MeasureKind, SamplerSpec};
pub use metric::{
    check_separation, induce_distance, inner_product_space, verify_metric_axioms,
    DistanceEstimate, InducedMetric, InnerProductSpace, IntegrationPolicy,
};
pub use mform::{
    check_m_negative_definite, check_m_negative_definite_with_budget,
    check_strictly_m_negative_definite, check_strictness_transfer, check_strong_m_negative,
    induce_m_kernel, lm_distance, m_form, m_form_induced, m_form_sampled, m_form_with_budget,
    weighted_m_form, InducedMKernel, MKernel, SignedDiscreteMeasure, StrictnessTransferReport,
    DEFAULT_TERM_BUDGET,
};
pub use report::{CheckReport, Verdict, Witness};
pub use rng::mix_seeds;
pub use vector::VectorPoint;
