//! Finite-truncation Wigner-transform machinery for the Schrödinger
//! representation of Heisenberg groups built on a trace-class Gaussian scale.
//!
//! The pipeline is: Gaussian measures from a spectrum ([`gaussian`]), sampled
//! states, kernels and symbols ([`grid`], [`field`]), the symbol↔kernel unitaries
//! ([`weyl`]), the group and its representation ([`heisenberg`]), the Wigner
//! transform and quantizer ([`wigner`]), and the Fourier transform of concrete
//! measures ([`measure_ft`]).

pub mod error;
mod fft;
pub mod field;
pub mod gaussian;
pub mod grid;
pub mod heisenberg;
pub mod measure_ft;
pub mod weyl;
pub mod wigner;

pub use error::{Error, Result};
pub use field::{
    apply_kernel, distance, hermite_state, hs_inner, inner_product, rank_one_kernel,
    sup_distance, symbol_inner, Field, GridFn, Kernel, MeasureTag, Symbol,
};
pub use gaussian::{
    cameron_martin_density, char_functional, char_quadrature, gaussian_char, gaussian_density,
    product_density, scale_identity_residual, trapezoid, GaussianParams, ProductGaussian,
    ScalingLaw, TraceClassSpectrum,
};
pub use grid::{make_grid, Axis, Grid, Layout, MAX_DENSE_ELEMENTS};
pub use heisenberg::{
    commutator, compose, exp_theta, inverse, schrodinger_apply, schrodinger_apply_with,
    tower_embed, HeisenbergElement, PhasePoint, ShiftPolicy,
};
pub use measure_ft::{
    bounds_check, ft, recover_pairing, BoundsRecord, ConcreteMeasure, TestFunctional,
};
pub use weyl::{
    diagram_residual, s_scale, s_unscale, t_forward, t_inverse, tensor_kernels, tensor_symbols,
    u_reweight, Extend, ExtendKind, Reweight, SVariant,
};
pub use wigner::{
    ambiguity, calibrate, gamma2_inner, gamma2_pairing, op_theta, to_gamma2, wigner_transform,
    wigner_via_fourier, Calibration, ProductState, ProductSymbol,
};
pub use num_complex::Complex64;
