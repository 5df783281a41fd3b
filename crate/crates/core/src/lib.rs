//! Algebraic curvature tensors and their curvature operators of the first
//! and second kind, with `(k+α)`-positivity profiles, isotropic and Ricci
//! checks, named models and a randomized implication harness.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`). The search
//! harness and the file formats work in `f64`.
//!
//! Sign convention: `R_1212` is the sectional curvature of the `e1, e2`
//! plane, so the unit sphere has `R_ijkl = δ_ik δ_jl - δ_il δ_jk`.

pub mod basis;
pub mod eigen;
pub mod error;
pub mod frame;
pub mod identities;
pub mod io;
pub mod isotropic;
pub mod matrix;
pub mod operators;
pub mod positivity;
pub mod scalar;
pub mod search;
pub mod tensor;
pub mod zoo;

pub use basis::{lambda2_basis, s20_basis, s20_dim, SymTensorBasis};
pub use eigen::{eigen_sym, Spectrum};
pub use error::{CurvError, Result};
pub use frame::{random_orthogonal, Frame4};
pub use identities::{phi_family, ric_family, verify_pic_identities, verify_ric_identities, ResidualReport};
pub use isotropic::{isotropic_value, min_isotropic, ricci_min, FrameSearchConfig, FrameSearchResult};
pub use matrix::Matrix;
pub use operators::{
    first_kind_matrix, first_kind_spectrum, ricci_spectrum, second_kind_form, second_kind_matrix,
    second_kind_spectrum,
};
pub use positivity::{k_alpha_positive, k_alpha_value, positivity_profile, AlphaStar, PositivityProfile};
pub use scalar::Real;
pub use tensor::{bianchi_project, CurvatureTensor, Entry, PairForm, ToleranceConfig};
pub use zoo::{
    complex_space_form, constant_curvature, cp2_explicit, interpolate, product, random_curvature, ModelSpec,
};

pub type CurvatureTensor64 = CurvatureTensor<f64>;
pub type CurvatureTensor32 = CurvatureTensor<f32>;
pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type Spectrum64 = Spectrum<f64>;
pub type Spectrum32 = Spectrum<f32>;
pub type Frame64 = Frame4<f64>;
pub type Frame32 = Frame4<f32>;
pub type Tolerances64 = ToleranceConfig<f64>;
pub type Tolerances32 = ToleranceConfig<f32>;
