//! Pointwise verification engine for real hypersurfaces in the complex
//! quadric `Q^m`.
//!
//! A tangent space of `Q^m` is modelled in the fixed basis
//! `(Z_1, …, Z_m, JZ_1, …, JZ_m)`. On top of it [`HypersurfaceData`] carries
//! the induced almost contact structure and a shape operator, and evaluates
//! the Gauss, Codazzi and Ricci formulas and the covariant derivative of the
//! structure Jacobi operator. [`models`] builds the tube `𝒯_A` and principal
//! Hopf candidates; [`theorem`] runs the nonexistence certificate and the
//! classifier; [`suites`] packages everything into [`CheckReport`]s.

pub mod error;
pub mod hypersurface;
pub mod linalg;
pub mod models;
pub mod report;
pub mod suites;
pub mod tangent;
pub mod theorem;

pub use error::{GeometryError, Result};
pub use hypersurface::{HypersurfaceData, HypersurfaceRecord};
pub use linalg::{sym_eigen, AmbientVector, Operator, SpectrumReport};
pub use models::{PrincipalCandidate, TubeModel, TubeOptions, TubeVariant};
pub use report::CheckReport;
pub use tangent::{CanonicalAngle, SingularType, TangentModel};
pub use theorem::{
    classify, principal_chain_residuals, principal_nonexistence_certificate, ChainReport,
    ClassificationResult, ClassificationVerdict, NonexistenceCertificate,
};
