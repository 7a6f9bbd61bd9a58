//! Self-contained dense linear algebra kernels: pivoted QR, SVD (exact and
//! randomized), least squares, pseudoinverse, and a symmetric eigensolver.
//!
//! Everything here is a pure function of its inputs and safe to call
//! concurrently.

mod eigen;
mod qr;
mod randomized;
mod solve;
mod svd;

pub use eigen::symmetric_eigen;
pub use qr::{pivoted_qr, PivotedQrResult, PIVOT_TIE_REL};
pub(crate) use qr::pivoted_qr_with_penalty;
pub use randomized::randomized_svd;
pub use solve::{least_squares, least_squares_multi, pseudoinverse, LstsqSolution, DEFAULT_RCOND};
pub(crate) use solve::{cholesky, solve_lower, solve_lower_transpose};
pub use svd::{truncated_svd, SvdResult};
