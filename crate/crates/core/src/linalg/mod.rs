//! Dense complex linear algebra kernels.

mod eigen;
mod expm;
mod lu;
mod norms;
mod sqrtm;

pub use eigen::{hermitian_eig, largest_eigpair, HermitianEigen, JACOBI_MAX_ORDER};
pub use expm::expm_ref;
pub use lu::{lu_solve, LuFactorization};
pub use norms::{cond2, norm2, norm2_eig, sigma_min};
pub(crate) use norms::{cond2_from_lu, sigma_min_from_lu};
pub use sqrtm::{sqrtm, sqrtm_with_history, SqrtmResult};
