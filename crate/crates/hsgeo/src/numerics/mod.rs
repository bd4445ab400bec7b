//! Shared numerical kernels: quadrature, finite differences, monotone
//! interpolation, root finding, least-squares fits, small symmetric
//! eigenproblems, and combinatorial enumeration.

pub mod findiff;
pub mod fit;
pub mod interp;
pub mod partitions;
pub mod quadrature;
pub mod roots;
pub mod smalleig;
pub mod special;

pub use findiff::{
    centered_stencil, fd_derivative, fd_derivative_refined, fornberg_weights,
    max_trustworthy_order, StencilStability,
};
pub use fit::fit_line;
pub use interp::HermiteGrid;
pub use partitions::{compositions, partitions};
pub use quadrature::{cumulative_simpson, gauss_legendre_16, simpson, simpson_fn};
pub use roots::bracketed_root;
pub use smalleig::{det_small, op_norm_bounds, sym_psd_eigenvalues};
pub use special::{harmonic, LogFactorial};
