//! Exact linear algebra over Z/p^K.

mod matrix;
mod poly;
mod reduce;
mod snf;
mod zpk;

pub use matrix::{direct_sum, parse_matrix, MatPk};
pub use poly::{poly_direct_sum, poly_eval, scalar, validate_integral, IntegralPoly};
pub use reduce::{
    companion_lift, move_unit_to_corner, schur_reduce, shift_reduce, singularity_scan, SingularityReport,
};
pub use snf::{
    cokernel_type, shifted_cokernel_type, smith_normal_form, snf_exponents, CokernelType, SmithForm,
    TruncatedModule,
};
pub use zpk::{fmt_exponent, is_prime, Modulus, XSet, Zpk};
