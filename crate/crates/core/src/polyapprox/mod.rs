//! Low-degree polynomial approximation of `p(θ)`: degree budgets, nodes,
//! extended-precision interpolation and the analytic error bound.

mod degree;
mod interp;
mod poly;

pub use degree::{
    approximation_error_bound, closed_form_degree, degree_inequality_holds, interpolation_nodes, log2_derivative_bound,
    required_degree, DegreeBudget,
};
pub use interp::{interpolation_precision, lagrange_interpolant, lagrange_interpolant_real, log2_lebesgue_max};
pub use poly::Polynomial;
