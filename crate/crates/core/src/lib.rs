//! Rescaling of finite Schauder frames and completely bounded norms of
//! their multipliers.
//!
//! For a pair `(x_k, y_k)` in `ℂ^d` with `T = Σ x_k y_k*`, the multiplier
//! `Φ(a) = Σ a_k x_k y_k*` satisfies `‖Φ‖_cb ≤ M ≤ 2‖Φ‖`, where `M` is the
//! minimum over positive weights of
//! `max(‖Σ w_k² x_k x_k*‖, ‖Σ w_k⁻² y_k y_k*‖)`. [`rescale::optimize`] finds the weights and brackets
//! the cb norm; [`multiplier`] estimates `‖Φ‖` from below and above;
//! [`verify`] checks every step of the argument numerically.
//!
//! - [`linalg`]: complex matrices, Jacobi eigen and singular value solvers.
//! - [`frames`]: frame operators, bounds and the pair operator `T`.
//! - [`generate`]: seeded instance families.
//! - [`cli`]: the `framescale` binary and its JSON/CSV file formats.

pub mod cli;
pub mod frames;
pub mod generate;
pub mod linalg;
pub mod multiplier;
pub mod random;
pub mod rescale;
pub mod verify;
