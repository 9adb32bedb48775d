#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! Simulation and blowup analysis for the generalized hyperelastic-rod wave
//! equation in nonlocal form,
//!
//! `u_t + f'(u) u_x + ∂_x p * [g(u) + f''(u)/2 u_x^2] = 0`, `p(x) = ½ e^{-|x|}`,
//!
//! on a uniform periodic grid. The crate integrates the equation, evaluates
//! local-in-space and global blowup criteria with their upper bounds on the
//! breakdown time, and exposes the quantities used to verify them numerically.

pub mod kernel;
pub mod model;
pub mod dynamics;
pub mod criteria;
pub mod profiles;
pub mod cli;
