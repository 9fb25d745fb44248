//! Numerical laboratory for the inhomogeneous nonlinear Schrödinger equation
//! `iu_t + Δu = λ|x|^{-b}|u|^σ u`.
//!
//! * [`exponents`]: exact rational exponent arithmetic and theorem predicates.
//! * [`ground_state`]: the explicit Hardy–Sobolev optimiser and its constants.
//! * [`grid`]: grids, fields, spectral operators and spatial integrals.
//! * [`dynamics`]: split-step and Crank–Nicolson relaxation integrators.
//! * [`diagnostics`]: conserved quantities, virial observables, thresholds.
//! * [`io`]: run configuration, reports, CSV series and field dumps.

pub mod exponents;
pub mod quadrature;
pub mod ground_state;
pub mod grid;
pub mod dynamics;
pub mod diagnostics;
pub mod io;
pub mod cli;
