//! Ramanujan-Sato series for 1/pi from eta-quotient Hauptmoduls.
//!
//! The pipeline: expand a Hauptmodul x = 1/t as a q-series, derive the
//! third-order ODE satisfied by z = (log x)_q / sqrt(w(x)) and the
//! four-term recurrence for the series coefficients A_n, discover and
//! verify the modular equation Psi_n(x(tau), x(n tau)) = 0, locate the
//! CM point tau_0 fixed by a degree-n Mobius map, evaluate the algebraic
//! constants B and C, and finally certify that
//! sum_n A_n x_0^n (B n + C) encloses 1/pi in ball arithmetic.

pub mod cli;
pub mod constants;
pub mod error;
pub mod evaluator;
pub mod modeq;
pub mod numerics;
pub mod odeops;
pub mod qseries;
pub mod registry;

pub use error::{Error, Result};

/// Entry point for the `rsato` binary; returns the process exit code.
pub fn cli_main() -> i32 {
    cli::main_with_exit_code()
}
