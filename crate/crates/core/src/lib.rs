//! Virtual element discretization of the Dirichlet Laplace eigenproblem on
//! the unit square, with a dofi-dofi stabilized stiffness form and an
//! unstabilized (projection-only) mass form.
//!
//! The crate is organized bottom-up:
//!
//! * [`mesh`] generates, validates and serializes the polygonal mesh families.
//! * [`polygeom`] holds exact polygon geometry and scaled-monomial integrals.
//! * [`vem`] builds the local projectors and element matrices.
//! * [`assembly`] assembles the interior-DOF pencil `(A, B)`.
//! * [`eigensolve`] detects `dim ker B`, solves `A x = λ B x` and the source problem.
//! * [`study`] runs kernel and convergence studies and formats reports.

pub mod assembly;
pub mod eigensolve;
mod error;
pub mod mesh;
pub mod polygeom;
pub mod quadrature;
pub mod study;
pub mod vem;

pub use error::{Error, Result};

/// A point (or vector) in the plane.
pub type Point = [f64; 2];

/// Cap rayon's global pool from `VEMEIG_THREADS` if set. Safe to call more than once.
pub fn init_thread_pool() {
    if let Some(n) = std::env::var("VEMEIG_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
