//! Combinatorics and exact algebra for maximal minors of Hankel matrices of
//! close cuts.
//!
//! The library has three layers:
//!
//! * [`chains`] and [`tabel`] implement the combinatorial rewriting system:
//!   labeled chains of minor diagonals, the three sorting relations with their
//!   controllers, and reduction of a tabel to its unique standard form.
//! * [`monomial`], [`poly`], [`hankel`] and [`groebner`] provide exact
//!   polynomial algebra over the rationals: Hankel minors, Laplace
//!   expansions, division with remainder under the diagonal term order, and a
//!   Buchberger-criterion Gröbner test.
//! * [`rees`] and [`campaign`] tie the two together: the multi-Rees algebra of
//!   the family of close-cut ideals, its quadratic marked binomials, the
//!   straightening algorithm with lifted relations, and the verification
//!   campaigns exposed by the CLI.

pub mod campaign;
pub mod chains;
pub mod error;
pub mod groebner;
pub mod hankel;
pub mod monomial;
pub mod poly;
pub mod rees;
pub mod tabel;

pub use error::Error;

/// Installs a global rayon pool with `workers` threads (first call wins).
///
/// Honours the `HANKEL_REES_WORKERS` environment variable when `workers` is
/// `None`; with neither set, rayon's default (one thread per core) is kept.
pub fn init_workers(workers: Option<usize>) {
    let from_env = std::env::var("HANKEL_REES_WORKERS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    if let Some(n) = workers.or(from_env) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
