//! Combinatorics and rewriting for the quiver algebra of SL2 tilting
//! modules.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`] — prime fields and the digit scalar functions;
//! * [`padic`] — base-`p` expansions with mixed-sign digits;
//! * [`admissible`] — stretches, admissible sets and reflections;
//! * [`quiver`] — vertices, generators, blocks and quiver export;
//! * [`algebra`] — morphisms, the rewriting engine and normal forms;
//! * [`center`] — central elements, centrality checks and the commutant
//!   solver;
//! * [`variants`] — the quantum, first-Frobenius-kernel and thickened
//!   grid variants, plus tensor factorisations;
//! * [`expr`] — the textual word-expression grammar used by the CLI.
//!
//! The `examples/` directory of the crate demonstrates each capability as
//! a runnable program; the single `tiltquiver` binary exposes the same
//! functionality as thin subcommands.

pub mod admissible;
pub mod algebra;
pub mod arith;
pub mod center;
pub mod expr;
pub mod padic;
pub mod quiver;
pub mod variants;
