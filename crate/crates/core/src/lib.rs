//! Linear-optical simulation of partially distinguishable photons in
//! multiport splitters, with post-selection onto photon-number patterns.
//!
//! The crate reproduces GHZ-state generation by post-selected multiphoton
//! interference: symmetric (DFT) multiports fed with phase-twisted qubits,
//! a `2N`-port network, single-mode detection and the standard polarizing
//! beam-splitter cascade. Amplitudes come from matrix permanents
//! ([`permanent`]) and are cross-checked by a brute-force expansion of the
//! creation-operator polynomial ([`evolve::brute_force_output`]).

pub mod error;
pub mod evolve;
pub mod fock;
pub mod numeric;
pub mod permanent;
pub mod report;
pub mod schemes;
pub mod verify;

pub use error::{Error, Result};
pub use evolve::{
    brute_force_output, full_distribution, ghz_fidelity, postselect, success_probability,
    GhzFidelity, PostselectedState,
};
pub use fock::{
    enumerate_assignments, enumerate_patterns, InternalAssignment, InternalLabel, OutputPattern,
    PhotonFactor, PhotonicState,
};
pub use num_complex::Complex64;
pub use numeric::{build_2n_port, build_dft, compose, embed_two_mode, is_unitary, ComplexMatrix};
pub use permanent::{perm_naive, perm_ryser, transition_amplitude, LabelUnitaries};
pub use schemes::{
    closed_form, internal_survivors, make_2n_scheme, make_even_scheme, make_odd_scheme,
    make_pbs_cascade, make_scheme, make_single_mode_scheme, overlap, ztl_allowed, ClosedForm,
    SchemeInstance, SchemeKind,
};
