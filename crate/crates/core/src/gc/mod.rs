//! Guiding-center reduction: coordinate maps, consistency checks and the
//! Weyl symbol of the Hamiltonian.

pub mod checks;
pub mod hamiltonian;
pub mod maps;
pub mod subst;
pub mod words;

pub use checks::{
    compose_identity_check, verify_classical_brackets, BracketReport, OrderCheck, PairReport,
};
pub use hamiltonian::{
    classical_hamiltonian, derive_hamiltonian, derive_hamiltonian_with, express_in_j,
    landau_levels, level_formula, quantized_levels, taylor_shift, JPolynomial, Potential,
};
pub use maps::{backward_map, forward_map};
pub use subst::substitute;
pub use words::{Letter, WordSeries};
