//! Lie algebra cohomology of an abelian 𝔫 with coefficients in V: the
//! complex Λ*𝔫*⊗V, Kostant's Laplacian, harmonic spaces and the joint
//! (W+n, K²) spectrum.

mod bundle;
mod complex;
mod spectral;

pub use bundle::{build_sym_power_rep, is_positive_definite, trivial_rep, RepBundle};
pub(crate) use complex::exterior_d;
pub use complex::{exterior_complex, CochainComplex};
pub(crate) use spectral::sort_entries;
pub use spectral::{
    decompose, exact_spectrum, harmonic_spaces, vqab_decomposition, HarmonicDecomposition, VqabEntry,
};
