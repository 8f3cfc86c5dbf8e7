//! Parameter maps, energy formulas and reduction analyses of four physical
//! problems whose equations are of general Heun type.

pub mod charged;
pub mod coulomb;
pub mod inverse_square;
pub mod quantum_walk;

pub use charged::{charged_particle_params, charged_particle_trivial_energy, ChargedParticleInput};
pub use coulomb::{coulomb_params, coulomb_reduc_energy, coulomb_spectrum, CoulombSphereInput};
pub use inverse_square::{inverse_square_feasibility, inverse_square_params, InverseSquareInput};
pub use quantum_walk::{quantum_walk_density, quantum_walk_params, QuantumWalkInput};
