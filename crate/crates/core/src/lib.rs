//! Exact and floating-point machinery for the Grover walk on the complete
//! graph with a self-loop at every vertex.
//!
//! The crate has two arithmetic worlds that check each other:
//!
//! * an exact world built on the cyclotomic field `Q(zeta_n)`
//!   ([`cyclotomic`]), dense matrices over it ([`linalg`]), and a fast
//!   signed-shift normal form for the walk group in the Fourier basis
//!   ([`monomial`]);
//! * a floating-point simulator for the walk's unitary evolution ([`sim`]).
//!
//! On top of the exact world, [`group`] provides generic finite-group
//! machinery (closure, normality, quotients, abelian structure) and
//! [`walk_group`] specializes it to the group `K` generated by the Grover
//! coin `G` and the diagonal root-of-unity matrix `S`, together with its
//! commutator subgroup `H`. The headline facts this crate certifies, per
//! vertex count `n`:
//!
//! * `|H| = 2^(n-1)` and every element of `H` squares to the identity;
//! * `H` is normal in `K` and `K/H` is `Z_n x Z_2` (even `n`) or `Z_n`
//!   (odd `n`);
//! * the walk operator `U` satisfies `U^(2n) = I` and no smaller power
//!   does, which is the walk's period.
//!
//! ```
//! use grover_walk::walk_group::{monomial_walk_group, DEFAULT_MAX_ELEMENTS};
//!
//! let wg = monomial_walk_group(4, DEFAULT_MAX_ELEMENTS).unwrap();
//! assert_eq!(wg.k().order(), 64); // |K| = n * 2^n for even n
//! assert_eq!(wg.h().order(), 8); // |H| = 2^(n-1)
//! assert_eq!(wg.minimal_common_exponent(), 8); // the walk period 2n
//! ```

pub mod cyclotomic;
pub mod group;
pub mod linalg;
pub mod monomial;
pub mod sim;
pub mod walk_group;

pub use cyclotomic::{BigRational, CycError, CycNum};
pub use group::{FiniteGroup, GroupElement, QuotientGroup, QuotientStructure};
pub use linalg::{CycMatrix, LinalgError};
pub use monomial::SignedShift;
pub use sim::{AmplitudeState, WalkTrace};
pub use walk_group::{GroupReport, WalkGroup};
