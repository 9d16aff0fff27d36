//! Quiver-theoretic machinery for the Deligne–Simpson problem.
//!
//! The crate decides a sufficient solvability criterion for prescribed
//! semisimple conjugacy classes (defect + fundamental region + residue
//! condition), predicts solution-space dimensions, numerically constructs
//! additive and multiplicative solutions on products of conjugacy orbits, and
//! certifies dimensions by numerical rank. Supporting layers: exact
//! Gaussian-rational linear algebra, star/squid quiver combinatorics,
//! Kac-style root classification, squid moment maps, and Kronecker-pencil
//! splitting types on the projective line.
//!
//! ```
//! use dsq_core::quiver::{StarShape, tits_q, tits_p};
//!
//! // Five marked points, rank 2, distinct eigenvalue pairs per point.
//! let star = StarShape::new(vec![2, 2, 2, 2, 2]).unwrap();
//! let quiver = star.build();
//! let alpha = vec![2, 1, 1, 1, 1, 1];
//! assert_eq!(tits_q(&quiver, &alpha).unwrap(), -1);
//! assert_eq!(tits_p(&quiver, &alpha).unwrap(), 2);
//! assert_eq!(star.delta(&alpha).unwrap(), 1);
//! ```

pub mod cnum;
pub mod ds;
pub mod exact;
pub mod pencil;
pub mod quiver;
pub mod reps;
pub mod solver;
pub mod squid;

/// Statements this crate relies on but deliberately does **not** re-derive.
///
/// The geometry underlying the dimension ledger rests on proof-level results
/// that no finite computation reproduces. They are recorded here so that
/// downstream reports can distinguish what is certified numerically from what
/// is quoted:
///
/// 1. **Irreducibility** of the solution loci behind the dimension counts —
///    the suite certifies tangent-space dimensions at computed points, not
///    that the locus is one irreducible variety of that dimension.
/// 2. The **local complete intersection** structure of moment-map fibers —
///    certified only through the agreement of numerical constraint ranks with
///    the expected codimension.
/// 3. The **very good** property (codimension bounds on automorphism strata)
///    of the relevant quotient stacks — sampled stabilizer censuses probe it,
///    but its universal quantifier is out of reach of sampling.
/// 4. The upper bound on the **number of parameters** of squid
///    representations in a fixed stability class — only its numeric
///    consequences (expected dimensions, nonemptiness of solution sets) are
///    exercised.
///
/// The sufficiency verdict is likewise one-directional: `sufficient = false`
/// never asserts nonexistence.
pub const PROOF_LEVEL_CLAIMS: &[&str] = &[
    "irreducibility of solution loci (certified only via tangent dimensions at sample points)",
    "local complete intersection structure of moment-map fibers (certified only via constraint ranks)",
    "very good codimension bounds on automorphism strata (probed only by stabilizer censuses)",
    "number-of-parameters bound for squid representations (only numeric consequences exercised)",
];
