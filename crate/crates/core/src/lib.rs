//! Exact-integer geometry of del Pezzo surfaces and the elliptic
//! fibrations they induce on their strictly elliptic K3 double covers.
//!
//! The crate enumerates, with nothing but checked 64-bit arithmetic:
//!
//! * the (-1)-classes, nef conic classes and roots of the Picard lattice
//!   of `Z_d` for every degree ([`curves`]), together with the singular
//!   fibers of each conic bundle and the bisection classes of the induced
//!   elliptic fibration;
//! * reflection orbits cross-validating those inventories ([`weyl`]);
//! * the Néron–Severi lattices of the covering K3 surfaces and their
//!   discriminant groups via Smith normal form ([`lattice`]);
//! * Kodaira fiber types from branch-intersection patterns, admissibility
//!   by degree, and Euler-consistent candidate fiber configurations
//!   ([`k3`]).
//!
//! [`verify`] re-derives every frozen count and table and reports
//! pass/fail per check; the [`catalog`] holds the reference conic-class
//! families it compares against. All public operations are pure, so the
//! whole API is safe for unrestricted concurrent use; the enumerators
//! parallelize internally but the output order never depends on the
//! schedule.
//!
//! ```
//! use dpk3_core::{enumerate_conic_classes, parse_class, reducible_fiber_pairs};
//!
//! // the degree-5 surface carries five conic bundles
//! let conics = enumerate_conic_classes(5)?;
//! assert_eq!(conics.len(), 5);
//!
//! // the one through all four points has 8 - 5 = 3 singular fibers
//! let conic = parse_class("2L-E1-E2-E3-E4", 4)?;
//! assert!(conics.classes.contains(&conic));
//! assert_eq!(reducible_fiber_pairs(&conic, 5)?.len(), 3);
//! # Ok::<(), dpk3_core::Error>(())
//! ```

pub mod catalog;
pub mod curves;
pub mod error;
pub mod k3;
pub mod lattice;
pub mod picard;
pub mod verify;
pub mod weyl;

pub use curves::{
    bisection_classes, enumerate_conic_classes, enumerate_minus_one_classes, enumerate_roots,
    is_nef, reducible_fiber_pairs, symmetry_representatives, ClassInventory, ClassKind,
};
pub use error::{Error, Result};
pub use k3::{
    admissible_types, classify_reducible_fiber, classify_smooth_fiber,
    enumerate_fiber_configurations, fixed_locus_from, invariants_of, FiberConfiguration,
    FiberPattern, InvariantRecord, KodairaType, ReducibleCase,
};
pub use lattice::{ns_lattice_of, DiscriminantData, GramMatrix};
pub use picard::{canonical_class, format_class, parse_class, DivisorClass};
pub use weyl::{reflect, simple_roots, weyl_orbit, RootBasis, DEFAULT_ORBIT_CAP};
