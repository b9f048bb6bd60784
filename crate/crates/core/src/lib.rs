//! Exact Chern-character calculus for constructive exceptional bundles on P³.
//!
//! The crate computes the bijection between 3-adic rationals and Chern
//! characters of constructive exceptional bundles, the tree of admissible
//! helix mutations it is built on, and the companion exceptional-slope
//! machinery on P². All arithmetic is exact.

pub mod catalog;
pub mod epsilon;
pub mod error;
pub mod helix;
pub mod index;
pub mod kgroup;
pub mod p2;
pub mod perp;
pub mod rational;
pub mod reference;
pub mod tree;
pub mod verify;

pub use catalog::{catalog, generate_table, CatalogRow, TableFormat};
pub use epsilon::{
    bundle_record, distinguished_foundation, epsilon, epsilon_inverse, is_globally_generated, parents,
    standard_resolutions, wbn_profile, BundleRecord, Epsilon, GlobalGeneration, Orientation, ResolutionDescriptor,
    WbnProfile,
};
pub use error::{Error, Result};
pub use helix::{
    apply_move, classify_mutation, enumerate_mutations, left_mutation, right_mutation, verify_helix_relation,
    Direction, Foundation, MarkedFoundation, MutationClass, MutationMove, Pair, PairMutation,
};
pub use index::{DyadicRational, ThreeAdicRational};
pub use kgroup::{
    ch_line, chern_classes, dual, euler_chi, euler_pair, is_candidate_exceptional, slope, twist, ChernCharacter,
    ChernClasses,
};
pub use p2::{
    delta_of_mu, dot, epsilon_p2, is_stable_character_p2, slope_data, DeltaReport, P2SlopeData, Stability,
};
pub use perp::{perp, solve_orthogonality, SlopePoint};
pub use rational::Rational;
pub use reference::{audit_table, name_or_ch, parse_bundle, reference_rows, AuditReport, BundleName, Discrepancy, PrintedRow, RowAudit};
pub use tree::{build_tree, children, ExportNode, GammaTree, GammaVertex, TreeCheck, TreeReport};
pub use verify::{run_verification, Check, VerificationReport};
