//! The Bruhat–Tits building of type Ã₂ for `SL₃(𝔽_q((t)))`.
//!
//! Vertices are homothety classes of lattices, represented by canonical
//! Hermite bases. Every computation is exact; nothing is truncated beyond
//! what the lattice in question already absorbs.

pub mod certificate;
pub mod flag;
pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod sector;
pub mod space;

pub use certificate::{certificate_from_transition, certificate_report, certify_at, displacement_profile, displacement_profile_transition, linearity_deviation, hyperbolic_certificate, is_regular_segment, CertificateReport};
pub use flag::{all_flags, flags_opposite, gallery_distance_res, Flag, Germ};
pub use lattice::{canonicalize, cat0_distance, elementary_divisors, vector_distance, vector_distance_fast, LatticeClass, VectorDistance, VertexFrame};
pub use matrix::LaurentMatrix;
pub use poly::LaurentPoly;
pub use sector::{ball, germ_flag, germ_from_transition, neighbours, sector_point, Sector, SectorGerm};
pub use space::Building;
