//! Geometry and Monte-Carlo machinery for random walks on groups acting on
//! non-positively curved spaces.
//!
//! * [`hyperbolic`]: Gromov products, four-point δ, Busemann cocycles,
//!   translation-length certificates, generic over a metric backend.
//! * [`tree_flats`]: `ℤ² ∗ ℤ` on its square complex, walls, `L`-separation,
//!   the chain metric `d_L` and skewering certificates.
//! * [`building`]: the Ã₂ building of `SL₃(𝔽_q((t)))` with exact Laurent
//!   arithmetic, vector distances, residue flags, sectors and the
//!   opposite-germ hyperbolicity certificate.
//! * [`walk`]: seeded random walks and the estimators built on them.

pub mod acceptance;
pub mod building;
pub mod exact;
pub mod hyperbolic;
pub mod oracles;
pub mod tree_flats;
pub mod walk;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("singular matrix")]
    Singular,
    #[error("mismatched field characteristic: {0} vs {1}")]
    FieldMismatch(u32, u32),
    #[error("{0}")]
    Insufficient(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
