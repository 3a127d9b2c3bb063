//! Depth-zero cuspidal representations of GL2(F_p) in exact arithmetic: the
//! Kirillov model, torus projections, mod-p reduction through symmetric
//! powers, and finite-level K-type class functions.

pub mod arith;
pub mod ctx;
pub mod cyclo;
pub mod ffchar;
pub mod gl2;
pub mod kirillov;
pub mod ktype;
pub mod modl;
pub mod modp;
pub mod report;
pub mod sweep;
pub mod tori;

use thiserror::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] ffchar::FieldError),
    #[error(transparent)]
    Cyclo(#[from] cyclo::CycloError),
    #[error(transparent)]
    Sum(#[from] cyclo::SumError),
    #[error(transparent)]
    Kirillov(#[from] kirillov::KirillovError),
    #[error(transparent)]
    Tori(#[from] tori::ToriError),
    #[error(transparent)]
    Modp(#[from] modp::ModpError),
    #[error(transparent)]
    Ktype(#[from] ktype::KtypeError),
    #[error("invalid input: {0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
