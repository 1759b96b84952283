//! Locally repairable codes from automorphism groups of elliptic function
//! fields, in exact arithmetic.

pub mod arith;
pub mod autgrp;
pub mod curve;
pub mod error;
pub mod ffield;
pub mod format;
pub mod funcfield;
pub mod linalg;
pub mod lrc;
pub mod poly;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use ffield::{Felt, FieldCtx};
