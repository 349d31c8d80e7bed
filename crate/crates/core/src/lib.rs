//! Toric vector bundles and flat toric families presented by diagram
//! matrices: adaptedness, Klyachko spaces, multi-Rees presentations and
//! strong Khovanskii bases.

pub mod error;
pub mod exactalg;
pub mod fans;
pub mod plsemifield;
pub mod troplinear;
pub mod bundles;
pub mod coxrees;
pub mod polyring;

pub use error::{Error, Result};
