pub mod causality;
pub mod cli_io;
pub mod constitutive;
pub mod dispersion;
pub mod error;
pub mod fitting;
pub mod mittag_leffler;
pub mod quadrature;
pub mod regimes;
pub mod relaxation_spectrum;
pub mod special;
pub mod table;

pub use error::{Error, Result};
