pub mod cli;
pub mod errata;
pub mod error;
pub mod family;
pub mod isomono;
pub mod linode;
pub mod moments;
pub mod mp;
pub mod orthopoly;
pub mod painleve;
pub mod poly;
pub mod rk45;
pub mod scaling;
pub mod weights;

pub use error::{Error, Result};
pub use family::Family;
