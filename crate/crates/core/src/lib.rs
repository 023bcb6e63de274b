pub mod cli;
pub mod collisions;
pub mod diffusion;
pub mod error;
pub mod factor;
pub mod ntheory;

pub use error::{Error, Result};
