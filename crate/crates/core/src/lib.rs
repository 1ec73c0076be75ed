pub mod bounds;
pub mod count;
pub mod cyclo;
pub mod error;
pub mod gf;
pub mod hayes;
pub mod oracle;
pub mod poly;
pub mod verify;

pub use cyclo::CycInt;
pub use error::{Error, Result};
