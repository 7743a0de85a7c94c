pub mod codazzi;
pub mod error;
pub mod hypersurface;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod resultant;
pub mod sample;
pub mod selfcheck;
