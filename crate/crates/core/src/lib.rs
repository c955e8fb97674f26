pub mod arith;
pub mod cli;
pub mod codes;
pub mod cyclic;
pub mod embed;
pub mod gf;
mod linalg;
pub mod poly;
pub mod verify;
