pub mod abcat;
pub mod error;
pub mod exactlin;
pub mod field;
pub mod quotient;
pub mod serre;
pub mod ideal;
pub mod monoidal;
pub mod verify;
pub mod spec;
pub mod cli;
