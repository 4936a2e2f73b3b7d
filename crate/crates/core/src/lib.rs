pub mod cli;
pub mod elliptic;
pub mod error;
pub mod existence;
pub mod numeric;
pub mod ode;
pub mod profile;
pub mod quadrature;
pub mod weak;
