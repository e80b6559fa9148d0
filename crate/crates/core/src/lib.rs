pub mod cli;
pub mod cm2;
pub mod drinfeld;
pub mod ffpoly;
pub mod newton;
pub mod nonarch;
pub mod zeta;
