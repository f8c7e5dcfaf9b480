pub mod analysis;
pub mod cli;
pub mod convert;
pub mod gf2;
pub mod lut;
pub mod netlist;
pub mod reference;
pub mod sbox;
pub mod tower;
pub mod verify;
