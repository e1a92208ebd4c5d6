pub mod hopf;
pub mod io;
pub mod localfield;
pub mod numeric;
pub mod scaffold;
pub mod tower;
