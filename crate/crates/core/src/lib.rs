pub mod checks;
pub mod enumerate;
pub mod graphs;
pub mod grid;
pub mod padic;
pub mod store;
pub mod survey;
pub mod tiles;
