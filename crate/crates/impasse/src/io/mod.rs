pub mod export;
pub mod parse;
pub mod plot;
pub mod print;
