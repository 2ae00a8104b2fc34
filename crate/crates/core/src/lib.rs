pub mod chains;
pub mod formula;
pub mod godel_engine;
pub mod luk_engine;
pub mod numerics;
pub mod product_engine;
pub mod verdict;
