pub mod cli;
pub mod compress;
pub mod corpus;
pub mod normal_form;
pub mod solver;
pub mod structures;
pub mod syntax;
pub mod tiling;
pub mod translate;
