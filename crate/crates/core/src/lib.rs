pub mod cli;
pub mod inference;
pub mod matroid;
pub mod ontology;
pub mod oracle;
pub mod reduction;
pub mod solver;
