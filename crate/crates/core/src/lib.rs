pub mod algebra;
pub mod asympt;
pub mod database;
pub mod hyperterm;
pub mod oracle;
pub mod prover;
pub mod schema;
pub mod telescope;
