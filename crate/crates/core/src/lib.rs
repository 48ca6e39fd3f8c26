pub mod algebra;
pub mod cyclotomic;
pub mod curves;
pub mod elliptic;
pub mod invariants;
pub mod modularrep;
pub mod report;
