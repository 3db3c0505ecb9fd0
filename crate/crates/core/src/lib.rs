pub mod field;
pub mod pbw;
pub mod algebra;
pub mod deform;
pub mod observables;
pub mod rep;
pub mod report;
