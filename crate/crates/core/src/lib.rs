//! Bayes factors for two-group superiority, non-inferiority and equivalence
//! designs with Cauchy priors on the standardized effect size.

pub mod cli;
pub mod datamodel;
pub mod engine;
pub mod quadrature;
pub mod report;
pub mod specfun;
