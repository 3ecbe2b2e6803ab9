//! Checkers for the support-problem conditions over prime ranges.
//!
//! Each checker reduces its points modulo every prime in a range, skips
//! primes of bad reduction, records violations with a witness and reports
//! a verdict against an exception budget.

pub mod product;
pub mod report;
pub mod scan;

pub use product::{product_order, Component, Factor, GroupSpec, PrimeContext, ProductPoint, Reduced, ReducedComponent};
pub use report::{Condition, ConditionReport, Mode, Parameters, PrimeRange, Skipped, Verdict, Violation, Witness};
pub use scan::{
    check_lmsp, check_lsp, check_msp, check_rsp, check_sp, check_wmsp, recheck, Checker, OrderMemo, ScanConfig,
    DEFAULT_SAMPLE,
};
