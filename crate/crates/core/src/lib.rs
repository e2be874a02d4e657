//! A numerical laboratory for a three-type search economy with storable
//! commodities and fiat money under seignorage: inventory dynamics,
//! value-function integration, steady-state enumeration and Nash
//! classification, dynamic-equilibrium computation by forward/backward
//! best-response iteration, and welfare aggregates.

pub mod bestresponse;
pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod inventory;
pub mod linalg;
pub mod nash;
pub mod params;
pub mod report;
pub mod steadystate;
pub mod strategy;
pub mod valuation;
pub mod welfare;

pub use error::{Error, Result};
pub use inventory::Inventory;
pub use params::{ModelParams, ParamSpec};
pub use strategy::{Obj, StrategyProfile, TypeStrategy};
pub use valuation::ValueTable;
