pub mod arith;
pub mod error;
pub mod ffdyn;
pub mod primes;
pub mod projmap;
pub mod sievedb;
pub mod pcfverify;
pub mod preper;
pub mod pipeline;
pub mod selftest;

pub use arith::{ExtRational, Height, Point, QuadElem};
pub use error::{Error, Result};
pub use ffdyn::{FpMap, FpPoint, PeriodSet, PrimeField};
pub use pcfverify::{critical_orbit_portrait, is_pcf, PcfStatus, Portrait, VerifyLimits};
pub use pipeline::{run_pipeline, PipelineOutput, PipelineRecord};
pub use preper::{FunctionalGraph, RootOfUnityPoint, StructureClass, TypeTag};
pub use projmap::{Mobius, QuadMap};
pub use sievedb::{Database, DbEntry, DbFileFormat, SieveCandidate};
