//! Spatiotemporal 2-D polar channel coding over massive-MIMO links.

pub mod phy;
pub mod polar;
pub mod harness;
pub mod latency;
pub mod st2d;
