//! Totally degenerated closure systems, the linear order of their classes,
//! and bounded or unbounded correspondences between such orders.

pub mod closure;
pub mod order;
pub mod pairing;
pub mod generators;
pub mod io;
pub mod suite;
