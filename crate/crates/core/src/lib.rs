//! Expansions of finite groups into inverse monoids.

pub mod bits;
pub mod cayley;
pub mod closure;
pub mod expansion;
pub mod fixtures;
pub mod fwedge;
pub mod group;
pub mod monoid;
pub mod partial_action;
pub mod report;
pub mod suites;
pub mod verify;
