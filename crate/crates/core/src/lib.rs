//! Exact algebra for Hodge and weight filtrations on twisted localizations
//! `O_X(*D) f^{-alpha}` along a divisor `D = div(f)`.
//!
//! Everything here is pure computation over Q: no IO, no floating point.
#![cfg_attr(not(test), no_std)]
extern crate alloc;

pub mod exactalg;
pub mod snc;
pub mod vforacle;
pub mod bsdata;
pub mod ppd;
pub mod weyl;
pub mod whom;
