//! Independent oracles and randomized property suites shared by the
//! integration tests and the acceptance runner.

#![allow(dead_code)]

pub mod oracles;
pub mod properties;
