#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod complex;
pub mod distance;
pub mod error;
pub mod flag;
pub mod graph;
pub mod image;
pub mod io;
pub mod mapper;
pub mod multipers;
pub mod persistence;
pub mod pipeline;
pub mod pointcloud;
pub mod serve;
pub mod vectorize;

pub use error::{Error, Result};
