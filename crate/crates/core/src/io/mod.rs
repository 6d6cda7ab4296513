//! Configuration, datasets and the commands of the command-line tool.

pub mod commands;
pub mod config;
pub mod dataset;

pub use commands::{run_command, Command};
pub use config::{parse_config, parse_with_overrides, RunConfig};
pub use dataset::{read_dataset, write_dataset, Column, Dataset};
