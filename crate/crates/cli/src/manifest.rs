//! `run_manifest.json` and `run.conf`: enough to repeat a run with
//! `foldlab --config run.conf <command>`.

use std::time::Duration;

use serde::Serialize;

use crate::commands::{Context, Outcome};
use crate::config::Settings;
use crate::error::Result;
use crate::Command;

pub const MANIFEST: &str = "run_manifest.json";
pub const RUN_CONF: &str = "run.conf";

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    argv: &'a [String],
    config: &'a std::collections::BTreeMap<String, String>,
    rerun: String,
    seed: u64,
    threads: usize,
    versions: Versions,
    wall_time_s: f64,
    artifacts: &'a [String],
    pass: bool,
}

#[derive(Serialize)]
struct Versions {
    foldlab: &'static str,
    rustc_target: &'static str,
}

pub fn write(
    ctx: &Context,
    command: &Command,
    settings: &Settings,
    argv: &[String],
    outcome: &Outcome,
    wall: Duration,
) -> Result<()> {
    ctx.write_text(RUN_CONF, &settings.to_conf())?;
    let m = Manifest {
        command: command.name(),
        argv,
        config: settings.resolved(),
        rerun: format!("foldlab --config {RUN_CONF} {}", command.name()),
        seed: ctx.seed,
        threads: ctx.threads,
        versions: Versions {
            foldlab: env!("CARGO_PKG_VERSION"),
            rustc_target: std::env::consts::ARCH,
        },
        wall_time_s: wall.as_secs_f64(),
        artifacts: &outcome.artifacts,
        pass: outcome.pass,
    };
    ctx.write_text(MANIFEST, &serde_json::to_string_pretty(&m)?)?;
    Ok(())
}
