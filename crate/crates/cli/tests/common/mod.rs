#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use etaconv::transforms::{eta_from_moments, moments_from_spec};
use etaconv::{CircleMeasureSpec, Complex64, EtaCoefficients, PairDistribution};

pub struct RunResult {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Runs the compiled binary with the given arguments.
pub fn run_cli<I, S>(args: I) -> RunResult
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let output = Command::new(env!("CARGO_BIN_EXE_etaconv"))
        .args(args)
        .output()
        .expect("binary runs");
    RunResult {
        stdout: String::from_utf8(output.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(output.stderr).expect("utf-8 stderr"),
        code: output.status.code().expect("exit code"),
    }
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture_str(name: &str) -> String {
    fixture(name).to_str().expect("utf-8 path").to_owned()
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn eta(spec: &CircleMeasureSpec, order: usize) -> EtaCoefficients {
    eta_from_moments(&moments_from_spec(spec, order).unwrap())
}

// Library-side twins of the fixture files.
pub fn spec_two() -> CircleMeasureSpec {
    CircleMeasureSpec::Atoms(vec![(0.7, 0.6), (2.4, 0.4)])
}

pub fn spec_three() -> CircleMeasureSpec {
    CircleMeasureSpec::Atoms(vec![(5.9, 0.5), (0.3, 0.3), (1.2, 0.2)])
}

pub fn pair_one(order: usize) -> PairDistribution {
    let nu = CircleMeasureSpec::Atoms(vec![(0.2, 0.7), (5.8, 0.3)]);
    PairDistribution::new(eta(&spec_two(), order), eta(&nu, order)).unwrap()
}

pub fn pair_two(order: usize) -> PairDistribution {
    let mu = CircleMeasureSpec::Atoms(vec![(0.9, 0.5), (0.1, 0.5)]);
    let nu = CircleMeasureSpec::Atoms(vec![(1.4, 0.8), (3.9, 0.2)]);
    PairDistribution::new(eta(&mu, order), eta(&nu, order)).unwrap()
}

pub fn pair_target(order: usize) -> PairDistribution {
    let mu = CircleMeasureSpec::Moments(vec![c(0.55, 0.1), c(0.2, 0.15), c(0.05, -0.2)]);
    let nu = CircleMeasureSpec::Moments(vec![c(0.6, 0.05), c(0.3, 0.1), c(0.1, 0.0)]);
    PairDistribution::new(eta(&mu, order), eta(&nu, order)).unwrap()
}
