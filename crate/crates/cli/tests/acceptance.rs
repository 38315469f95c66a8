//! Acceptance check for the command-line adapter: the full command surface
//! is run twice and must produce byte-identical stdout, output files, and
//! exit codes, and the bytes must equal the library result rendered through
//! the same fixed-format writers (no numerics live in the adapter itself).
//!
//! The numerical acceptance checks live in the core crate's test suite.

mod common;

use std::fs;
use std::path::Path;

use common::{c, eta, fixture_str, pair_one, pair_target, pair_two, run_cli, spec_three, spec_two};
use etaconv::convolutions::{conv_cfree, conv_monotone, scale_s};
use etaconv::measures::poisson_density;
use etaconv::oracle::{oracle_product_moments, ConvolutionKind, FunctionalPair};
use etaconv::semigroups::{evolve_coefficients, fields_from_time_one, FieldSeries};
use etaconv::transforms::{moments_from_eta, moments_from_spec};
use etaconv::PairDistribution;
use etaconv_cli::{
    density_csv, evolution_json, fields_json, measure_json, oracle_json, pair_json,
    trajectory_csv, verdict_json, KindArg,
};

struct Snapshot {
    code: i32,
    stdout: String,
    files: Vec<String>,
}

/// Runs one command with `file_flags` pointing into `dir` and captures
/// everything it produced.
fn snapshot(dir: &Path, args: &[String], file_flags: &[(&str, &str)]) -> Snapshot {
    let mut full = args.to_vec();
    let mut paths = Vec::new();
    for (flag, name) in file_flags {
        let path = dir.join(name);
        full.push((*flag).to_string());
        full.push(path.to_str().unwrap().to_string());
        paths.push(path);
    }
    let run = run_cli(&full);
    let files = paths
        .iter()
        .map(|p| fs::read_to_string(p).unwrap_or_else(|_| panic!("missing output {}", p.display())))
        .collect();
    Snapshot { code: run.code, stdout: run.stdout, files }
}

fn sv(parts: &[&str]) -> Vec<String> {
    parts.iter().map(|s| (*s).to_string()).collect()
}

#[test]
fn acceptance_12_cli_runs_are_byte_deterministic_and_match_the_library() {
    let two = fixture_str("atoms_two.json");
    let three = fixture_str("atoms_three.json");
    let p1 = fixture_str("pair_one.json");
    let p2 = fixture_str("pair_two.json");
    let target = fixture_str("pair_target.json");
    let delta = fixture_str("atoms_delta.json");
    let zero = fixture_str("zero_mean.json");
    let constant = fixture_str("field_constant.json");
    let linear = fixture_str("field_linear.json");

    // (name, args, output-file flags, expected exit code)
    type Case<'a> = (&'a str, Vec<String>, Vec<(&'a str, &'a str)>, i32);
    let mut cases: Vec<Case> = Vec::new();
    for kind in ["monotone", "boolean", "orthogonal", "monotone0", "boolean0"] {
        cases.push((
            kind,
            sv(&["convolve", "--kind", kind, "--lhs", &two, "--rhs", &three, "--order", "8"]),
            vec![],
            0,
        ));
    }
    for kind in ["cmonotone", "cfree"] {
        cases.push((
            kind,
            sv(&["convolve", "--kind", kind, "--lhs", &p1, "--rhs", &p2, "--order", "8"]),
            vec![],
            0,
        ));
    }
    cases.push((
        "convolve-out",
        sv(&["convolve", "--kind", "boolean", "--lhs", &two, "--rhs", &three, "--order", "8"]),
        vec![("--out", "boolean.json")],
        0,
    ));
    cases.push((
        "evolve",
        sv(&["evolve", "--b1", &constant, "--b2", &linear, "--t", "0.5", "--order", "8"]),
        vec![("--csv", "trajectory.csv")],
        0,
    ));
    cases.push((
        "embed",
        sv(&["embed", "--target", &target]),
        vec![],
        0,
    ));
    cases.push(("check-yes", sv(&["check-id", "--measure", &delta]), vec![], 0));
    cases.push(("check-no", sv(&["check-id", "--measure", &zero]), vec![], 1));
    cases.push((
        "density",
        sv(&["density", "--measure", &two, "--radius", "0.9", "--points", "32"]),
        vec![("--csv", "density.csv")],
        0,
    ));
    cases.push((
        "oracle-single",
        sv(&["oracle", "--kind", "monotone", "--lhs", &two, "--rhs", &three, "--order", "6"]),
        vec![],
        0,
    ));
    cases.push((
        "oracle-pair",
        sv(&["oracle", "--kind", "cmonotone", "--lhs", &p1, "--rhs", &p2, "--order", "5"]),
        vec![],
        0,
    ));
    cases.push((
        "scale-t",
        sv(&["scale", "--kind", "T", "--c", "0.3,0.2", "--measure", &two, "--order", "6"]),
        vec![],
        0,
    ));
    cases.push((
        "scale-s",
        sv(&["scale", "--kind", "S", "--c", "0.3,0.2", "--measure", &two, "--order", "6"]),
        vec![],
        0,
    ));

    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let mut first_runs: Vec<(&str, Snapshot)> = Vec::new();
    for (name, args, file_flags, expected_code) in cases {
        let a = snapshot(dir_a.path(), &args, &file_flags);
        let b = snapshot(dir_b.path(), &args, &file_flags);
        assert_eq!(a.code, expected_code, "{name}: unexpected exit code");
        assert_eq!(a.code, b.code, "{name}: exit codes differ between runs");
        assert_eq!(a.stdout, b.stdout, "{name}: stdout differs between runs");
        assert_eq!(a.files, b.files, "{name}: output files differ between runs");
        first_runs.push((name, a));
    }
    let total = first_runs.len();
    let get = |name: &str| -> &Snapshot {
        &first_runs.iter().find(|(n, _)| *n == name).expect("known case").1
    };

    // the adapter adds nothing: bytes equal library results rendered with
    // the same writers
    let expected_monotone =
        measure_json(&conv_monotone(&eta(&spec_two(), 8), &eta(&spec_three(), 8)).unwrap()) + "\n";
    assert_eq!(get("monotone").stdout, expected_monotone);

    let expected_cfree = pair_json(&conv_cfree(&pair_one(8), &pair_two(8)).unwrap()) + "\n";
    assert_eq!(get("cfree").stdout, expected_cfree);

    let f1 = FieldSeries::new(vec![c(-0.5, 1.0)]).unwrap();
    let f2 = FieldSeries::new(vec![c(-1.0, 0.0), c(1.0, 0.0)]).unwrap();
    let evo = evolve_coefficients(&f1, &f2, 0.5, 500, 8).unwrap();
    assert_eq!(get("evolve").stdout, evolution_json(&evo) + "\n");
    assert_eq!(get("evolve").files[0], trajectory_csv(&evo));

    let (b1, b2) = fields_from_time_one(&pair_target(3), 3, 800).unwrap();
    assert_eq!(get("embed").stdout, fields_json(&b1, &b2) + "\n");

    assert_eq!(get("check-yes").stdout, verdict_json(true, 0.9, 128) + "\n");
    assert_eq!(get("check-no").stdout, verdict_json(false, 0.9, 128) + "\n");

    let samples = poisson_density(&moments_from_spec(&spec_two(), 16).unwrap(), 0.9, 32).unwrap();
    assert_eq!(get("density").files[0], density_csv(samples.angles(), samples.values()));

    let phi_two = moments_from_spec(&spec_two(), 6).unwrap().values().to_vec();
    let phi_three = moments_from_spec(&spec_three(), 6).unwrap().values().to_vec();
    let (first, second) = oracle_product_moments(
        ConvolutionKind::Monotone,
        &FunctionalPair::new(phi_two.clone(), phi_two).unwrap(),
        &FunctionalPair::new(phi_three.clone(), phi_three).unwrap(),
        6,
    )
    .unwrap();
    assert_eq!(get("oracle-single").stdout, oracle_json(KindArg::Monotone, &first, &second) + "\n");

    let to_fp = |pair: &PairDistribution| {
        FunctionalPair::new(
            moments_from_eta(&pair.mu).values().to_vec(),
            moments_from_eta(&pair.nu).values().to_vec(),
        )
        .unwrap()
    };
    let (omu, onu) = oracle_product_moments(
        ConvolutionKind::CMonotone,
        &to_fp(&pair_one(5)),
        &to_fp(&pair_two(5)),
        5,
    )
    .unwrap();
    assert_eq!(get("oracle-pair").stdout, oracle_json(KindArg::Cmonotone, &omu, &onu) + "\n");

    let expected_scale = measure_json(&scale_s(c(0.3, 0.2), &eta(&spec_two(), 6)).unwrap()) + "\n";
    assert_eq!(get("scale-s").stdout, expected_scale);

    println!(
        "PASS 12: {total} commands ran twice with byte-identical stdout, files, and exit codes, \
         and the bytes equal library results rendered through the shared writers"
    );
}
