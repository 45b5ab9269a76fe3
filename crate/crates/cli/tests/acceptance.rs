//! Acceptance suite. Prints one PASS/FAIL line per criterion, followed by
//! the individual checks behind it, and exits nonzero if any criterion
//! failed. Runs without the libtest harness so the table is never captured.
//!
//! Thresholds live in `sectorscatter_core::verify`; the CLI determinism
//! criterion below pins its own (zero differing bytes).

use std::path::Path;
use std::process::{Command, ExitCode};

use sectorscatter_core::verify::{self, CheckOutcome, RadiusGenerator, DEFAULT_SEED};

const BIN: &str = env!("CARGO_BIN_EXE_sectorscatter");

struct Criterion {
    name: &'static str,
    checks: Vec<CheckOutcome>,
}

impl Criterion {
    fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }
}

fn run_cli(line: &str, out: &Path) -> Vec<u8> {
    let status = Command::new(BIN)
        .args(line.split_whitespace())
        .arg("--out")
        .arg(out)
        .status()
        .expect("spawning sectorscatter");
    assert!(status.success(), "sectorscatter {line} exited with {status}");
    std::fs::read(out).expect("reading CLI output")
}

fn cli_determinism() -> Vec<CheckOutcome> {
    let dir = tempfile::tempdir().unwrap();
    let layout = dir.path().join("layout.json");
    std::fs::write(&layout, sectorscatter_core::layout_file::DEMO_LAYOUT_JSON).unwrap();
    let layout = layout.to_str().unwrap().to_owned();
    let csa = format!("csa --seed 3 --runs 2 --layout {layout}");
    let cases = [
        (
            "scatter csv",
            "scatter --l1 200 --l2 1000 --a1 0 --a2 6.283185307179586 --n 100000 --seed 42",
        ),
        (
            "scatter json",
            "scatter --l1 0 --l2 1 --a1 10 --a2 80 --degrees --n 5000 --seed 7 --format json",
        ),
        ("csa csv", csa.as_str()),
        ("pl-pdf csv", "pl-pdf"),
        ("pl-hist csv", "pl-hist --n 200000 --seed 9"),
    ];
    cases
        .iter()
        .enumerate()
        .map(|(k, (name, args))| {
            let a = run_cli(args, &dir.path().join(format!("a{k}")));
            let b = run_cli(args, &dir.path().join(format!("b{k}")));
            let differing = a.len().abs_diff(b.len()) + a.iter().zip(&b).filter(|(x, y)| x != y).count();
            CheckOutcome {
                name: format!("CLI {name}: differing bytes across two runs"),
                statistic: differing as f64,
                threshold: 0.0,
                passed: differing == 0 && !a.is_empty(),
                detail: format!("{} bytes", a.len()),
            }
        })
        .collect()
}

fn main() -> ExitCode {
    let seed = DEFAULT_SEED;
    let generator = RadiusGenerator::InverseCdf;
    let criteria = vec![
        Criterion {
            name: "inverse-transform correctness",
            checks: verify::inverse_transform(seed, generator),
        },
        Criterion {
            name: "round-trip identity",
            checks: verify::round_trip(seed, generator),
        },
        Criterion {
            name: "closed form vs convolution oracle",
            checks: verify::oracle_agreement(),
        },
        Criterion {
            name: "path-loss density normalization",
            checks: verify::normalization(),
        },
        Criterion {
            name: "Monte Carlo path-loss agreement",
            checks: verify::monte_carlo_pathloss(seed),
        },
        Criterion {
            name: "CSA exactness",
            checks: verify::csa_exactness(seed),
        },
        Criterion {
            name: "determinism",
            checks: verify::determinism(seed)
                .into_iter()
                .chain(cli_determinism())
                .collect(),
        },
        Criterion {
            name: "mean-square radius",
            checks: verify::mean_square_radius(seed, generator),
        },
    ];

    println!();
    for c in &criteria {
        println!("{}  {}", if c.passed() { "PASS" } else { "FAIL" }, c.name);
    }
    println!();
    let all: Vec<CheckOutcome> = criteria.iter().flat_map(|c| c.checks.iter().cloned()).collect();
    print!("{}", verify::format_table(&all));

    let failed: Vec<&str> = criteria.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
    println!();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
