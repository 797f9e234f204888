//! Acceptance criteria, one line each. Criteria 1-9 run through the library
//! suite with per-criterion runtime limits; criterion 10 runs the binary
//! twice and compares the reports byte for byte.

use std::process::{Command, ExitCode};
use std::time::Instant;

use recmeth_core::reproduce::{run, ReproduceConfig};

/// Runtime ceilings in seconds; `None` where no limit applies.
const LIMITS: [(u8, Option<f64>); 9] = [
    (1, Some(60.0)),
    (2, Some(120.0)),
    (3, None),
    (4, Some(30.0)),
    (5, None),
    (6, None),
    (7, Some(10.0)),
    (8, Some(10.0)),
    (9, Some(60.0)),
];

fn reproduce_stdout() -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_recmeth"))
        .args(["reproduce", "--seed", "42"])
        .output()
        .expect("run recmeth");
    assert!(out.status.success(), "reproduce failed: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn main() -> ExitCode {
    let report = run(&ReproduceConfig {
        timing: true,
        ..Default::default()
    });
    let mut all = true;
    for c in &report.criteria {
        let secs = c.seconds.unwrap_or(0.0);
        let limit = LIMITS.iter().find(|(id, _)| *id == c.id).and_then(|(_, l)| *l);
        let in_time = limit.is_none_or(|l| secs <= l);
        let ok = c.passed && in_time;
        all &= ok;
        let limit_text = limit.map_or(String::new(), |l| format!(" (limit {l:.0}s)"));
        println!(
            "criterion {:>2} {} {:<28} {:>5} checks, {} violations, {secs:.2}s{limit_text}{}",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.key,
            c.checks,
            c.violations,
            if c.detail.is_empty() || c.passed { String::new() } else { format!(": {}", c.detail) },
        );
    }

    let start = Instant::now();
    let (first, second) = (reproduce_stdout(), reproduce_stdout());
    let same = first == second && !first.is_empty();
    all &= same;
    println!(
        "criterion 10 {} {:<28} {} report bytes, {:.2}s",
        if same { "PASS" } else { "FAIL" },
        "byte-identical-reports",
        first.len(),
        start.elapsed().as_secs_f64()
    );

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
