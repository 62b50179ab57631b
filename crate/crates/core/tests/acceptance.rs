//! Acceptance run: one PASS/FAIL line per criterion. Set `SYM2K_SEED` to
//! replay a different random sample.

use std::process::ExitCode;

use sym2kernels::audit::{report_text, run_all, DEFAULT_SEED};

fn main() -> ExitCode {
    let seed = std::env::var("SYM2K_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED);
    // libtest passes flags such as `--list`; there is nothing to enumerate
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    println!("seed {seed}");
    let results = run_all(seed);
    print!("{}", report_text(&results));
    if results.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
