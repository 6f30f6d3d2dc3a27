//! Runs every acceptance criterion and prints one verdict line per criterion.

use std::process::ExitCode;

use abvar::selftest::Suite;

const SEED: u64 = 20_240_601;

fn main() -> ExitCode {
    let reports = Suite::All.run(SEED);
    println!("acceptance (seed {SEED})");
    for r in &reports {
        println!("{}", r.summary_line());
    }
    let failed: Vec<u8> = reports.iter().filter(|r| !r.pass()).map(|r| r.id).collect();
    if reports.len() != 9 || !failed.is_empty() {
        eprintln!("acceptance failed: {} reports, failing criteria {failed:?}", reports.len());
        return ExitCode::FAILURE;
    }
    println!("acceptance: all {} criteria pass", reports.len());
    ExitCode::SUCCESS
}
