use std::process::ExitCode;

use levy_noise::verify::{run_criterion, VerifyOptions, SUITES};

fn main() -> ExitCode {
    let opts = VerifyOptions::default();
    let mut failed = Vec::new();
    println!("acceptance: seed {}, {} samples", opts.seed, opts.samples);
    for id in 1..=SUITES.len() {
        match run_criterion(id, &opts) {
            Ok(outcome) => {
                println!("{}", outcome.summary());
                for row in outcome.failed_rows() {
                    println!(
                        "    failed: {}  estimate {:.6e}  theory {:.6e}  se {:.3e}  tol {}",
                        row.quantity, row.estimate, row.theory, row.std_error, row.tolerance
                    );
                }
                if !outcome.pass {
                    failed.push(id);
                }
            }
            Err(e) => {
                println!("criterion {id:>2} {:<11} FAIL  error: {e}", SUITES[id - 1]);
                failed.push(id);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", SUITES.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
