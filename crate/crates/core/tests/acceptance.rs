//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! `ACCEPTANCE_LEVEL=quick` trims the largest sizes; the default is `full`.

use std::process::ExitCode;

use multiport_ghz::verify::{Harness, Level};

fn main() -> ExitCode {
    let level = match std::env::var("ACCEPTANCE_LEVEL").as_deref() {
        Ok("quick") => Level::Quick,
        _ => Level::Full,
    };
    println!("acceptance ({level:?})");
    let outcomes = Harness::new(level).run_all();
    for o in &outcomes {
        println!("{}", o.line());
    }

    // a perturbed splitter phase must be caught
    let tampered = Harness::tampered(Level::Quick, 0.05);
    let caught = [1, 4, 10]
        .into_iter()
        .all(|id| !tampered.criterion(id).passed);
    println!(
        "[{}] negative control: tampered DFT phase {}",
        if caught { "PASS" } else { "FAIL" },
        if caught { "rejected" } else { "accepted" }
    );

    let failed = outcomes.iter().filter(|o| !o.passed).count() + usize::from(!caught);
    println!(
        "{} of {} criteria passed",
        outcomes.len() - outcomes.iter().filter(|o| !o.passed).count(),
        outcomes.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
