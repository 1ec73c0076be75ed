use srimcount::verify::{run_suite, Suite, VerifyConfig};
fn main() {
    for s in Suite::ALL {
        let r = run_suite(s, &VerifyConfig::default()).unwrap();
        println!(
            "{} checks={} failed={} {:.0}ms {:?} {:?}",
            s.name(),
            r.checks,
            r.failed,
            r.elapsed_ms,
            r.failures,
            r.notes
        );
    }
}
