//! Full acceptance run: one line per criterion, every criterion must pass.

use scenarios::verify::{verify, VerifyLevel, CRITERIA};

#[test]
fn acceptance_criteria() {
    let summary = verify(VerifyLevel::Full);
    println!();
    for c in &summary.criteria {
        println!("{}", c.line());
        for f in &c.findings {
            println!("    finding: {f}");
        }
    }
    println!("total {:.2} s", summary.elapsed_seconds);

    let ids: Vec<&str> = summary.criteria.iter().map(|c| c.id).collect();
    assert_eq!(ids, CRITERIA);
    assert!(summary.passed, "failed criteria: {:?}", summary.failed_ids());
}
