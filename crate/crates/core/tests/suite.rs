use multiarr::suite::{run_desk_suite, Status};

#[test]
fn desk_suite_has_no_failures() {
    let report = run_desk_suite();
    for c in &report.criteria {
        println!("{} ({} ms)", c.line(), c.elapsed_ms);
    }
    assert_eq!(report.criteria.len(), 10);
    assert!(report.criteria.iter().all(|c| c.status != Status::Fail));
    assert!(report.passed);
}
