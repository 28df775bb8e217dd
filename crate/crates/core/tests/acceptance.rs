use shuffles_core::verify::{run, CRITERIA};

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for (number, _) in CRITERIA {
        let outcome = run(number).expect("known criterion");
        println!("{outcome}");
        if !outcome.passed {
            failed.push(number);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
