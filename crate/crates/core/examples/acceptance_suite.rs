fn main() {
    let outcomes = aggregation_shells::acceptance::run_all();
    for o in &outcomes {
        println!("{}", o.line());
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("{passed} of {} passed", outcomes.len());
}
