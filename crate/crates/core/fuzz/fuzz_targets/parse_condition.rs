#![no_main]
use hyperwz::asympt::ConvergenceCondition;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = ConvergenceCondition::parse(s) {
        assert_eq!(ConvergenceCondition::parse(&c.to_string()).expect("printed form reparses"), c);
    }
});
