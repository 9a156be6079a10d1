#![no_main]
use hyperwz::algebra::Symbol;
use hyperwz::schema::parse_term;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = parse_term(s) {
        let _ = t.shift_quotient(&Symbol::k());
        let _ = t.shift_quotient(&Symbol::n());
    }
});
