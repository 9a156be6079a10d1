#![no_main]
use hyperwz::algebra::{parse_polynomial, parse_rational};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse_rational(s) {
        let again = parse_rational(&r.to_string()).expect("printed form reparses");
        assert_eq!(again, r);
    }
    if let Ok(p) = parse_polynomial(s) {
        assert_eq!(parse_polynomial(&p.to_string()).expect("printed form reparses"), p);
    }
});
