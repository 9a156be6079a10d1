#![no_main]
use hyperwz::schema::{parse_spec, SpecDoc};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = parse_spec(s) {
        let json = serde_json::to_string(&SpecDoc::from_spec(&spec)).unwrap();
        assert_eq!(parse_spec(&json).expect("serialized spec parses"), spec);
        let _ = spec.lhs();
    }
});
