#![no_main]
use hyperwz::schema::{parse_transcript, transcript_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(tr) = parse_transcript(s) {
        assert_eq!(parse_transcript(&transcript_json(&tr)).expect("serialized transcript parses"), tr);
    }
});
