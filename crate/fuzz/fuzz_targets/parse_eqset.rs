#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = proptrace::parse_eqset(text) {
        let printed = s.to_string();
        let again = proptrace::parse_eqset(&printed).expect("rendered output parses");
        assert_eq!(again, s, "{printed}");
    }
});
