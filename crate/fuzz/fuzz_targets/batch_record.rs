#![no_main]

use libfuzzer_sys::fuzz_target;
use proptrace_service::BatchRecord;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(rec) = serde_json::from_str::<BatchRecord>(text) {
        let line = serde_json::to_string(&rec).unwrap();
        assert_eq!(serde_json::from_str::<BatchRecord>(&line).unwrap(), rec);
    }
    // small lookahead keeps each run short
    let report = proptrace_service::batch_eval(text, 2);
    assert_eq!(report.counts.values().sum::<usize>(), report.total);
});
