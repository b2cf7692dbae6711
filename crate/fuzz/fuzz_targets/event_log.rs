#![no_main]

use libfuzzer_sys::fuzz_target;
use proptrace_service::session::log_line;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(session) = proptrace_service::replay(text) {
        let relog: String = session.events.iter().map(log_line).collect();
        assert_eq!(proptrace_service::replay(&relog).unwrap(), session);
    }
});
