#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(r) = fastqz::polyfile::parse_roots(text) {
            assert_eq!(fastqz::polyfile::parse_roots(&fastqz::polyfile::format_roots(&r)).unwrap(), r);
        }
    }
});
