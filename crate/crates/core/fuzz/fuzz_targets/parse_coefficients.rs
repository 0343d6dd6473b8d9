#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(c) = fastqz::polyfile::parse_coefficients(text) {
            let back = fastqz::polyfile::parse_coefficients(&fastqz::polyfile::format_coefficients(&c)).unwrap();
            assert_eq!(back, c);
        }
    }
});
