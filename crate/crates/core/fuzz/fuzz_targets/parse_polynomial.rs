#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(p) = fastqz::polyfile::parse_polynomial(text) {
            assert!(p.degree() >= 1);
            assert!(p.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite()));
        }
    }
});
