#![no_main]
use fastqz::qs_core::build_companion_pencil;
use fastqz::structured_qz::{eigenvalues, SolverOptions};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(p) = fastqz::polyfile::parse_polynomial(text) else { return };
    if p.degree() > 64 {
        return;
    }
    let Ok(gen) = build_companion_pencil(&p, true) else { return };
    if let Ok(res) = eigenvalues(&gen, &SolverOptions::default()) {
        assert_eq!(res.eigenvalues.len(), p.degree());
    }
});
