#![no_main]

use libfuzzer_sys::fuzz_target;

use ldpc_exit::degree::{DegreePolynomial, EnsembleSpec};

// Degree-distribution strings come from the command line and from config
// files; parsing must never panic, and accepted polynomials must satisfy the
// type invariants.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = DegreePolynomial::parse(s) {
        let total: f64 = p.coeffs().iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert_eq!(p.coeffs()[0], 0.0);
        let _ = p.eval(0.5).unwrap();
        let back = p.node_perspective().edge_perspective();
        for (a, b) in p.coeffs().iter().zip(back.coeffs()) {
            assert!((a - b).abs() < 1e-9);
        }
    }
    let _ = EnsembleSpec::parse_pair(s);
});
