#![no_main]

use libfuzzer_sys::fuzz_target;

use ldpc_exit::density::LlrDensity;

fuzz_target!(|data: &[u8]| {
    if let Ok(d) = LlrDensity::read_binary(data) {
        assert!(d.total_mass().is_finite());
        let mut buf = Vec::new();
        d.write_binary(&mut buf).unwrap();
        let d2 = LlrDensity::read_binary(&buf[..]).unwrap();
        assert_eq!(d, d2);
    }
});
