#![no_main]

use libfuzzer_sys::fuzz_target;

use ldpc_exit::tanner::ParityCheckMatrix;

// The alist reader consumes untrusted files; it must never panic or blow up
// memory, and anything it accepts must round-trip bit-exactly.
fuzz_target!(|data: &[u8]| {
    if let Ok(h) = ParityCheckMatrix::read_alist(data) {
        let mut buf = Vec::new();
        h.write_alist(&mut buf).unwrap();
        let h2 = ParityCheckMatrix::read_alist(&buf[..]).unwrap();
        assert_eq!(h, h2);
    }
});
