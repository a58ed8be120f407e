#![no_main]

use libfuzzer_sys::fuzz_target;

use ldpc_exit_cli::config::Resolver;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = Resolver::from_text(s);
});
