#![no_main]

use libfuzzer_sys::fuzz_target;

use ldpc_exit::tanner::TannerGraph;

fuzz_target!(|data: &[u8]| {
    if let Ok(g) = TannerGraph::read_edge_list(data) {
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let g2 = TannerGraph::read_edge_list(&buf[..]).unwrap();
        assert_eq!(g.edges(), g2.edges());
        // The GF(2) projection is always well defined.
        let _ = g.to_parity_check();
    }
});
