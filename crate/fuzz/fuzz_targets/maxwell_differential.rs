#![no_main]

use libfuzzer_sys::fuzz_target;

use ldpc_exit::channel::{ChannelOutput, Symbol};
use ldpc_exit::maxwell::{maxwell_decode, MaxwellOptions};
use ldpc_exit::peeling::peel;
use ldpc_exit::tanner::TannerGraph;

// Differential fuzzing of the decoder entry points: fuzz bytes describe a
// tiny graph and an erasure pattern; the enumerated list must equal the
// brute-force compatible set and peeling must agree with it whenever it
// fully resolves the word.
fuzz_target!(|data: &[u8]| {
    if data.len() < 4 {
        return;
    }
    let n_var = 1 + (data[0] % 10) as usize;
    let n_chk = 1 + (data[1] % 6) as usize;
    let seed = data[2] as u64;
    let mut edges = Vec::new();
    for pair in data[3..].chunks_exact(2).take(40) {
        edges.push(((pair[0] as usize) % n_var, (pair[1] as usize) % n_chk));
    }
    let Ok(graph) = TannerGraph::from_edges(n_var, n_chk, edges) else {
        return;
    };
    let h = graph.to_parity_check();
    let Ok(words) = h.enumerate_codewords(1 << 12) else {
        return;
    };
    // Erasure pattern and transmitted codeword from the leftover bytes.
    let word = &words[(data[2] as usize) % words.len()];
    let symbols: Vec<Symbol> = (0..n_var)
        .map(|i| {
            let b = data.get(3 + i).copied().unwrap_or(17);
            if b % 3 == 0 {
                Symbol::Erasure
            } else {
                Symbol::Bit(word.get(i) as u8)
            }
        })
        .collect();
    let out = ChannelOutput { symbols };

    let res = maxwell_decode(&graph, &out, seed, MaxwellOptions::default())
        .expect("consistent erasure input decodes");
    let mut list = res.list.clone().expect("small instance fits the cap");
    list.sort();
    let mut brute: Vec<_> = words
        .into_iter()
        .filter(|w| {
            out.symbols.iter().enumerate().all(|(i, s)| match *s {
                Symbol::Bit(b) => w.get(i) == (b == 1),
                _ => true,
            })
        })
        .collect();
    brute.sort();
    assert_eq!(list, brute, "list decoder disagrees with brute force");
    assert_eq!(list.len(), 1 << res.h_final());

    let peeled = peel(&graph, &out).expect("consistent erasure input peels");
    if !peeled.stuck {
        assert_eq!(list.len(), 1, "peeling resolved a multi-codeword instance");
        let bits: Vec<u8> = (0..n_var).map(|i| list[0].get(i) as u8).collect();
        let peel_bits: Vec<u8> = peeled.assignment.iter().map(|b| b.unwrap()).collect();
        assert_eq!(bits, peel_bits);
    }
});
