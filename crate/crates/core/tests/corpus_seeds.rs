//! The checked-in fuzz corpus seeds must stay valid inputs for their
//! respective parsers.

use std::path::PathBuf;

use ldpc_exit::channel::ChannelModel;
use ldpc_exit::degree::DegreePolynomial;
use ldpc_exit::density::LlrDensity;
use ldpc_exit::tanner::{ParityCheckMatrix, TannerGraph};

fn corpus(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).expect("corpus directory exists") {
        let entry = entry.unwrap();
        out.push((
            entry.file_name().to_string_lossy().into_owned(),
            std::fs::read(entry.path()).unwrap(),
        ));
    }
    assert!(!out.is_empty(), "empty corpus for {target}");
    out.sort();
    out
}

#[test]
fn ensemble_seeds_parse() {
    for (name, bytes) in corpus("ensemble_parse") {
        let s = std::str::from_utf8(&bytes).unwrap();
        if s.starts_with('(') {
            ldpc_exit::degree::EnsembleSpec::parse_pair(s)
                .unwrap_or_else(|e| panic!("{name}: {e}"));
        } else {
            DegreePolynomial::parse(s).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}

#[test]
fn channel_seeds_parse() {
    for (name, bytes) in corpus("channel_parse") {
        let s = std::str::from_utf8(&bytes).unwrap();
        ChannelModel::parse(s).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn alist_seeds_parse() {
    for (name, bytes) in corpus("alist_parse") {
        ParityCheckMatrix::read_alist(&bytes[..]).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn edge_list_seeds_parse() {
    for (name, bytes) in corpus("edge_list_parse") {
        TannerGraph::read_edge_list(&bytes[..]).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn density_seeds_parse() {
    for (name, bytes) in corpus("density_binary") {
        let d = LlrDensity::read_binary(&bytes[..]).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!((d.total_mass() - 1.0).abs() < 1e-6, "{name}");
    }
}
