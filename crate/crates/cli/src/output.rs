//! CSV/report output with reproducibility headers. Identical resolved
//! configurations and seeds produce byte-identical files; parallel trial
//! results are written in trial order regardless of scheduling.

use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::PathBuf;

/// One-line header carrying the tool version, a hash of the resolved
/// configuration and the seed. All entropy-valued columns are in bits.
pub fn header(cmd: &str, seed: u64, params: &[(&str, &str)]) -> String {
    let mut canonical = format!("cmd={cmd}\nseed={seed}\n");
    let mut sorted: Vec<_> = params.to_vec();
    sorted.sort();
    for (k, v) in sorted {
        canonical.push_str(&format!("{k}={v}\n"));
    }
    let digest = Sha256::digest(canonical.as_bytes());
    let hash: String = digest[..6].iter().map(|b| format!("{b:02x}")).collect();
    format!(
        "# ldpc-exit {} cmd={cmd} config={hash} seed={seed} units=bits",
        env!("CARGO_PKG_VERSION")
    )
}

/// Writes a table to `--out` (file path) or stdout.
pub fn write_table(
    out: Option<String>,
    header: &str,
    columns: &str,
    rows: &[String],
) -> ldpc_exit::Result<()> {
    let mut text = String::with_capacity(rows.len() * 32 + 64);
    text.push_str(header);
    text.push('\n');
    text.push_str(columns);
    text.push('\n');
    for r in rows {
        text.push_str(r);
        text.push('\n');
    }
    match out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(text.as_bytes())?;
        }
        None => {
            print!("{text}");
        }
    }
    Ok(())
}

/// Output sink that can hold multiple named tables (a directory) or fall
/// back to stdout.
pub struct OutputTarget {
    dir: Option<PathBuf>,
}

impl OutputTarget {
    pub fn new(out: Option<String>) -> ldpc_exit::Result<Self> {
        let dir = match out {
            Some(path) => {
                let p = PathBuf::from(path);
                std::fs::create_dir_all(&p)?;
                Some(p)
            }
            None => None,
        };
        Ok(OutputTarget { dir })
    }

    pub fn write_named_table(
        &self,
        name: &str,
        header: &str,
        columns: &str,
        rows: &[String],
    ) -> ldpc_exit::Result<()> {
        match &self.dir {
            Some(dir) => write_table(
                Some(dir.join(name).to_string_lossy().into_owned()),
                header,
                columns,
                rows,
            ),
            None => {
                println!("## {name}");
                write_table(None, header, columns, rows)
            }
        }
    }

    pub fn write_text(&self, text: &str) -> ldpc_exit::Result<()> {
        match &self.dir {
            Some(dir) => {
                let mut f = std::fs::File::create(dir.join("report.txt"))?;
                f.write_all(text.as_bytes())?;
                Ok(())
            }
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}
