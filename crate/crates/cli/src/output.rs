//! Output files and their provenance headers.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use sha2::{Digest, Sha256};

use crate::{CliError, CliResult};

pub fn open_reader(path: &Path) -> CliResult<BufReader<File>> {
    match File::open(path) {
        Ok(file) => Ok(BufReader::new(file)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            Err(CliError::Missing(path.to_path_buf()))
        }
        Err(e) => Err(CliError::Validation(format!(
            "cannot open {}: {e}",
            path.display()
        ))),
    }
}

pub fn create_writer(path: &Path) -> CliResult<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

/// Hash of the effective configuration: sorted key=value lines of every
/// setting that shaped the output.
pub fn config_hash(entries: &[(&str, String)]) -> String {
    let mut sorted: Vec<String> = entries
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    sorted.sort();
    let mut hasher = Sha256::new();
    for line in sorted {
        hasher.update(line.as_bytes());
        hasher.update(b"\n");
    }
    hasher
        .finalize()
        .iter()
        .take(6)
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Writes the provenance comment block: tool version, config hash, seed,
/// and (unless suppressed) the generation timestamp.
pub fn write_provenance(
    w: &mut impl Write,
    hash: &str,
    seed: u64,
    deterministic: bool,
) -> CliResult<()> {
    writeln!(w, "# disaffection {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(w, "# config {hash}")?;
    writeln!(w, "# seed {seed}")?;
    if !deterministic {
        writeln!(
            w,
            "# generated {}",
            Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true)
        )?;
    }
    Ok(())
}

/// Reads the non-comment, non-blank lines of a table file, checking its
/// column header.
pub fn read_table_lines(path: &Path, expected_header: &str) -> CliResult<Vec<String>> {
    let reader = open_reader(path)?;
    let mut rows = Vec::new();
    let mut header_seen = false;
    for line in reader.lines() {
        let line = line?;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if !header_seen {
            if line.trim_end() != expected_header {
                return Err(CliError::Validation(format!(
                    "{}: expected header {expected_header:?}, got {:?}",
                    path.display(),
                    line.trim_end()
                )));
            }
            header_seen = true;
            continue;
        }
        rows.push(line);
    }
    if !header_seen {
        return Err(CliError::Validation(format!(
            "{}: missing header {expected_header:?}",
            path.display()
        )));
    }
    Ok(rows)
}

/// A resolved output target, buffered; callers must `finish()`.
pub struct OutputFile {
    path: PathBuf,
    writer: BufWriter<File>,
}

impl OutputFile {
    pub fn start(
        path: &Path,
        hash: &str,
        seed: u64,
        deterministic: bool,
    ) -> CliResult<Self> {
        let mut writer = create_writer(path)?;
        write_provenance(&mut writer, hash, seed, deterministic)?;
        Ok(OutputFile {
            path: path.to_path_buf(),
            writer,
        })
    }

    pub fn finish(mut self) -> CliResult<PathBuf> {
        self.writer.flush()?;
        Ok(self.path)
    }
}

impl Write for OutputFile {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        self.writer.write(buf)
    }

    fn flush(&mut self) -> std::io::Result<()> {
        self.writer.flush()
    }
}
