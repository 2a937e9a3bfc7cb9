//! Versioned text format for trained models, diffable and exact.
//!
//! Layout: a version line, key<TAB>value header lines (algorithm,
//! hyperparameters, feature fingerprint, update count), a `weights` marker,
//! then `index<TAB>weight` lines for the nonzero weights, and `end`.
//! Weights are printed with Rust's shortest-roundtrip float formatting, so
//! save/load is lossless.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::{Algorithm, FeatureFingerprint, LinearModel};
use crate::error::{Error, Result};

const MAGIC: &str = "disaffection model v1";

impl LinearModel {
    pub fn save(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "{MAGIC}")?;
        writeln!(w, "algorithm\t{}", self.algorithm().name())?;
        match self.algorithm() {
            Algorithm::Pa { c } => writeln!(w, "param\tc\t{c}")?,
            Algorithm::Alma { alpha } => writeln!(w, "param\talpha\t{alpha}")?,
            Algorithm::Pegasos { lambda, project } => {
                writeln!(w, "param\tlambda\t{lambda}")?;
                writeln!(w, "param\tproject\t{}", project as u8)?;
            }
        }
        let fp = self.fingerprint();
        writeln!(w, "task\t{}", fp.task)?;
        writeln!(w, "tokenizer\t{}", fp.tokenizer)?;
        writeln!(w, "scheme\t{}", fp.scheme)?;
        writeln!(w, "vocab_hash\t{}", fp.vocab_hash)?;
        writeln!(w, "update_count\t{}", self.update_count())?;
        writeln!(w, "weights")?;
        for (index, weight) in self.nonzero_weights() {
            writeln!(w, "{index}\t{weight}")?;
        }
        writeln!(w, "end")?;
        Ok(())
    }

    pub fn load(r: impl BufRead) -> Result<LinearModel> {
        let mut lines = r.lines().enumerate().map(|(i, l)| (i + 1, l));

        // Leading '#' lines (provenance comments) are allowed before the
        // version line.
        loop {
            let (n, line) = lines
                .next()
                .ok_or_else(|| Error::malformed(1, "empty model file"))?;
            let line = line?;
            if line.starts_with('#') {
                continue;
            }
            if line.trim_end() != MAGIC {
                return Err(Error::malformed(n, format!("expected {MAGIC:?}")));
            }
            break;
        }

        let mut header: HashMap<String, String> = HashMap::new();
        let mut params: HashMap<String, String> = HashMap::new();
        let mut weights_line = 0;
        for (n, line) in lines.by_ref() {
            let line = line?;
            let line = line.trim_end();
            if line == "weights" {
                weights_line = n;
                break;
            }
            let mut parts = line.splitn(3, '\t');
            let key = parts.next().unwrap_or("");
            match key {
                "param" => {
                    let name = parts
                        .next()
                        .ok_or_else(|| Error::malformed(n, "param without name"))?;
                    let value = parts
                        .next()
                        .ok_or_else(|| Error::malformed(n, "param without value"))?;
                    params.insert(name.to_string(), value.to_string());
                }
                _ => {
                    let value = parts
                        .next()
                        .ok_or_else(|| Error::malformed(n, format!("header {key:?} without value")))?;
                    header.insert(key.to_string(), value.to_string());
                }
            }
        }
        if weights_line == 0 {
            return Err(Error::malformed(0, "missing weights section"));
        }

        let get = |key: &str| {
            header
                .get(key)
                .cloned()
                .ok_or_else(|| Error::malformed(weights_line, format!("missing header {key:?}")))
        };
        let param = |key: &str| {
            params
                .get(key)
                .cloned()
                .ok_or_else(|| Error::malformed(weights_line, format!("missing param {key:?}")))
        };
        let parse_f64 = |s: String| {
            s.parse::<f64>()
                .map_err(|e| Error::malformed(weights_line, format!("bad number {s:?}: {e}")))
        };

        let algorithm = match get("algorithm")?.as_str() {
            "pa" => Algorithm::Pa {
                c: parse_f64(param("c")?)?,
            },
            "alma" => Algorithm::Alma {
                alpha: parse_f64(param("alpha")?)?,
            },
            "pegasos" => Algorithm::Pegasos {
                lambda: parse_f64(param("lambda")?)?,
                project: param("project")? == "1",
            },
            other => {
                return Err(Error::malformed(
                    weights_line,
                    format!("unknown algorithm {other:?}"),
                ))
            }
        };
        let fingerprint = FeatureFingerprint::new(
            get("task")?,
            get("tokenizer")?,
            get("scheme")?,
            get("vocab_hash")?,
        );
        let update_count: u64 = get("update_count")?
            .parse()
            .map_err(|e| Error::malformed(weights_line, format!("bad update_count: {e}")))?;

        let mut entries: Vec<(u32, f64)> = Vec::new();
        let mut ended = false;
        for (n, line) in lines {
            let line = line?;
            let line = line.trim_end();
            if line == "end" {
                ended = true;
                break;
            }
            let (index, weight) = line
                .split_once('\t')
                .ok_or_else(|| Error::malformed(n, "expected index<TAB>weight"))?;
            let index: u32 = index
                .parse()
                .map_err(|e| Error::malformed(n, format!("bad index {index:?}: {e}")))?;
            let weight: f64 = weight
                .parse()
                .map_err(|e| Error::malformed(n, format!("bad weight {weight:?}: {e}")))?;
            if !weight.is_finite() {
                return Err(Error::malformed(n, "non-finite weight"));
            }
            if let Some(&(last, _)) = entries.last() {
                if index <= last {
                    return Err(Error::malformed(n, "weight indices must strictly increase"));
                }
            }
            entries.push((index, weight));
        }
        if !ended {
            return Err(Error::malformed(0, "model file truncated: missing end"));
        }
        Ok(LinearModel::from_parts(
            algorithm,
            fingerprint,
            update_count,
            &entries,
        ))
    }
}
