//! Append-only progress log for `verify_conant`.
//!
//! The file holds one JSON object per line:
//!
//! ```text
//! {"kind":"header","version":"0.1.0","n":4,"strategy":"box","units":13}
//! {"kind":"unit","index":0,"found":[["5",[1,2,3,4]], ...]}
//! {"kind":"class","bits":"5","conant_witness":[1,3,7,13]}
//! ```
//!
//! Unit lines record finished enumeration units (in completion order), class
//! lines record finished witness searches. Profile bits are decimal strings.
//! A line that fails to parse at the very end of the file is the remnant of an
//! interrupted write and is cut off; anywhere else it is a hard error.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::table::ProfileBits;
use super::{Found, SearchError, Strategy};

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Line {
    Header {
        version: String,
        n: usize,
        strategy: Strategy,
        units: usize,
    },
    Unit {
        index: usize,
        found: Vec<(String, Vec<i64>)>,
    },
    Class {
        bits: String,
        conant_witness: Option<Vec<i64>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Header {
    pub n: usize,
    pub strategy: Strategy,
    pub units: usize,
}

/// Everything recovered from an existing checkpoint.
#[derive(Debug, Default)]
pub(crate) struct Progress {
    pub units: BTreeMap<usize, Vec<Found>>,
    pub classes: BTreeMap<ProfileBits, Option<Vec<i64>>>,
}

fn parse_bits(text: &str) -> Result<ProfileBits, SearchError> {
    text.parse()
        .map_err(|_| SearchError::CheckpointCorrupt(format!("bad profile bits {text:?}")))
}

/// Reads `path`, truncating a torn final line. A missing or empty file yields
/// no progress. A header that disagrees with `expected` is an error.
pub(crate) fn load(path: &Path, expected: Header) -> Result<Progress, SearchError> {
    let file = match File::open(path) {
        Ok(file) => file,
        Err(err) if err.kind() == std::io::ErrorKind::NotFound => return Ok(Progress::default()),
        Err(err) => return Err(err.into()),
    };
    let mut raw = Vec::new();
    for line in BufReader::new(file).split(b'\n') {
        raw.push(line?);
    }
    let mut parsed = Vec::with_capacity(raw.len());
    let mut valid_bytes = 0u64;
    for (index, bytes) in raw.iter().enumerate() {
        let line = std::str::from_utf8(bytes)
            .ok()
            .and_then(|s| serde_json::from_str::<Line>(s).ok());
        match line {
            Some(line) => {
                parsed.push(line);
                valid_bytes += bytes.len() as u64 + 1;
            }
            None if index + 1 == raw.len() => {
                log::warn!(
                    "checkpoint {}: discarding torn trailing line {}",
                    path.display(),
                    index + 1
                );
                OpenOptions::new()
                    .write(true)
                    .open(path)?
                    .set_len(valid_bytes)?;
            }
            None => {
                return Err(SearchError::CheckpointCorrupt(format!(
                    "{}: line {} is not a valid record",
                    path.display(),
                    index + 1
                )))
            }
        }
    }

    let mut lines = parsed.into_iter();
    let mut progress = Progress::default();
    match lines.next() {
        None => return Ok(progress),
        Some(Line::Header {
            n, strategy, units, ..
        }) => {
            let found = Header { n, strategy, units };
            if found != expected {
                return Err(SearchError::CheckpointCorrupt(format!(
                    "{} was written for n = {n}, {strategy} strategy, {units} units; \
                     this run needs n = {}, {} strategy, {} units",
                    path.display(),
                    expected.n,
                    expected.strategy,
                    expected.units
                )));
            }
        }
        Some(_) => {
            return Err(SearchError::CheckpointCorrupt(format!(
                "{} does not start with a header",
                path.display()
            )))
        }
    }
    for line in lines {
        match line {
            Line::Header { .. } => {
                return Err(SearchError::CheckpointCorrupt("repeated header".into()))
            }
            Line::Unit { index, found } => {
                if index >= expected.units {
                    return Err(SearchError::CheckpointCorrupt(format!(
                        "unit {index} out of range"
                    )));
                }
                let found = found
                    .into_iter()
                    .map(|(bits, w)| Ok((parse_bits(&bits)?, w)))
                    .collect::<Result<Vec<_>, SearchError>>()?;
                progress.units.insert(index, found);
            }
            Line::Class {
                bits,
                conant_witness,
            } => {
                progress.classes.insert(parse_bits(&bits)?, conant_witness);
            }
        }
    }
    Ok(progress)
}

/// Shared appender; each record is written and flushed as one line.
pub(crate) struct Writer {
    file: Mutex<File>,
}

impl Writer {
    /// Opens `path` for appending, writing the header if the file is empty.
    pub fn open(path: &Path, header: Header) -> Result<Self, SearchError> {
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        if file.metadata()?.len() == 0 {
            let line = Line::Header {
                version: crate::VERSION.to_string(),
                n: header.n,
                strategy: header.strategy,
                units: header.units,
            };
            write_line(&mut file, &line)?;
        }
        Ok(Writer {
            file: Mutex::new(file),
        })
    }

    pub fn unit(&self, index: usize, found: &[Found]) -> Result<(), SearchError> {
        let found = found
            .iter()
            .map(|(b, w)| (b.to_string(), w.clone()))
            .collect();
        self.append(&Line::Unit { index, found })
    }

    pub fn class(
        &self,
        bits: ProfileBits,
        conant_witness: Option<&[i64]>,
    ) -> Result<(), SearchError> {
        self.append(&Line::Class {
            bits: bits.to_string(),
            conant_witness: conant_witness.map(<[i64]>::to_vec),
        })
    }

    fn append(&self, line: &Line) -> Result<(), SearchError> {
        let mut file = self
            .file
            .lock()
            .unwrap_or_else(|poisoned| poisoned.into_inner());
        write_line(&mut file, line)
    }
}

fn write_line(file: &mut File, line: &Line) -> Result<(), SearchError> {
    let mut text = serde_json::to_string(line).expect("checkpoint lines serialize");
    text.push('\n');
    file.write_all(text.as_bytes())?;
    file.flush()?;
    Ok(())
}
