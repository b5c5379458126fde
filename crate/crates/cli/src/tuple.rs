//! File holding a list of labelings on one domain, used for 2-coloring
//! tuples and enumeration dumps.

use serde::{Deserialize, Serialize};

use polychromatic::labeling::{Labeling, LabelingFile, FORMAT_VERSION};
use polychromatic::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
pub struct TupleFile {
    pub format_version: u32,
    pub labelings: Vec<LabelingFile>,
}

impl TupleFile {
    pub fn from_tuple(tuple: &[Labeling]) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            labelings: tuple.iter().map(Labeling::to_file).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tuple serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text)?;
        if file.format_version != FORMAT_VERSION {
            return Err(Error::FormatVersion {
                got: file.format_version,
                expected: FORMAT_VERSION,
            });
        }
        Ok(file)
    }

    pub fn into_tuple(self) -> Result<Vec<Labeling>> {
        self.labelings.into_iter().map(LabelingFile::into_labeling).collect()
    }
}
