//! Total colorings of a torus and their JSON file format.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{TorusDomain, Vertex};

pub const FORMAT_VERSION: u32 = 1;

/// A total assignment `vertex -> {0..k-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    domain: TorusDomain,
    k: usize,
    data: Vec<u8>,
}

impl Labeling {
    pub fn new(domain: TorusDomain, k: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != domain.vertex_count() {
            return Err(Error::Length {
                expected: domain.vertex_count(),
                got: data.len(),
            });
        }
        if k == 0 || k > 256 {
            return Err(Error::Parameters(format!("color count {k} out of range")));
        }
        if let Some((position, &color)) = data.iter().enumerate().find(|(_, &c)| c as usize >= k) {
            return Err(Error::ColorRange {
                position,
                color: color as usize,
                k,
            });
        }
        Ok(Self { domain, k, data })
    }

    /// Colors every vertex by `f(coords)`.
    pub fn from_fn(domain: TorusDomain, k: usize, mut f: impl FnMut(&[usize]) -> u8) -> Result<Self> {
        let mut coords = vec![0; domain.dim()];
        let data = (0..domain.vertex_count())
            .map(|i| {
                domain.coords_into(i, &mut coords);
                f(&coords)
            })
            .collect();
        Self::new(domain, k, data)
    }

    pub fn constant(domain: TorusDomain, k: usize, color: u8) -> Result<Self> {
        let n = domain.vertex_count();
        Self::new(domain, k, vec![color; n])
    }

    pub fn domain(&self) -> &TorusDomain {
        &self.domain
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn at(&self, index: usize) -> u8 {
        self.data[index]
    }

    pub fn color(&self, v: &Vertex) -> u8 {
        self.data[self.domain.index(v)]
    }

    /// Overwrites one vertex. Returns an error if the color is out of range.
    pub fn set(&mut self, index: usize, color: u8) -> Result<()> {
        if color as usize >= self.k {
            return Err(Error::ColorRange {
                position: index,
                color: color as usize,
                k: self.k,
            });
        }
        self.data[index] = color;
        Ok(())
    }

    pub fn to_file(&self) -> LabelingFile {
        LabelingFile {
            format_version: FORMAT_VERSION,
            d: self.domain.dim(),
            sides: self.domain.sides().to_vec(),
            k: self.k,
            data: self.data.iter().map(|&c| c as u32).collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: LabelingFile = serde_json::from_str(text)?;
        file.into_labeling()
    }
}

/// On-disk form: `data` is row-major with the last coordinate fastest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelingFile {
    pub format_version: u32,
    pub d: usize,
    pub sides: Vec<usize>,
    pub k: usize,
    pub data: Vec<u32>,
}

impl LabelingFile {
    pub fn into_labeling(self) -> Result<Labeling> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::FormatVersion {
                got: self.format_version,
                expected: FORMAT_VERSION,
            });
        }
        if self.sides.len() != self.d {
            return Err(Error::Arity {
                expected: self.d,
                got: self.sides.len(),
            });
        }
        let domain = TorusDomain::new(self.sides)?;
        let k = self.k;
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(position, &c)| {
                u8::try_from(c).map_err(|_| Error::ColorRange {
                    position,
                    color: c as usize,
                    k,
                })
            })
            .collect::<Result<Vec<u8>>>()?;
        Labeling::new(domain, k, data)
    }
}
