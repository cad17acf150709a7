//! IDX container format as used by the MNIST family of datasets.

use std::io::Read;
use std::path::Path;

use flate2::read::GzDecoder;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::encodings::Image;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const IMAGE_MAGIC: u32 = 0x0000_0803;
pub const LABEL_MAGIC: u32 = 0x0000_0801;

#[derive(Debug, Clone, PartialEq)]
pub enum IdxData {
    Images {
        rows: usize,
        cols: usize,
        /// Raw bytes, image-major then row-major.
        pixels: Vec<u8>,
    },
    Labels(Vec<u8>),
}

impl IdxData {
    pub fn len(&self) -> usize {
        match self {
            IdxData::Images { rows, cols, pixels } => pixels.len() / (rows * cols).max(1),
            IdxData::Labels(l) => l.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Images scaled by `1/255`.
    pub fn images<T: Real>(&self) -> Result<Vec<Image<T>>> {
        match self {
            IdxData::Images { rows, cols, pixels } => pixels
                .chunks_exact(rows * cols)
                .map(|px| {
                    Image::new(
                        *cols,
                        *rows,
                        px.iter().map(|&b| T::lit(f64::from(b) / 255.0)).collect(),
                    )
                })
                .collect(),
            IdxData::Labels(_) => Err(Error::Format("expected images, found labels".into())),
        }
    }
}

fn is_gzip(bytes: &[u8]) -> bool {
    bytes.len() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b
}

/// Decompresses gzip input; passes anything else through.
pub fn maybe_gunzip(bytes: &[u8]) -> Result<Vec<u8>> {
    if !is_gzip(bytes) {
        return Ok(bytes.to_vec());
    }
    let mut out = Vec::new();
    GzDecoder::new(bytes)
        .read_to_end(&mut out)
        .map_err(|e| Error::Length(format!("gzip stream: {e}")))?;
    Ok(out)
}

fn be_u32(b: &[u8], at: usize) -> Result<u32> {
    b.get(at..at + 4)
        .map(|s| u32::from_be_bytes([s[0], s[1], s[2], s[3]]))
        .ok_or_else(|| Error::Length(format!("header truncated at byte {at}")))
}

/// Parses raw or gzip-compressed IDX bytes.
pub fn parse_idx(bytes: &[u8]) -> Result<IdxData> {
    let raw = maybe_gunzip(bytes)?;
    let magic = be_u32(&raw, 0)?;
    let count = be_u32(&raw, 4)? as usize;
    match magic {
        IMAGE_MAGIC => {
            let rows = be_u32(&raw, 8)? as usize;
            let cols = be_u32(&raw, 12)? as usize;
            let need = count * rows * cols;
            let body = &raw[16..];
            if body.len() < need {
                return Err(Error::Length(format!(
                    "{count} images of {rows}x{cols} need {need} bytes, found {}",
                    body.len()
                )));
            }
            Ok(IdxData::Images {
                rows,
                cols,
                pixels: body[..need].to_vec(),
            })
        }
        LABEL_MAGIC => {
            let body = &raw[8..];
            if body.len() < count {
                return Err(Error::Length(format!(
                    "{count} labels need {count} bytes, found {}",
                    body.len()
                )));
            }
            Ok(IdxData::Labels(body[..count].to_vec()))
        }
        other => Err(Error::Format(format!("unknown IDX magic {other:#010x}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Test,
}

impl Split {
    /// File name prefix of the standard distribution.
    pub fn prefix(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "t10k",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }

    pub fn image_file(self) -> String {
        format!("{}-images-idx3-ubyte.gz", self.prefix())
    }

    pub fn label_file(self) -> String {
        format!("{}-labels-idx1-ubyte.gz", self.prefix())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset<T> {
    pub images: Vec<Image<T>>,
    pub labels: Vec<u8>,
    /// Position of each item in the full split.
    pub indices: Vec<usize>,
    pub split: Split,
    pub num_classes: usize,
}

impl<T: Real> LabeledDataset<T> {
    pub fn new(
        images: Vec<Image<T>>,
        labels: Vec<u8>,
        split: Split,
        num_classes: usize,
    ) -> Result<Self> {
        if images.len() != labels.len() {
            return Err(Error::validation(format!(
                "{} images but {} labels",
                images.len(),
                labels.len()
            )));
        }
        if let Some(&l) = labels.iter().find(|&&l| l as usize >= num_classes) {
            return Err(Error::validation(format!(
                "label {l} outside 0..{num_classes}"
            )));
        }
        Ok(Self {
            indices: (0..images.len()).collect(),
            images,
            labels,
            split,
            num_classes,
        })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// First `count` items (or all if fewer).
    pub fn take(&self, count: usize) -> Self {
        self.select(&(0..count.min(self.len())).collect::<Vec<_>>())
    }

    /// `count` distinct items drawn with `seed`, kept in dataset order.
    pub fn subset(&self, count: usize, seed: u64) -> Result<Self> {
        if count > self.len() {
            return Err(Error::validation(format!(
                "subset of {count} from {} items",
                self.len()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pick = rand::seq::index::sample(&mut rng, self.len(), count).into_vec();
        pick.sort_unstable();
        Ok(self.select(&pick))
    }

    fn select(&self, pick: &[usize]) -> Self {
        Self {
            images: pick.iter().map(|&i| self.images[i].clone()).collect(),
            labels: pick.iter().map(|&i| self.labels[i]).collect(),
            indices: pick.iter().map(|&i| self.indices[i]).collect(),
            split: self.split,
            num_classes: self.num_classes,
        }
    }
}

/// Loads one split from `dir` holding the four standard archives.
pub fn load_split<T: Real>(dir: &Path, split: Split) -> Result<LabeledDataset<T>> {
    let images = parse_idx(&std::fs::read(dir.join(split.image_file()))?)?.images()?;
    let labels = match parse_idx(&std::fs::read(dir.join(split.label_file()))?)? {
        IdxData::Labels(l) => l,
        IdxData::Images { .. } => {
            return Err(Error::Format("expected labels, found images".into()))
        }
    };
    LabeledDataset::new(images, labels, split, 10)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use flate2::write::GzEncoder;
    use flate2::Compression;
    use std::io::Write;

    pub(crate) fn image_bytes(count: u32, fill: u8) -> Vec<u8> {
        let mut b = Vec::new();
        b.extend_from_slice(&IMAGE_MAGIC.to_be_bytes());
        b.extend_from_slice(&count.to_be_bytes());
        b.extend_from_slice(&28u32.to_be_bytes());
        b.extend_from_slice(&28u32.to_be_bytes());
        b.extend(std::iter::repeat_n(fill, 784 * count as usize));
        b
    }

    pub(crate) fn label_bytes(labels: &[u8]) -> Vec<u8> {
        let mut b = Vec::new();
        b.extend_from_slice(&LABEL_MAGIC.to_be_bytes());
        b.extend_from_slice(&(labels.len() as u32).to_be_bytes());
        b.extend_from_slice(labels);
        b
    }

    pub(crate) fn gzip(b: &[u8]) -> Vec<u8> {
        let mut e = GzEncoder::new(Vec::new(), Compression::default());
        e.write_all(b).unwrap();
        e.finish().unwrap()
    }

    #[test]
    fn header_constants() {
        let d = parse_idx(&image_bytes(1, 255)).unwrap();
        assert_eq!(d.len(), 1);
        let imgs = d.images::<f64>().unwrap();
        assert_eq!((imgs[0].width, imgs[0].height), (28, 28));
        assert!(imgs[0].values.iter().all(|&v| v == 1.0));
        let l = parse_idx(&label_bytes(&[0, 1, 2, 3, 4, 5, 6, 7, 8, 9])).unwrap();
        assert_eq!(l.len(), 10);
    }

    #[test]
    fn errors() {
        let mut b = image_bytes(1, 0);
        b[0..4].copy_from_slice(&9999u32.to_be_bytes());
        assert!(matches!(parse_idx(&b), Err(Error::Format(_))));
        let b = image_bytes(2, 0);
        assert!(matches!(
            parse_idx(&b[..b.len() - 1]),
            Err(Error::Length(_))
        ));
        assert!(matches!(parse_idx(&[0, 0]), Err(Error::Length(_))));
    }

    #[test]
    fn gzip_transparent() {
        let raw = image_bytes(3, 17);
        assert_eq!(parse_idx(&gzip(&raw)).unwrap(), parse_idx(&raw).unwrap());
    }
}
