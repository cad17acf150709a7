//! Dataset ingestion and persistence of encoded images.

pub mod fetch;
pub mod idx;
pub mod persist;

pub use fetch::{fetch_dataset, FetchOptions, FetchOutcome, DEFAULT_BASE_URL};
pub use idx::{load_split, parse_idx, IdxData, LabeledDataset, Split};
pub use persist::{image_seed, load_encoded, save_encoded, EncodedRecord, EncodedSet};
