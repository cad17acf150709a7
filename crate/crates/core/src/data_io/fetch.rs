//! Download of the four dataset archives.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Duration;

use super::idx::{parse_idx, IdxData, Split};
use crate::error::{Error, Result};

/// Default download location of the Fashion-MNIST archives.
pub const DEFAULT_BASE_URL: &str = "http://fashion-mnist.s3-website.eu-central-1.amazonaws.com/";

#[derive(Debug, Clone)]
pub struct FetchOptions {
    pub attempts: u32,
    pub backoff: Duration,
    pub timeout: Duration,
}

impl Default for FetchOptions {
    fn default() -> Self {
        Self {
            attempts: 3,
            backoff: Duration::from_millis(500),
            timeout: Duration::from_secs(120),
        }
    }
}

/// What happened to each archive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchOutcome {
    pub path: PathBuf,
    pub downloaded: bool,
}

pub fn archive_names() -> [String; 4] {
    [
        Split::Train.image_file(),
        Split::Train.label_file(),
        Split::Test.image_file(),
        Split::Test.label_file(),
    ]
}

/// Checks that an archive decompresses to a complete IDX payload of the
/// expected kind.
pub fn verify_archive(name: &str, bytes: &[u8]) -> Result<()> {
    let parsed = parse_idx(bytes).map_err(|e| Error::Integrity(format!("{name}: {e}")))?;
    let images = name.contains("images");
    match (&parsed, images) {
        (IdxData::Images { .. }, true) | (IdxData::Labels(_), false) => Ok(()),
        _ => Err(Error::Integrity(format!("{name}: unexpected IDX kind"))),
    }
}

/// Downloads any of the four archives missing from `dir`. Archives that are
/// present and verify are left alone, so a second call makes no requests.
pub fn fetch_dataset(base_url: &str, dir: &Path, opts: &FetchOptions) -> Result<Vec<FetchOutcome>> {
    std::fs::create_dir_all(dir)?;
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(opts.timeout))
        .build()
        .into();
    let mut out = Vec::new();
    for name in archive_names() {
        let path = dir.join(&name);
        if let Ok(bytes) = std::fs::read(&path) {
            if verify_archive(&name, &bytes).is_ok() {
                out.push(FetchOutcome {
                    path,
                    downloaded: false,
                });
                continue;
            }
        }
        let url = join_url(base_url, &name);
        let bytes = download(&agent, &url, opts)?;
        verify_archive(&name, &bytes)?;
        let tmp = dir.join(format!("{name}.part"));
        std::fs::write(&tmp, &bytes)?;
        std::fs::rename(&tmp, &path)?;
        out.push(FetchOutcome {
            path,
            downloaded: true,
        });
    }
    Ok(out)
}

fn join_url(base: &str, name: &str) -> String {
    if base.ends_with('/') {
        format!("{base}{name}")
    } else {
        format!("{base}/{name}")
    }
}

enum Attempt {
    Retry(String),
    Fatal(Error),
}

fn download(agent: &ureq::Agent, url: &str, opts: &FetchOptions) -> Result<Vec<u8>> {
    let attempts = opts.attempts.max(1);
    let mut last = String::new();
    for attempt in 1..=attempts {
        match try_download(agent, url) {
            Ok(bytes) => return Ok(bytes),
            Err(Attempt::Fatal(e)) => return Err(e),
            Err(Attempt::Retry(msg)) => last = msg,
        }
        if attempt < attempts {
            std::thread::sleep(opts.backoff * attempt);
        }
    }
    Err(Error::Fetch {
        url: url.to_string(),
        attempts,
        message: last,
    })
}

fn try_download(agent: &ureq::Agent, url: &str) -> std::result::Result<Vec<u8>, Attempt> {
    let resp = agent.get(url).call().map_err(|e| match e {
        ureq::Error::StatusCode(code) if (400..500).contains(&code) => {
            Attempt::Fatal(Error::Fetch {
                url: url.to_string(),
                attempts: 1,
                message: format!("HTTP {code}"),
            })
        }
        other => Attempt::Retry(other.to_string()),
    })?;
    let expected = resp.body().content_length();
    let mut reader = resp.into_body().into_reader();
    let mut bytes = Vec::new();
    let read = reader.read_to_end(&mut bytes);
    match (read, expected) {
        (Ok(_), Some(len)) if bytes.len() as u64 != len => Err(Attempt::Fatal(Error::Integrity(
            format!("{url}: received {} of {len} bytes", bytes.len()),
        ))),
        (Ok(_), _) => Ok(bytes),
        (Err(e), Some(len)) => Err(Attempt::Fatal(Error::Integrity(format!(
            "{url}: received {} of {len} bytes ({e})",
            bytes.len()
        )))),
        (Err(e), None) => Err(Attempt::Retry(e.to_string())),
    }
}
