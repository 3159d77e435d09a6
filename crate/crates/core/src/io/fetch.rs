//! Leaderboard download with an on-disk cache.
//!
//! Snapshots are stored as canonical CSV under
//! `<cache>/<competition>/<snapshot>.csv`; once present they are served
//! without touching the network.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Duration;

use base64::Engine;

use crate::error::{Error, Result};
use crate::io::leaderboard::{Design, leaderboard_csv, parse_leaderboard};
use crate::sota::{LeaderboardSample, Metric};

/// Environment variable naming the directory that holds `kaggle.json`.
pub const CREDENTIALS_ENV: &str = "KAGGLE_CONFIG_DIR";

/// Anything that can produce leaderboard CSV bytes for a competition.
pub trait LeaderboardSource {
    /// CSV with at least a team-name and a score column, possibly zipped.
    fn download(&self, competition: &str) -> Result<Vec<u8>>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Credentials {
    pub username: String,
    pub key: String,
}

impl Credentials {
    /// Reads `kaggle.json` from `$KAGGLE_CONFIG_DIR`, or `~/.kaggle` when unset.
    pub fn from_env() -> Result<Self> {
        let dir = match std::env::var_os(CREDENTIALS_ENV) {
            Some(d) => PathBuf::from(d),
            None => std::env::var_os("HOME")
                .map(|h| PathBuf::from(h).join(".kaggle"))
                .ok_or_else(|| {
                    Error::Fetch("no credentials directory (set KAGGLE_CONFIG_DIR)".into())
                })?,
        };
        Self::from_file(&dir.join("kaggle.json"))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Fetch(format!("cannot read credentials {}: {e}", path.display()))
        })?;
        let v: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| Error::Fetch(format!("malformed credentials {}: {e}", path.display())))?;
        let field = |name: &str| {
            v.get(name)
                .and_then(|x| x.as_str())
                .map(str::to_string)
                .ok_or_else(|| {
                    Error::Fetch(format!("credentials {} lack `{name}`", path.display()))
                })
        };
        Ok(Self {
            username: field("username")?,
            key: field("key")?,
        })
    }
}

/// Client for the Kaggle leaderboard download endpoint.
pub struct KaggleSource {
    credentials: Credentials,
    base_url: String,
    agent: ureq::Agent,
}

impl KaggleSource {
    pub const BASE_URL: &str = "https://www.kaggle.com/api/v1";

    pub fn new(credentials: Credentials) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(120)))
            .build()
            .into();
        Self {
            credentials,
            base_url: Self::BASE_URL.to_string(),
            agent,
        }
    }

    pub fn with_base_url(mut self, url: &str) -> Self {
        self.base_url = url.trim_end_matches('/').to_string();
        self
    }
}

impl LeaderboardSource for KaggleSource {
    fn download(&self, competition: &str) -> Result<Vec<u8>> {
        let url = format!(
            "{}/competitions/{competition}/leaderboard/download",
            self.base_url
        );
        let token = base64::engine::general_purpose::STANDARD.encode(format!(
            "{}:{}",
            self.credentials.username, self.credentials.key
        ));
        let response = self
            .agent
            .get(&url)
            .header("Authorization", &format!("Basic {token}"))
            .call();
        let mut response = match response {
            Ok(r) => r,
            Err(ureq::Error::StatusCode(404)) => {
                return Err(Error::NotFound(competition.to_string()));
            }
            Err(ureq::Error::StatusCode(code @ (401 | 403))) => {
                return Err(Error::Fetch(format!(
                    "authentication rejected (HTTP {code})"
                )));
            }
            Err(e) => return Err(Error::Fetch(e.to_string())),
        };
        response
            .body_mut()
            .with_config()
            .limit(256 * 1024 * 1024)
            .read_to_vec()
            .map_err(|e| Error::Fetch(e.to_string()))
    }
}

/// The CSV inside a zip archive, or the bytes themselves if they are not zipped.
pub fn unpack_csv(bytes: &[u8]) -> Result<Vec<u8>> {
    if !bytes.starts_with(b"PK") {
        return Ok(bytes.to_vec());
    }
    let mut archive = zip::ZipArchive::new(std::io::Cursor::new(bytes))
        .map_err(|e| Error::Fetch(format!("bad archive: {e}")))?;
    for i in 0..archive.len() {
        let mut file = archive
            .by_index(i)
            .map_err(|e| Error::Fetch(format!("bad archive: {e}")))?;
        if file.name().is_ok_and(|n| n.ends_with(".csv")) {
            let mut out = Vec::new();
            file.read_to_end(&mut out)
                .map_err(|e| Error::Fetch(format!("bad archive: {e}")))?;
            return Ok(out);
        }
    }
    Err(Error::Fetch("archive holds no CSV file".into()))
}

/// Where a fetched leaderboard came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Cache,
    Network,
}

#[derive(Debug, Clone)]
pub struct Fetched {
    pub path: PathBuf,
    pub provenance: Provenance,
}

pub fn cache_path(cache_dir: &Path, competition: &str, snapshot: &str) -> Result<PathBuf> {
    let safe = |s: &str| {
        !s.is_empty()
            && s.chars()
                .all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c))
            && s != "."
            && s != ".."
    };
    if !safe(competition) || !safe(snapshot) {
        return Err(Error::Usage(format!(
            "competition `{competition}` and snapshot `{snapshot}` must be plain names"
        )));
    }
    Ok(cache_dir.join(competition).join(format!("{snapshot}.csv")))
}

/// Stores the canonical CSV of one leaderboard snapshot, downloading it only
/// when it is not cached yet (or `refresh` is set).
///
/// Scores are validated before anything is written, so a failed download
/// never leaves a partial file behind.
pub fn fetch_leaderboard(
    source: &dyn LeaderboardSource,
    competition: &str,
    snapshot: &str,
    cache_dir: &Path,
    refresh: bool,
) -> Result<Fetched> {
    let path = cache_path(cache_dir, competition, snapshot)?;
    if path.exists() && !refresh {
        return Ok(Fetched {
            path,
            provenance: Provenance::Cache,
        });
    }
    let raw = unpack_csv(&source.download(competition)?)?;
    // Any metric works for validation: both live on [0, 1].
    let design = Design {
        n: 1,
        metric: Metric::Accuracy,
        class_balance: None,
        chance_level: 0.0,
    };
    let sample: LeaderboardSample =
        parse_leaderboard(raw.as_slice(), Path::new(competition), &design)?;
    let bytes = leaderboard_csv(&sample)?;
    let dir = path.parent().expect("cache path has a parent");
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let tmp = path.with_extension("csv.part");
    std::fs::write(&tmp, &bytes).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
    Ok(Fetched {
        path,
        provenance: Provenance::Network,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_path_like_names() {
        let dir = Path::new("/tmp/cache");
        assert!(cache_path(dir, "../etc", "x").is_err());
        assert!(cache_path(dir, "comp", "a/b").is_err());
        assert_eq!(
            cache_path(dir, "siim-isic", "2020-08-17").unwrap(),
            Path::new("/tmp/cache/siim-isic/2020-08-17.csv")
        );
    }

    #[test]
    fn plain_bytes_pass_through() {
        assert_eq!(unpack_csv(b"team,score\n").unwrap(), b"team,score\n");
    }

    #[test]
    fn zipped_csv_is_extracted() {
        use std::io::Write;
        let mut buf = std::io::Cursor::new(Vec::new());
        {
            let mut z = zip::ZipWriter::new(&mut buf);
            z.start_file("board.csv", zip::write::SimpleFileOptions::default())
                .unwrap();
            z.write_all(b"TeamName,Score\na,0.5\n").unwrap();
            z.finish().unwrap();
        }
        assert_eq!(
            unpack_csv(buf.get_ref()).unwrap(),
            b"TeamName,Score\na,0.5\n"
        );
    }

    #[test]
    fn credentials_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("kaggle.json");
        std::fs::write(&p, r#"{"username": "u", "key": "k"}"#).unwrap();
        assert_eq!(
            Credentials::from_file(&p).unwrap(),
            Credentials {
                username: "u".into(),
                key: "k".into()
            }
        );
        std::fs::write(&p, r#"{"username": "u"}"#).unwrap();
        assert!(matches!(Credentials::from_file(&p), Err(Error::Fetch(_))));
    }
}
