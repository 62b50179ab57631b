//! OEIS search client with a bundled fixture store and an on-disk cache.
//!
//! Lookups are keyed by the SHA-256 of the comma-joined terms. The fixture
//! directory is consulted first, then the cache, then (unless offline) the
//! network. Network failures degrade to [`OeisStatus::Offline`].

use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use super::{OeisStatus, ScanError, ScanRow};

pub const MIN_TERMS: usize = 4;
/// Leading terms sent when annotating scan rows.
pub const QUERY_TERMS: usize = 8;
pub const OFFLINE_ENV: &str = "SYM2K_OFFLINE";
pub const CACHE_ENV: &str = "SYM2K_OEIS_CACHE";
const ENDPOINT: &str = "https://oeis.org/search";
const MIN_INTERVAL: Duration = Duration::from_secs(1);
const TIMEOUT: Duration = Duration::from_secs(20);

static LAST_REQUEST: Mutex<Option<Instant>> = Mutex::new(None);

pub fn query_string(terms: &[BigInt]) -> String {
    terms.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",")
}

pub fn digest(terms: &[BigInt]) -> String {
    hex::encode(Sha256::digest(query_string(terms).as_bytes()))
}

/// Reads the first result's number from a search response. Both the bare
/// array form and the older `{"results": [...]}` wrapper are accepted;
/// `null` or an empty list means no match.
pub fn parse_search_response(body: &str) -> Result<OeisStatus, String> {
    let v: serde_json::Value = serde_json::from_str(body).map_err(|e| e.to_string())?;
    let results = match &v {
        serde_json::Value::Null => return Ok(OeisStatus::NotFound),
        serde_json::Value::Array(a) => a.as_slice(),
        serde_json::Value::Object(o) => match o.get("results") {
            Some(serde_json::Value::Array(a)) => a.as_slice(),
            Some(serde_json::Value::Null) | None => return Ok(OeisStatus::NotFound),
            Some(other) => return Err(format!("unexpected results field {other}")),
        },
        other => return Err(format!("unexpected response {other}")),
    };
    match results.first() {
        None => Ok(OeisStatus::NotFound),
        Some(first) => first
            .get("number")
            .and_then(serde_json::Value::as_u64)
            .map(|n| OeisStatus::Found(format!("A{n:06}")))
            .ok_or_else(|| "first result has no number".to_string()),
    }
}

pub fn bundled_fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join("oeis")
}

fn env_flag(name: &str) -> bool {
    std::env::var(name).is_ok_and(|v| matches!(v.to_ascii_lowercase().as_str(), "1" | "true" | "yes" | "on"))
}

#[derive(Clone, Debug)]
pub struct OeisClient {
    pub fixtures: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub offline: bool,
}

impl OeisClient {
    pub fn new(fixtures: Option<PathBuf>, cache: Option<PathBuf>, offline: bool) -> Self {
        OeisClient { fixtures, cache, offline }
    }

    /// Bundled fixtures, cache directory from the environment, offline when
    /// the offline switch is set.
    pub fn from_env() -> Self {
        let cache = std::env::var_os(CACHE_ENV).map(PathBuf::from);
        Self::new(Some(bundled_fixtures_dir()), cache, env_flag(OFFLINE_ENV))
    }

    pub fn with_offline(mut self, offline: bool) -> Self {
        self.offline |= offline;
        self
    }

    fn stored(&self, key: &str) -> Option<String> {
        [&self.fixtures, &self.cache]
            .into_iter()
            .flatten()
            .find_map(|dir| std::fs::read_to_string(dir.join(format!("{key}.json"))).ok())
    }

    pub fn lookup(&self, terms: &[BigInt]) -> Result<OeisStatus, ScanError> {
        if terms.len() < MIN_TERMS {
            return Err(ScanError::InsufficientData { needed: MIN_TERMS, have: terms.len() });
        }
        let key = digest(terms);
        if let Some(body) = self.stored(&key) {
            return Ok(parse_search_response(&body).unwrap_or(OeisStatus::Offline));
        }
        if self.offline {
            return Ok(OeisStatus::Offline);
        }
        let Some(body) = fetch(&query_string(terms)) else {
            return Ok(OeisStatus::Offline);
        };
        let Ok(status) = parse_search_response(&body) else {
            return Ok(OeisStatus::Offline);
        };
        if let Some(dir) = &self.cache {
            // best effort; a failed cache write does not change the answer
            let _ = write_atomically(dir, &key, &body);
        }
        Ok(status)
    }
}

impl OeisClient {
    /// Looks up the leading terms of an integral row; other rows are left
    /// as skipped.
    pub fn annotate(&self, row: &mut ScanRow) {
        if let Some(terms) = row.integer_terms() {
            let n = terms.len().min(QUERY_TERMS);
            if let Ok(status) = self.lookup(&terms[..n]) {
                row.oeis = status;
            }
        }
    }
}

fn write_atomically(dir: &Path, key: &str, body: &str) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!("{key}.json.{}.tmp", std::process::id()));
    std::fs::write(&tmp, body)?;
    std::fs::rename(tmp, dir.join(format!("{key}.json")))
}

fn fetch(query: &str) -> Option<String> {
    let mut last = LAST_REQUEST.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(t) = *last {
        let elapsed = t.elapsed();
        if elapsed < MIN_INTERVAL {
            std::thread::sleep(MIN_INTERVAL - elapsed);
        }
    }
    *last = Some(Instant::now());
    let agent: ureq::Agent = ureq::Agent::config_builder().timeout_global(Some(TIMEOUT)).build().into();
    let mut resp = agent.get(ENDPOINT).query("q", query).query("fmt", "json").call().ok()?;
    resp.body_mut().read_to_string().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scan::reference_row;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn offline_client() -> OeisClient {
        OeisClient::new(Some(bundled_fixtures_dir()), None, true)
    }

    #[test]
    fn fixtures_identify_known_sequences() {
        let c = offline_client();
        assert_eq!(c.lookup(&ints(&[1, 4, 28, 256, 2716])).unwrap(), OeisStatus::Found("A002895".into()));
        assert_eq!(c.lookup(&ints(&[1, 8, 88, 1088])).unwrap(), OeisStatus::Found("A036917".into()));
    }

    #[test]
    fn fixtures_record_table_rows_as_absent() {
        let c = offline_client();
        for label in [2, 3, 15] {
            let terms = reference_row(label).unwrap().first_terms;
            assert_eq!(c.lookup(&terms).unwrap(), OeisStatus::NotFound, "row #{label}");
        }
    }

    #[test]
    fn offline_miss_is_not_an_error() {
        let c = offline_client();
        assert_eq!(c.lookup(&ints(&[3, 1, 4, 1, 5, 9, 2, 6])).unwrap(), OeisStatus::Offline);
        assert!(c.lookup(&ints(&[1, 2, 3])).is_err());
    }

    #[test]
    fn cache_is_consulted() {
        let dir = std::env::temp_dir().join(format!("sym2k-oeis-{}", std::process::id()));
        let terms = ints(&[2, 7, 1, 8, 2, 8]);
        write_atomically(&dir, &digest(&terms), r#"[{"number": 1113, "name": "e"}]"#).unwrap();
        let c = OeisClient::new(None, Some(dir.clone()), true);
        assert_eq!(c.lookup(&terms).unwrap(), OeisStatus::Found("A001113".into()));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn response_shapes() {
        assert_eq!(parse_search_response("null").unwrap(), OeisStatus::NotFound);
        assert_eq!(parse_search_response("[]").unwrap(), OeisStatus::NotFound);
        assert_eq!(parse_search_response(r#"{"count":0,"results":null}"#).unwrap(), OeisStatus::NotFound);
        assert_eq!(
            parse_search_response(r#"{"count":1,"results":[{"number":45}]}"#).unwrap(),
            OeisStatus::Found("A000045".into())
        );
        assert!(parse_search_response("<html>").is_err());
    }

    #[test]
    fn annotation_uses_leading_terms() {
        let mut rows = crate::scan::scan(&crate::scan::ScanConfig::reference_table()).unwrap();
        let c = offline_client();
        for r in rows.iter_mut() {
            c.annotate(r);
        }
        let status = |label: usize| rows.iter().find(|r| r.label == label).unwrap().oeis.clone();
        // scan labels 1, 2 and 11 are table rows #2, #3 and #15
        for label in [1, 2, 11] {
            assert_eq!(status(label), OeisStatus::NotFound);
        }
        assert_eq!(status(4), OeisStatus::Offline);
    }

    #[test]
    fn digest_is_of_comma_joined_terms() {
        assert_eq!(query_string(&ints(&[1, 4, 28])), "1,4,28");
        assert_eq!(digest(&ints(&[1, 4, 28])).len(), 64);
    }
}
