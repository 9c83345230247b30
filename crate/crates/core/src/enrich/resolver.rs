//! Metadata lookups against a CrossRef-style `works` endpoint, with an
//! on-disk cache keyed by request digest and a shared rate limiter.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// What to look up: a DOI, or a publisher-specific identifier queried
/// through the `alternative-id` filter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ResolverKey {
    Doi(String),
    AlternativeId(String),
}

impl ResolverKey {
    fn cache_key(&self) -> String {
        match self {
            ResolverKey::Doi(d) => format!("doi:{d}"),
            ResolverKey::AlternativeId(id) => format!("alternative-id:{id}"),
        }
    }

    fn url(&self, base: &str) -> String {
        let base = base.trim_end_matches('/');
        match self {
            ResolverKey::Doi(d) => format!("{base}/works/{d}"),
            ResolverKey::AlternativeId(id) => format!("{base}/works?filter=alternative-id:{id}"),
        }
    }

    /// Hex SHA-256 of the cache key; also the cache file stem.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.cache_key().as_bytes()))
    }
}

/// Metadata fields the toolkit uses from a resolver response.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedMetadata {
    pub doi: Option<String>,
    pub title: Option<String>,
    #[serde(rename = "type")]
    pub doc_type: Option<String>,
    pub language: Option<String>,
    pub container: Option<String>,
}

fn first_text(v: Option<&Value>) -> Option<String> {
    match v? {
        Value::String(s) if !s.trim().is_empty() => Some(s.trim().to_string()),
        Value::Array(items) => items.iter().find_map(|i| first_text(Some(i))),
        _ => None,
    }
}

impl ResolvedMetadata {
    /// Reads either a bare work object or a CrossRef envelope
    /// (`{"message": {...}}`, or `{"message": {"items": [...]}}` for
    /// filter queries). `None` when a filter query has no items.
    pub fn from_response(body: &Value) -> Option<ResolvedMetadata> {
        let mut obj = body.get("message").unwrap_or(body);
        if let Some(items) = obj.get("items") {
            obj = items.as_array()?.first()?;
        }
        Some(ResolvedMetadata {
            doi: first_text(obj.get("DOI").or_else(|| obj.get("doi"))),
            title: first_text(obj.get("title")),
            doc_type: first_text(obj.get("type")),
            language: first_text(obj.get("language")),
            container: first_text(obj.get("container-title").or_else(|| obj.get("container"))),
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    key: String,
    fetched_at: u64,
    response: Option<ResolvedMetadata>,
}

/// One file per request digest under a directory.
#[derive(Debug, Clone)]
pub struct ResolverCache {
    dir: PathBuf,
}

impl ResolverCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ResolverCache { dir: dir.into() }
    }

    fn path(&self, key: &ResolverKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.digest()))
    }

    /// `Some(response)` on a hit, where the response itself is `None` for
    /// a cached not-found.
    pub fn get(&self, key: &ResolverKey) -> Result<Option<Option<ResolvedMetadata>>> {
        let path = self.path(key);
        match fs::read(&path) {
            Ok(bytes) => {
                let entry: CacheEntry = serde_json::from_slice(&bytes)?;
                Ok(Some(entry.response))
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::io(path, e)),
        }
    }

    pub fn put(&self, key: &ResolverKey, response: Option<&ResolvedMetadata>) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let entry = CacheEntry {
            key: key.cache_key(),
            fetched_at: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            response: response.cloned(),
        };
        let path = self.path(key);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&entry)?).map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))
    }

    pub fn len(&self) -> usize {
        fs::read_dir(&self.dir)
            .map(|rd| {
                rd.filter_map(|e| e.ok())
                    .filter(|e| e.path().extension().is_some_and(|x| x == "json"))
                    .count()
            })
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Status and body of an HTTP GET.
#[derive(Debug, Clone)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
}

/// Something that can perform a GET. `Err` means the request never got a
/// response (connection refused, timeout).
pub trait Transport: Send + Sync {
    fn get(&self, url: &str) -> std::result::Result<HttpResponse, String>;
}

/// Blocking HTTP transport.
pub struct UreqTransport {
    agent: ureq::Agent,
}

impl UreqTransport {
    pub fn new(timeout: Duration) -> Self {
        let config = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(timeout))
            .user_agent(concat!("citelink/", env!("CARGO_PKG_VERSION")))
            .build();
        UreqTransport {
            agent: ureq::Agent::new_with_config(config),
        }
    }
}

impl Transport for UreqTransport {
    fn get(&self, url: &str) -> std::result::Result<HttpResponse, String> {
        let mut resp = self.agent.get(url).call().map_err(|e| e.to_string())?;
        let status = resp.status().as_u16();
        let body = resp.body_mut().read_to_string().map_err(|e| e.to_string())?;
        Ok(HttpResponse { status, body })
    }
}

/// Spaces requests at least `interval` apart across all callers.
#[derive(Debug)]
pub struct RateLimiter {
    interval: Duration,
    next: Mutex<Option<Instant>>,
}

impl RateLimiter {
    /// `per_second <= 0` disables limiting.
    pub fn new(per_second: f64) -> Self {
        let interval = if per_second > 0.0 {
            Duration::from_secs_f64(1.0 / per_second)
        } else {
            Duration::ZERO
        };
        RateLimiter {
            interval,
            next: Mutex::new(None),
        }
    }

    pub fn wait(&self) {
        if self.interval.is_zero() {
            return;
        }
        let mut next = self.next.lock().unwrap();
        let now = Instant::now();
        if let Some(t) = *next {
            if t > now {
                thread::sleep(t - now);
            }
        }
        *next = Some(Instant::now() + self.interval);
    }
}

#[derive(Debug, Clone)]
pub struct ResolverConfig {
    pub base_url: Option<String>,
    pub offline: bool,
    pub cache_dir: PathBuf,
    pub max_retries: u32,
    pub backoff: Duration,
    pub rate_limit_per_sec: f64,
}

impl Default for ResolverConfig {
    fn default() -> Self {
        ResolverConfig {
            base_url: None,
            offline: true,
            cache_dir: PathBuf::from(".citelink-cache"),
            max_retries: 3,
            backoff: Duration::from_millis(500),
            rate_limit_per_sec: 1.0,
        }
    }
}

/// Cached, rate-limited metadata resolver. Safe to share between threads;
/// concurrent lookups of one key fetch it once.
pub struct Resolver {
    config: ResolverConfig,
    cache: ResolverCache,
    transport: Box<dyn Transport>,
    limiter: RateLimiter,
    key_locks: Mutex<HashMap<String, Arc<Mutex<()>>>>,
}

impl Resolver {
    pub fn new(config: ResolverConfig, transport: Box<dyn Transport>) -> Self {
        Resolver {
            cache: ResolverCache::new(config.cache_dir.clone()),
            limiter: RateLimiter::new(config.rate_limit_per_sec),
            config,
            transport,
            key_locks: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_http(config: ResolverConfig) -> Self {
        Resolver::new(config, Box::new(UreqTransport::new(Duration::from_secs(30))))
    }

    pub fn cache(&self) -> &ResolverCache {
        &self.cache
    }

    /// Looks up metadata for `key`. Not-found is `Ok(None)`; exhausting the
    /// retries on network or server errors is [`Error::Transient`].
    pub fn resolve(&self, key: &ResolverKey) -> Result<Option<ResolvedMetadata>> {
        let lock = {
            let mut locks = self.key_locks.lock().unwrap();
            locks.entry(key.digest()).or_default().clone()
        };
        let _guard = lock.lock().unwrap();

        if let Some(hit) = self.cache.get(key)? {
            return Ok(hit);
        }
        let base = match (&self.config.base_url, self.config.offline) {
            (Some(base), false) => base,
            _ => return Ok(None),
        };
        let url = key.url(base);
        let attempts = self.config.max_retries + 1;
        let mut last_error = String::new();
        for attempt in 0..attempts {
            if attempt > 0 {
                thread::sleep(self.config.backoff * 2u32.saturating_pow(attempt - 1));
            }
            self.limiter.wait();
            match self.transport.get(&url) {
                Ok(resp) if resp.status == 200 => {
                    let body: Value = serde_json::from_str(&resp.body)
                        .map_err(|e| Error::validation(format!("resolver response for {url}: {e}")))?;
                    let meta = ResolvedMetadata::from_response(&body);
                    self.cache.put(key, meta.as_ref())?;
                    return Ok(meta);
                }
                Ok(resp) if resp.status == 404 => {
                    self.cache.put(key, None)?;
                    return Ok(None);
                }
                Ok(resp) if resp.status == 429 || resp.status >= 500 => {
                    last_error = format!("HTTP {}", resp.status);
                }
                Ok(resp) => {
                    return Err(Error::validation(format!("resolver returned HTTP {} for {url}", resp.status)));
                }
                Err(e) => last_error = e,
            }
        }
        Err(Error::Transient {
            key: key.cache_key(),
            attempts,
            message: last_error,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    struct Scripted {
        responses: Mutex<Vec<std::result::Result<HttpResponse, String>>>,
        calls: AtomicUsize,
    }

    impl Scripted {
        fn new(mut responses: Vec<std::result::Result<HttpResponse, String>>) -> Arc<Self> {
            responses.reverse();
            Arc::new(Scripted {
                responses: Mutex::new(responses),
                calls: AtomicUsize::new(0),
            })
        }
    }

    impl Transport for Arc<Scripted> {
        fn get(&self, _url: &str) -> std::result::Result<HttpResponse, String> {
            self.calls.fetch_add(1, Ordering::SeqCst);
            self.responses.lock().unwrap().pop().unwrap_or_else(|| Err("exhausted".into()))
        }
    }

    fn ok(body: &str) -> std::result::Result<HttpResponse, String> {
        Ok(HttpResponse {
            status: 200,
            body: body.into(),
        })
    }

    fn status(code: u16) -> std::result::Result<HttpResponse, String> {
        Ok(HttpResponse {
            status: code,
            body: String::new(),
        })
    }

    fn config(dir: &std::path::Path, offline: bool) -> ResolverConfig {
        ResolverConfig {
            base_url: Some("http://resolver.invalid".into()),
            offline,
            cache_dir: dir.to_path_buf(),
            max_retries: 2,
            backoff: Duration::ZERO,
            rate_limit_per_sec: 0.0,
        }
    }

    const WORK: &str = r#"{"message":{"DOI":"10.1002/asi.23056","title":["A title"],"type":"journal-article","language":"en","container-title":["JASIST"]}}"#;

    #[test]
    fn transient_then_success_caches_once() {
        let dir = tempfile::tempdir().unwrap();
        let t = Scripted::new(vec![status(503), ok(WORK)]);
        let r = Resolver::new(config(dir.path(), false), Box::new(t.clone()));
        let key = ResolverKey::Doi("10.1002/asi.23056".into());
        let meta = r.resolve(&key).unwrap().unwrap();
        assert_eq!(meta.container.as_deref(), Some("JASIST"));
        assert_eq!(meta.doc_type.as_deref(), Some("journal-article"));
        assert_eq!(r.cache().len(), 1);
        assert_eq!(r.resolve(&key).unwrap(), Some(meta));
        assert_eq!(t.calls.load(Ordering::SeqCst), 2);
    }

    #[test]
    fn offline_uses_cache_only() {
        let dir = tempfile::tempdir().unwrap();
        let key = ResolverKey::Doi("10.1000/known".into());
        let meta = ResolvedMetadata {
            title: Some("Cached".into()),
            ..Default::default()
        };
        ResolverCache::new(dir.path()).put(&key, Some(&meta)).unwrap();
        let t = Scripted::new(vec![]);
        let r = Resolver::new(config(dir.path(), true), Box::new(t.clone()));
        assert_eq!(r.resolve(&key).unwrap(), Some(meta));
        assert_eq!(r.resolve(&ResolverKey::Doi("10.1000/unknown".into())).unwrap(), None);
        assert_eq!(t.calls.load(Ordering::SeqCst), 0);
    }

    #[test]
    fn not_found_is_none() {
        let dir = tempfile::tempdir().unwrap();
        let t = Scripted::new(vec![status(404)]);
        let r = Resolver::new(config(dir.path(), false), Box::new(t.clone()));
        assert_eq!(r.resolve(&ResolverKey::Doi("10.1000/x".into())).unwrap(), None);
    }

    #[test]
    fn retries_exhausted_is_transient() {
        let dir = tempfile::tempdir().unwrap();
        let t = Scripted::new(vec![Err("refused".into()), status(500), status(502)]);
        let r = Resolver::new(config(dir.path(), false), Box::new(t.clone()));
        let err = r.resolve(&ResolverKey::Doi("10.1000/x".into())).unwrap_err();
        assert!(matches!(err, Error::Transient { attempts: 3, .. }));
        assert_eq!(t.calls.load(Ordering::SeqCst), 3);
        assert!(r.cache().is_empty());
    }

    #[test]
    fn alternative_id_items() {
        let body: Value = serde_json::from_str(r#"{"message":{"items":[{"DOI":"10.1016/j.joi.2018.09.002","type":"journal-article"}]}}"#).unwrap();
        let meta = ResolvedMetadata::from_response(&body).unwrap();
        assert_eq!(meta.doi.as_deref(), Some("10.1016/j.joi.2018.09.002"));
        let empty: Value = serde_json::from_str(r#"{"message":{"items":[]}}"#).unwrap();
        assert_eq!(ResolvedMetadata::from_response(&empty), None);
        assert_eq!(
            ResolverKey::AlternativeId("S1751157718".into()).url("https://api.crossref.org/"),
            "https://api.crossref.org/works?filter=alternative-id:S1751157718"
        );
    }
}
