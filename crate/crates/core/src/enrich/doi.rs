use std::sync::OnceLock;

use regex::Regex;

use crate::model::normalize_doi;

/// Finds a DOI embedded in a landing-page URL, as publishers such as
/// Springer, Wiley and SAGE do. The suffix ends at whitespace, `?` or `#`.
pub fn extract_doi_from_url(url: &str) -> Option<String> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| Regex::new(r"/(10\.[0-9]{1,9}/[^\s?#]+)").unwrap());
    re.captures_iter(url).find_map(|c| normalize_doi(&c[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(
            extract_doi_from_url("https://link.springer.com/article/10.1007/s11192-013-1089-2").as_deref(),
            Some("10.1007/s11192-013-1089-2")
        );
        assert_eq!(extract_doi_from_url("https://example.com/page"), None);
        assert_eq!(extract_doi_from_url("https://x.org/10.5555/abc?ref=1").as_deref(), Some("10.5555/abc"));
        assert_eq!(
            extract_doi_from_url("https://onlinelibrary.wiley.com/doi/abs/10.1002/ASI.23056#top").as_deref(),
            Some("10.1002/asi.23056")
        );
        assert_eq!(extract_doi_from_url("10.1002/asi.23056"), None);
    }
}
