use eat_core::lang::LanguageCode;
use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};

/// Percent-encode everything except RFC 3986 unreserved characters.
const COMPONENT: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'-')
    .remove(b'_')
    .remove(b'.')
    .remove(b'~');

/// Interlanguage-links query for one English title, optionally carrying a
/// continuation token from the previous page. Parameter order is fixed so
/// the same logical request always produces the same URL (and therefore
/// the same fixture digest).
pub fn langlinks_url(title: &str, llcontinue: Option<&str>) -> String {
    let mut url = format!(
        "https://en.wikipedia.org/w/api.php?action=query&format=json&formatversion=2&prop=langlinks&lllimit=500&titles={}",
        utf8_percent_encode(title, COMPONENT)
    );
    if let Some(token) = llcontinue {
        url.push_str("&llcontinue=");
        url.push_str(&utf8_percent_encode(token, COMPONENT).to_string());
    }
    url
}

/// REST summary endpoint for a title on one language's wiki. REST paths
/// use underscores where titles have spaces.
pub fn summary_url(lang: LanguageCode, title: &str) -> String {
    let underscored = title.replace(' ', "_");
    format!(
        "https://{lang}.wikipedia.org/api/rest_v1/page/summary/{}",
        utf8_percent_encode(&underscored, COMPONENT)
    )
}
