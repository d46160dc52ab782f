use std::collections::BTreeMap;

use eat_core::lang::LanguageCode;
use serde::Deserialize;

use crate::client::WikiClient;
use crate::error::EaclError;
use crate::urls::{langlinks_url, summary_url};

// formatversion=2 shapes; fields we do not read are left out.
#[derive(Deserialize)]
struct LanglinksResponse {
    #[serde(rename = "continue")]
    continuation: Option<ContinueBlock>,
    query: Option<QueryBlock>,
}

#[derive(Deserialize)]
struct ContinueBlock {
    llcontinue: Option<String>,
}

#[derive(Deserialize)]
struct QueryBlock {
    #[serde(default)]
    pages: Vec<PageBlock>,
}

#[derive(Deserialize)]
struct PageBlock {
    #[serde(default)]
    missing: bool,
    #[serde(default)]
    langlinks: Vec<LinkBlock>,
}

#[derive(Deserialize)]
struct LinkBlock {
    lang: String,
    title: String,
}

#[derive(Deserialize)]
struct SummaryResponse {
    extract: Option<String>,
}

/// Hard cap on continuation pages per title; a well-formed response set
/// never needs more, so hitting it means the server is looping us.
const MAX_PAGES: usize = 50;

/// All interlanguage links of one English title, as `language → title`.
/// Follows `llcontinue` pagination. A missing page gives an empty map.
/// Link languages that are not plain two-letter codes (wiki variants like
/// `zh-yue`) fall outside [`LanguageCode`] and are skipped.
pub fn fetch_langlinks(
    client: &WikiClient,
    title: &str,
) -> Result<BTreeMap<LanguageCode, String>, EaclError> {
    let mut links = BTreeMap::new();
    let mut token: Option<String> = None;
    for _ in 0..MAX_PAGES {
        let url = langlinks_url(title, token.as_deref());
        let (status, body) = client.get(&url)?;
        if status != 200 {
            return Err(EaclError::Http { url, status, attempts: 1 });
        }
        let response: LanglinksResponse =
            serde_json::from_str(&body).map_err(|e| EaclError::Malformed {
                url: url.clone(),
                message: e.to_string(),
            })?;
        if let Some(query) = response.query {
            for page in query.pages {
                if page.missing {
                    continue;
                }
                for link in page.langlinks {
                    if let Ok(code) = LanguageCode::new(&link.lang) {
                        links.insert(code, link.title);
                    }
                }
            }
        }
        token = response.continuation.and_then(|c| c.llcontinue);
        if token.is_none() {
            return Ok(links);
        }
    }
    Err(EaclError::Malformed {
        url: langlinks_url(title, token.as_deref()),
        message: format!("more than {MAX_PAGES} continuation pages"),
    })
}

/// Plain-text summary of a title on one language's wiki. A missing page
/// (404) is an empty summary, not an error.
pub fn fetch_summary(
    client: &WikiClient,
    lang: LanguageCode,
    title: &str,
) -> Result<String, EaclError> {
    let url = summary_url(lang, title);
    let (status, body) = client.get(&url)?;
    match status {
        200 => {
            let response: SummaryResponse =
                serde_json::from_str(&body).map_err(|e| EaclError::Malformed {
                    url: url.clone(),
                    message: e.to_string(),
                })?;
            Ok(response.extract.unwrap_or_default())
        }
        404 => Ok(String::new()),
        _ => Err(EaclError::Http { url, status, attempts: 1 }),
    }
}
