use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TemplateError {
    #[error("placeholder {{{0}}} is not bound")]
    Unbound(String),
}

/// Substitutes `{name}` placeholders in `body` from `bindings`.
///
/// A placeholder is `{` + an identifier of lowercase letters, digits, or
/// underscores (starting with a letter or underscore) + `}`. Anything else
/// involving braces is kept literally. Referencing an unbound placeholder
/// is an error; unused bindings are fine. Substituted values are not
/// re-scanned, so values containing braces cannot inject placeholders.
pub fn render_template(body: &str, bindings: &BTreeMap<&str, &str>) -> Result<String, TemplateError> {
    let mut out = String::with_capacity(body.len());
    let bytes = body.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'{' {
            if let Some((name, after)) = parse_placeholder(&body[i..]) {
                match bindings.get(name) {
                    Some(value) => out.push_str(value),
                    None => return Err(TemplateError::Unbound(name.to_string())),
                }
                i += after;
                continue;
            }
        }
        // Advance one full character (the byte at i may start a multi-byte
        // code point).
        let ch = body[i..].chars().next().unwrap();
        out.push(ch);
        i += ch.len_utf8();
    }
    Ok(out)
}

/// If `rest` starts with a well-formed `{ident}`, returns the identifier
/// and the byte length of the whole placeholder.
fn parse_placeholder(rest: &str) -> Option<(&str, usize)> {
    let inner = rest.strip_prefix('{')?;
    let close = inner.find('}')?;
    let name = &inner[..close];
    let mut chars = name.chars();
    let first = chars.next()?;
    if !(first.is_ascii_lowercase() || first == '_') {
        return None;
    }
    if !chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_') {
        return None;
    }
    Some((name, close + 2))
}
