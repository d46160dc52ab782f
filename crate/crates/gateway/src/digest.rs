use sha2::{Digest, Sha256};

use crate::message::ChatTranscript;

/// Version prefix of the digest encoding; bump if the canonical byte
/// layout ever changes, so old fixture stores fail loudly instead of
/// silently missing.
const ENCODING_VERSION: &[u8] = b"chat-fixture-v1";

/// Content digest of a request: SHA-256 over a canonical byte encoding of
/// the backend id, the decoding parameters, and every turn.
///
/// The encoding is written out by hand (length-prefixed fields, float bits
/// in hex) rather than through a serializer, so the digest cannot drift
/// with serialization-library formatting changes.
pub fn transcript_digest(transcript: &ChatTranscript) -> String {
    let mut hasher = Sha256::new();
    hasher.update(ENCODING_VERSION);
    hasher.update([0]);
    push_str(&mut hasher, transcript.backend_id());
    let params = transcript.params();
    push_str(&mut hasher, &format!("{:016x}", params.temperature.to_bits()));
    push_str(&mut hasher, &params.max_tokens.to_string());
    push_str(&mut hasher, &transcript.len().to_string());
    for turn in transcript.turns() {
        push_str(&mut hasher, turn.role.as_str());
        push_str(&mut hasher, &turn.text);
    }
    hex::encode(hasher.finalize())
}

fn push_str(hasher: &mut Sha256, text: &str) {
    hasher.update(text.len().to_string().as_bytes());
    hasher.update([0]);
    hasher.update(text.as_bytes());
    hasher.update([0]);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::message::RequestParams;

    fn transcript(texts: &[&str]) -> ChatTranscript {
        let mut t = ChatTranscript::new("model-x", RequestParams::default());
        for (i, text) in texts.iter().enumerate() {
            if i % 2 == 0 {
                t.push_user(*text).unwrap();
            } else {
                t.push_assistant(*text).unwrap();
            }
        }
        t
    }

    #[test]
    fn digest_is_stable_and_hex() {
        let a = transcript_digest(&transcript(&["hello"]));
        let b = transcript_digest(&transcript(&["hello"]));
        assert_eq!(a, b);
        assert_eq!(a.len(), 64);
        assert!(a.chars().all(|c| c.is_ascii_hexdigit()));
    }

    #[test]
    fn any_field_change_changes_the_digest() {
        let base = transcript_digest(&transcript(&["q", "a"]));
        assert_ne!(base, transcript_digest(&transcript(&["q", "b"])));
        assert_ne!(base, transcript_digest(&transcript(&["q"])));

        let mut other_backend = ChatTranscript::new("model-y", RequestParams::default());
        other_backend.push_user("q").unwrap();
        other_backend.push_assistant("a").unwrap();
        assert_ne!(base, transcript_digest(&other_backend));

        let mut other_params = ChatTranscript::new(
            "model-x",
            RequestParams { temperature: 0.5, ..Default::default() },
        );
        other_params.push_user("q").unwrap();
        other_params.push_assistant("a").unwrap();
        assert_ne!(base, transcript_digest(&other_params));

        let mut other_budget = ChatTranscript::new(
            "model-x",
            RequestParams { max_tokens: 256, ..Default::default() },
        );
        other_budget.push_user("q").unwrap();
        other_budget.push_assistant("a").unwrap();
        assert_ne!(base, transcript_digest(&other_budget));
    }

    #[test]
    fn turn_boundaries_are_unambiguous() {
        // ["ab"] and ["a", "b"]-style collisions must not hash equal.
        let one = transcript_digest(&transcript(&["ab c"]));
        let two = transcript_digest(&transcript(&["ab", "c"]));
        assert_ne!(one, two);
    }
}
