use std::collections::BTreeMap;

use eat_core::lang::LanguageCode;
use eat_gateway::{ChatBackend, ChatTranscript, RequestParams, TemplateId, TemplateSet};

use crate::error::PipelineError;
use crate::extract::ExtractedEntity;

/// Inclusive bounds on the number of reasoning rounds before the filter
/// call.
pub const MIN_ROUNDS: u32 = 1;
pub const MAX_ROUNDS: u32 = 5;

/// Outcome of translating one sentence into English.
#[derive(Debug, Clone)]
pub struct ForwardResult {
    /// The filtered English translation, stripped of decoration.
    pub english_text: String,
    /// The complete conversation, including the filter exchange.
    pub rounds: ChatTranscript,
    pub source_sentence_id: usize,
}

/// Outcome of translating one extracted English entity back into the
/// source sentence's language.
#[derive(Debug, Clone)]
pub struct BackwardResult {
    /// The candidate mention in the sentence's language, stripped of
    /// decoration; grounding decides whether it names a real span.
    pub candidate_text: String,
    pub rounds: ChatTranscript,
    /// The English entity this candidate came from.
    pub source_entity: ExtractedEntity,
}

/// Translates `sentence_text` from language `lang` into English.
///
/// Round 1 asks for entity analysis, rounds 2..=`rounds` ask for the
/// translation with the growing conversation as context, and a final
/// filter call reduces everything to the bare translation — so the backend
/// is called exactly `rounds + 1` times. Every reply is kept in the
/// returned transcript.
pub fn forward_translate(
    sentence_text: &str,
    sentence_id: usize,
    lang: LanguageCode,
    backend: &dyn ChatBackend,
    templates: &TemplateSet,
    params: RequestParams,
    rounds: u32,
) -> Result<ForwardResult, PipelineError> {
    check_rounds(rounds)?;
    let target_name = lang.english_name().to_string();
    let mut bindings = BTreeMap::new();
    bindings.insert("sentence", sentence_text);
    bindings.insert("source_lang", "English");
    bindings.insert("target_lang", &target_name);

    let mut transcript = ChatTranscript::new(backend.id(), params);
    let mut prior = String::new();
    for round in 1..=rounds {
        let id = if round == 1 { TemplateId::ForwardAnalysis } else { TemplateId::ForwardTranslation };
        let mut round_bindings = bindings.clone();
        if round > 1 {
            round_bindings.insert("prior", &prior);
        }
        let prompt = templates.get(id).render(&round_bindings)?;
        prior = exchange(backend, &mut transcript, prompt, round)?;
    }
    let english_text = filter_call(backend, &mut transcript, templates, &bindings, rounds)?;
    Ok(ForwardResult { english_text, rounds: transcript, source_sentence_id: sentence_id })
}

/// Translates one extracted English entity back into the language of the
/// original sentence, using the sentence itself as context. Same round
/// structure as [`forward_translate`].
pub fn backward_translate(
    entity: &ExtractedEntity,
    sentence_text: &str,
    lang: LanguageCode,
    backend: &dyn ChatBackend,
    templates: &TemplateSet,
    params: RequestParams,
    rounds: u32,
) -> Result<BackwardResult, PipelineError> {
    check_rounds(rounds)?;
    let target_name = lang.english_name().to_string();
    let mut bindings = BTreeMap::new();
    bindings.insert("entity", entity.surface.as_str());
    bindings.insert("sentence", sentence_text);
    bindings.insert("source_lang", "English");
    bindings.insert("target_lang", &target_name);

    let mut transcript = ChatTranscript::new(backend.id(), params);
    let mut prior = String::new();
    for round in 1..=rounds {
        let id = if round == 1 {
            TemplateId::BackwardTranslation
        } else {
            TemplateId::BackwardVerification
        };
        let mut round_bindings = bindings.clone();
        if round > 1 {
            round_bindings.insert("prior", &prior);
        }
        let prompt = templates.get(id).render(&round_bindings)?;
        prior = exchange(backend, &mut transcript, prompt, round)?;
    }
    let candidate_text = filter_call(backend, &mut transcript, templates, &bindings, rounds)?;
    Ok(BackwardResult { candidate_text, rounds: transcript, source_entity: entity.clone() })
}

fn check_rounds(rounds: u32) -> Result<(), PipelineError> {
    if !(MIN_ROUNDS..=MAX_ROUNDS).contains(&rounds) {
        return Err(PipelineError::InvalidRounds(rounds));
    }
    Ok(())
}

/// One user → assistant exchange, with errors tagged by round number.
fn exchange(
    backend: &dyn ChatBackend,
    transcript: &mut ChatTranscript,
    prompt: String,
    round: u32,
) -> Result<String, PipelineError> {
    let tag = |source| PipelineError::Round { round, source };
    transcript.push_user(prompt).map_err(tag)?;
    let reply = backend.complete(transcript).map_err(tag)?;
    transcript.push_assistant(reply.clone()).map_err(tag)?;
    Ok(reply)
}

/// The final call: re-sends the whole conversation plus the filter prompt,
/// and strips decoration from the reply. Counts as round `rounds + 1` in
/// error messages.
fn filter_call(
    backend: &dyn ChatBackend,
    transcript: &mut ChatTranscript,
    templates: &TemplateSet,
    bindings: &BTreeMap<&str, &str>,
    rounds: u32,
) -> Result<String, PipelineError> {
    let prompt = templates.get(TemplateId::Filter).render(bindings)?;
    let reply = exchange(backend, transcript, prompt, rounds + 1)?;
    let cleaned = strip_reply(&reply);
    if cleaned.is_empty() {
        return Err(PipelineError::EmptyFilterOutput);
    }
    Ok(cleaned)
}

/// Removes the decoration chat models like to add around a bare answer:
/// surrounding whitespace and any symmetric run of quote punctuation
/// (ASCII quotes, curly quotes, guillemets, CJK corner brackets).
pub fn strip_reply(reply: &str) -> String {
    const QUOTE_PAIRS: [(char, char); 8] = [
        ('"', '"'),
        ('\'', '\''),
        ('\u{201c}', '\u{201d}'), // “ ”
        ('\u{2018}', '\u{2019}'), // ‘ ’
        ('\u{300c}', '\u{300d}'), // 「 」
        ('\u{300e}', '\u{300f}'), // 『 』
        ('\u{00ab}', '\u{00bb}'), // « »
        ('\u{FF02}', '\u{FF02}'), // fullwidth quote
    ];
    let mut text = reply.trim();
    loop {
        let mut stripped = false;
        for (open, close) in QUOTE_PAIRS {
            if text.len() >= open.len_utf8() + close.len_utf8()
                && text.starts_with(open)
                && text.ends_with(close)
            {
                text = text[open.len_utf8()..text.len() - close.len_utf8()].trim();
                stripped = true;
            }
        }
        if !stripped {
            break;
        }
    }
    text.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_whitespace_and_symmetric_quotes() {
        assert_eq!(strip_reply("  I love Beijing.  "), "I love Beijing.");
        assert_eq!(strip_reply("\"I love Beijing.\""), "I love Beijing.");
        assert_eq!(strip_reply("「北京」"), "北京");
        assert_eq!(strip_reply("“ nested \" quoted \" ”"), "nested \" quoted \"");
        assert_eq!(strip_reply("« 北京 »"), "北京");
    }

    #[test]
    fn keeps_asymmetric_and_inner_quotes() {
        assert_eq!(strip_reply("\"unbalanced"), "\"unbalanced");
        assert_eq!(strip_reply("he said \"hi\" twice"), "he said \"hi\" twice");
    }

    #[test]
    fn strips_to_empty_when_only_decoration() {
        assert_eq!(strip_reply("  \"\"  "), "");
        assert_eq!(strip_reply(""), "");
    }
}
