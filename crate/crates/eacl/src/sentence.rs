use eat_core::lang::LanguageCode;

/// Sentence terminators across the scripts the harvester meets: Latin,
/// CJK full-width, Arabic question mark, Devanagari danda.
const TERMINATORS: [char; 8] = ['.', '!', '?', '。', '！', '？', '؟', '।'];

const OPENERS: [char; 10] = ['(', '[', '{', '（', '［', '｛', '「', '『', '〈', '《'];
const CLOSERS: [char; 10] = [')', ']', '}', '）', '］', '｝', '」', '』', '〉', '》'];

/// The first sentence of a summary: everything up to and including the
/// first terminator that is not inside brackets. Text without any
/// terminator is returned whole. The rule is the same for every supported
/// language; the code is accepted so callers state which wiki the text
/// came from.
pub fn first_sentence(text: &str, _lang: LanguageCode) -> &str {
    let trimmed = text.trim();
    let mut depth: usize = 0;
    for (idx, ch) in trimmed.char_indices() {
        if OPENERS.contains(&ch) {
            depth += 1;
        } else if CLOSERS.contains(&ch) {
            depth = depth.saturating_sub(1);
        } else if depth == 0 && TERMINATORS.contains(&ch) {
            return trimmed[..idx + ch.len_utf8()].trim();
        }
    }
    trimmed
}
