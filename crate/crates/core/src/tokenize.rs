use crate::name::is_name_char;

/// Connective words ignored when spotting mentions. They never start a
/// mention and are not reported as dropped tokens.
pub const STOP_WORDS: &[&str] = &[
    "a", "an", "and", "are", "by", "can", "do", "does", "for", "give", "how", "i", "in", "is",
    "me", "need", "needed", "needs", "of", "on", "require", "required", "requires", "show", "tell",
    "the", "to", "what", "when", "which", "with",
];

/// Stop words that turn the following mention into the thing asked for.
pub const INTERROGATIVES: &[&str] = &["what", "which"];

pub fn is_stop_word(token: &str) -> bool {
    STOP_WORDS.binary_search(&token).is_ok()
}

/// Lowercased words of `text`, split on whitespace and punctuation.
///
/// `_` and `-` inside a word are kept, so names such as `market_location`
/// stay whole; leading and trailing dashes are stripped.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !is_name_char(c))
        .map(|w| w.trim_matches('-'))
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}
