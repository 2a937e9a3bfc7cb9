//! Word and character-level tokenizers.
//!
//! Both tokenizers lowercase their input and are total: any UTF-8 string
//! tokenizes without error, the empty string to an empty list.

use std::collections::HashSet;
use std::sync::OnceLock;

/// Emoticons recognized as single word tokens, shipped as a versioned data
/// file. Entries are matched against lowercased chunks.
static EMOTICONS_RAW: &str = include_str!("../../data/emoticons.txt");

fn emoticons() -> &'static HashSet<&'static str> {
    static TABLE: OnceLock<HashSet<&'static str>> = OnceLock::new();
    TABLE.get_or_init(|| {
        EMOTICONS_RAW
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    })
}

/// The token every URL collapses to.
pub const LINK_TOKEN: &str = "<link>";

fn is_url(chunk: &str) -> bool {
    chunk.starts_with("http://") || chunk.starts_with("https://") || chunk.starts_with("www.")
}

/// Punctuation for the purpose of peeling: anything that is neither
/// alphanumeric nor whitespace.
fn is_punct(c: char) -> bool {
    !c.is_alphanumeric() && !c.is_whitespace()
}

/// Splits text into word tokens.
///
/// Rules, applied to each lowercased whitespace-separated chunk:
/// * URLs (`http://`, `https://`, `www.` prefixes) become [`LINK_TOKEN`];
/// * emoticons from the built-in table are kept whole;
/// * `@`-mentions are kept as single tokens (trailing punctuation still
///   splits off);
/// * any other leading or trailing punctuation is split into
///   single-character tokens.
pub fn tokenize_words(text: &str) -> Vec<String> {
    let lowered = text.to_lowercase();
    let mut tokens = Vec::new();
    for chunk in lowered.split_whitespace() {
        split_chunk(chunk, &mut tokens);
    }
    tokens
}

fn split_chunk(chunk: &str, out: &mut Vec<String>) {
    if is_url(chunk) {
        out.push(LINK_TOKEN.to_string());
        return;
    }

    let mut lead: Vec<char> = Vec::new();
    let mut trail: Vec<char> = Vec::new();
    let mut core = chunk;

    loop {
        if core.is_empty() || emoticons().contains(core) {
            break;
        }
        if core.starts_with('@') && core.chars().count() > 1 {
            // Mention: keep the leading '@', only peel from the right.
            let last = core.chars().next_back().unwrap();
            if is_punct(last) {
                trail.push(last);
                core = &core[..core.len() - last.len_utf8()];
                continue;
            }
            break;
        }
        let first = core.chars().next().unwrap();
        if is_punct(first) {
            lead.push(first);
            core = &core[first.len_utf8()..];
            continue;
        }
        let last = core.chars().next_back().unwrap();
        if is_punct(last) {
            trail.push(last);
            core = &core[..core.len() - last.len_utf8()];
            continue;
        }
        break;
    }

    out.extend(lead.into_iter().map(String::from));
    if !core.is_empty() {
        out.push(core.to_string());
    }
    out.extend(trail.into_iter().rev().map(String::from));
}

/// Sliding window of `n` consecutive characters over the lowercased text.
///
/// Spaces and punctuation are ordinary characters; there is no boundary
/// padding, so the output length is `max(0, chars - n + 1)`.
pub fn char_ngrams(text: &str, n: usize) -> Vec<String> {
    assert!(n >= 1, "n-gram size must be at least 1");
    let chars: Vec<char> = text.to_lowercase().chars().collect();
    if chars.len() < n {
        return Vec::new();
    }
    chars.windows(n).map(|w| w.iter().collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn url_collapses_to_link_token() {
        assert_eq!(
            tokenize_words("Vota! http://ex.am/p"),
            vec!["vota", "!", "<link>"]
        );
    }

    #[test]
    fn empty_text_yields_no_tokens() {
        assert_eq!(tokenize_words(""), Vec::<String>::new());
        assert_eq!(tokenize_words("   \t \n"), Vec::<String>::new());
    }

    #[test]
    fn emoticons_and_mentions_stay_whole() {
        assert_eq!(tokenize_words("ciao :) @mario"), vec!["ciao", ":)", "@mario"]);
    }

    #[test]
    fn mention_sheds_trailing_punctuation() {
        assert_eq!(tokenize_words("@mario, ciao"), vec!["@mario", ",", "ciao"]);
    }

    #[test]
    fn leading_and_trailing_punctuation_split() {
        assert_eq!(tokenize_words("(ciao!)"), vec!["(", "ciao", "!", ")"]);
        assert_eq!(tokenize_words("\u{ab}male\u{bb}"), vec!["\u{ab}", "male", "\u{bb}"]);
    }

    #[test]
    fn uppercase_emoticon_matches_lowercased_entry() {
        assert_eq!(tokenize_words("bene :D"), vec!["bene", ":d"]);
    }

    #[test]
    fn https_and_www_are_links_too() {
        assert_eq!(tokenize_words("https://a.b www.c.d"), vec!["<link>", "<link>"]);
    }

    #[test]
    fn bare_at_is_plain_punctuation() {
        assert_eq!(tokenize_words("a @ b"), vec!["a", "@", "b"]);
    }

    #[test]
    fn ngrams_window_equals_length() {
        assert_eq!(char_ngrams("monti", 5), vec!["monti"]);
    }

    #[test]
    fn ngrams_shorter_than_n() {
        assert_eq!(char_ngrams("ab", 5), Vec::<String>::new());
        assert_eq!(char_ngrams("", 5), Vec::<String>::new());
    }

    #[test]
    fn ngrams_include_spaces() {
        assert_eq!(char_ngrams("a b c d", 5), vec!["a b c", " b c ", "b c d"]);
    }

    #[test]
    fn ngrams_lowercase() {
        assert_eq!(char_ngrams("AbCdE", 5), vec!["abcde"]);
    }

    #[test]
    fn no_empty_tokens_ever() {
        for text in ["... :) !!", "a  b", "@", "@@x", ":-) :-(", "\u{2014}"] {
            for tok in tokenize_words(text) {
                assert!(!tok.is_empty(), "empty token from {text:?}");
            }
        }
    }
}
