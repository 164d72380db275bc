/// A whitespace-delimited word with leading and trailing punctuation removed.
/// Offsets are byte offsets of the stripped core into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token<'a> {
    pub text: &'a str,
    pub start: usize,
    pub end: usize,
    /// Punctuation before the core opens a new phrase (quote, bracket).
    pub break_before: bool,
    /// Punctuation after the core closes the phrase (comma, full stop after
    /// a word, closing bracket...). A full stop after a single letter is an
    /// initial and does not count.
    pub break_after: bool,
    /// Punctuation stripped from the end of the word.
    pub trailing: &'a str,
}

impl Token<'_> {
    /// First character is an uppercase letter.
    pub fn is_capitalized(&self) -> bool {
        self.text.chars().next().is_some_and(char::is_uppercase)
    }
}

fn is_strippable(c: char) -> bool {
    !c.is_alphanumeric()
}

pub fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut word_start = None;
    for (i, c) in text.char_indices().chain(std::iter::once((text.len(), ' '))) {
        if c.is_whitespace() {
            if let Some(s) = word_start.take() {
                push_word(text, s, i, &mut out);
            }
        } else if word_start.is_none() {
            word_start = Some(i);
        }
    }
    out
}

fn push_word<'a>(text: &'a str, s: usize, e: usize, out: &mut Vec<Token<'a>>) {
    let word = &text[s..e];
    let core = word.trim_matches(is_strippable);
    if core.is_empty() {
        // A free-standing dash or quote still separates phrases.
        if let Some(prev) = out.last_mut() {
            prev.break_after = true;
        }
        return;
    }
    let lead = word.len() - word.trim_start_matches(is_strippable).len();
    let start = s + lead;
    let end = start + core.len();
    let trailing = &text[end..e];
    let initial = core.chars().count() == 1;
    let break_after = trailing
        .chars()
        .any(|c| c != '.' && c != '\'' && c != '’' || (c == '.' && !initial));
    out.push(Token {
        text: core,
        start,
        end,
        break_before: lead > 0 && word[..lead].chars().any(|c| c != '\'' && c != '’'),
        break_after,
        trailing,
    });
}

/// Token texts of a phrase, for building dictionaries with the same rules.
pub fn phrase_tokens(phrase: &str) -> Vec<&str> {
    tokenize(phrase).into_iter().map(|t| t.text).collect()
}
