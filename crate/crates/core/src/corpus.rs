//! Text ingestion: sentences, tokens, stopwords, frequencies and trends.
//!
//! All offsets in this module are *character* offsets into the document
//! text (not byte offsets), so they agree with what external taggers emit.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::ops::Range;
use std::path::Path;

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

pub const DEFAULT_SEGMENT_COUNT: usize = 10;
pub const DEFAULT_MIN_TERM_LENGTH: usize = 2;

/// Abbreviations whose period never ends a sentence (compared case-insensitively).
pub const ABBREVIATIONS: &[&str] = &["sr", "sra", "dr", "dra", "prof", "eng", "exmo", "art", "pág"];

const TERMINATORS: &[char] = &['.', '!', '?', '…'];
const CLOSERS: &[char] = &['"', '\'', '”', '’', '»', ')', ']'];
const OPENERS: &[char] = &['"', '\'', '“', '‘', '«', '(', '[', '—', '–', '-'];
const JOINERS: &[char] = &['-', '‐', '\'', '’'];

/// Half-open character range `start..end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Word,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub normalized: String,
    pub span: Span,
    pub sentence_index: usize,
    pub segment_index: usize,
    pub is_stopword: bool,
    pub kind: TokenKind,
}

impl Token {
    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }
}

/// Lowercased NFC form used for every term comparison.
pub fn normalize(s: &str) -> String {
    let composed: String = s.nfc().collect();
    composed.to_lowercase().nfc().collect()
}

/// An ingested text with its sentence, token and segment structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    text: String,
    // Byte offset of every character, plus the total byte length.
    char_bytes: Vec<usize>,
    sentences: Vec<Span>,
    tokens: Vec<Token>,
    segments: Vec<Range<usize>>,
}

impl Document {
    pub fn text(&self) -> &str {
        &self.text
    }

    /// Length of the text in characters.
    pub fn char_len(&self) -> usize {
        self.char_bytes.len() - 1
    }

    pub fn sentences(&self) -> &[Span] {
        &self.sentences
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn segments(&self) -> &[Range<usize>] {
        &self.segments
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    /// Text covered by a character span. Panics if the span is out of range.
    pub fn slice(&self, span: Span) -> &str {
        &self.text[self.char_bytes[span.start]..self.char_bytes[span.end]]
    }

    /// Text covered by a character span, or `None` when it is out of range.
    pub fn get_slice(&self, span: Span) -> Option<&str> {
        if span.start > span.end || span.end > self.char_len() {
            return None;
        }
        Some(self.slice(span))
    }

    /// Sentence whose span fully contains `span`.
    pub fn sentence_containing(&self, span: Span) -> Option<usize> {
        let idx = self.sentences.partition_point(|s| s.end <= span.start);
        self.sentences
            .get(idx)
            .filter(|s| s.contains(&span))
            .map(|_| idx)
    }

    /// Index of the first token that ends after `offset`, i.e. the token
    /// containing `offset` or the next one after it.
    pub fn token_at(&self, offset: usize) -> Option<usize> {
        let idx = self.tokens.partition_point(|t| t.span.end <= offset);
        (idx < self.tokens.len()).then_some(idx)
    }

    /// Segment of the token at (or right after) a character offset.
    pub fn segment_at(&self, offset: usize) -> Option<usize> {
        self.token_at(offset).map(|i| self.tokens[i].segment_index)
    }

    /// Re-marks stopwords in place.
    pub fn mark_stopwords(&mut self, stopwords: &StopwordSet) {
        let tokens = std::mem::take(&mut self.tokens);
        self.tokens = remove_stopwords(tokens, stopwords);
    }

    pub fn with_stopwords(mut self, stopwords: &StopwordSet) -> Self {
        self.mark_stopwords(stopwords);
        self
    }
}

/// Decodes, validates and structures a text split into `segment_count`
/// equal token segments (the remainder goes to the earliest segments).
///
/// Stopwords are not marked; see [`Document::with_stopwords`].
pub fn load_document(bytes: &[u8], segment_count: usize) -> Result<Document> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::InvalidEncoding {
        offset: e.valid_up_to(),
    })?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);

    let mut chars = text.chars().enumerate().peekable();
    while let Some((i, c)) = chars.next() {
        let allowed = c == '\n'
            || c == '\t'
            || (c == '\r' && chars.peek().map(|&(_, n)| n) == Some('\n'));
        if c.is_control() && !allowed {
            return Err(Error::ControlCharacter {
                code: c as u32,
                offset: i,
            });
        }
    }
    if segment_count == 0 {
        return Err(Error::ZeroSegments);
    }

    let sentences = split_sentences(text);
    let mut tokens = tokenize(text, &sentences);
    if tokens.is_empty() {
        return Err(Error::EmptyDocument);
    }
    if segment_count > tokens.len() {
        return Err(Error::SegmentCountTooLarge {
            requested: segment_count,
            tokens: tokens.len(),
        });
    }
    let segments = partition(tokens.len(), segment_count);
    for (s, range) in segments.iter().enumerate() {
        for t in &mut tokens[range.clone()] {
            t.segment_index = s;
        }
    }

    let mut char_bytes: Vec<usize> = text.char_indices().map(|(b, _)| b).collect();
    char_bytes.push(text.len());

    Ok(Document {
        text: text.to_owned(),
        char_bytes,
        sentences,
        tokens,
        segments,
    })
}

fn partition(n: usize, parts: usize) -> Vec<Range<usize>> {
    let base = n / parts;
    let rem = n % parts;
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for s in 0..parts {
        let len = base + usize::from(s < rem);
        out.push(start..start + len);
        start += len;
    }
    out
}

/// Rule-based sentence boundaries.
///
/// A sentence ends after a run of `. ! ? …` (plus closing quotes or
/// brackets) when the next non-space character is an uppercase letter,
/// possibly behind an opening quote or dialogue dash, or when only
/// whitespace follows. A blank line also ends a sentence, so headings do
/// not merge into the following paragraph. Spans exclude surrounding
/// whitespace.
pub fn split_sentences(text: &str) -> Vec<Span> {
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    let mut out = Vec::new();
    let mut open: Option<usize> = None;
    let mut last_end = 0;
    let mut i = 0;

    while i < n {
        let c = chars[i];
        if c.is_whitespace() {
            if c == '\n' && open.is_some() {
                let mut j = i + 1;
                let mut newlines = 1;
                while j < n && chars[j].is_whitespace() {
                    newlines += usize::from(chars[j] == '\n');
                    j += 1;
                }
                if newlines >= 2 {
                    out.push(Span::new(open.take().unwrap(), last_end));
                    i = j;
                    continue;
                }
            }
            i += 1;
            continue;
        }

        let start = *open.get_or_insert(i);
        if !TERMINATORS.contains(&c) {
            last_end = i + 1;
            i += 1;
            continue;
        }

        let mut j = i;
        while j < n && TERMINATORS.contains(&chars[j]) {
            j += 1;
        }
        if j == i + 1 && c == '.' && is_abbreviation(&chars[start..i]) {
            last_end = j;
            i = j;
            continue;
        }
        let mut k = j;
        while k < n && CLOSERS.contains(&chars[k]) {
            k += 1;
        }
        last_end = k;
        if ends_sentence(&chars, k) {
            out.push(Span::new(start, k));
            open = None;
        }
        i = k;
    }
    if let Some(start) = open {
        out.push(Span::new(start, last_end));
    }
    out
}

fn is_abbreviation(before: &[char]) -> bool {
    let word_start = before
        .iter()
        .rposition(|c| !c.is_alphabetic())
        .map_or(0, |p| p + 1);
    if word_start == before.len() {
        return false;
    }
    let word: String = before[word_start..].iter().collect::<String>().to_lowercase();
    ABBREVIATIONS.contains(&word.as_str())
}

fn ends_sentence(chars: &[char], k: usize) -> bool {
    let n = chars.len();
    if k == n {
        return true;
    }
    if !chars[k].is_whitespace() {
        return false;
    }
    let mut m = k;
    while m < n && chars[m].is_whitespace() {
        m += 1;
    }
    if m == n {
        return true;
    }
    while m < n && (OPENERS.contains(&chars[m]) || chars[m].is_whitespace()) {
        m += 1;
    }
    m < n && chars[m].is_uppercase()
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || is_combining_mark(c)
}

/// Splits text into word tokens (runs of letters and digits, with internal
/// hyphens or apostrophes) and single-character punctuation tokens.
///
/// `sentences` must cover every non-whitespace character, as the output of
/// [`split_sentences`] does. Segment indices are left at zero.
pub fn tokenize(text: &str, sentences: &[Span]) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    let mut tokens = Vec::new();
    let mut sentence = 0;
    let mut i = 0;

    while i < n {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let kind = if is_word_char(c) {
            i += 1;
            while i < n {
                if is_word_char(chars[i]) {
                    i += 1;
                } else if JOINERS.contains(&chars[i])
                    && i + 1 < n
                    && is_word_char(chars[i + 1])
                {
                    i += 2;
                } else {
                    break;
                }
            }
            TokenKind::Word
        } else {
            i += 1;
            TokenKind::Punct
        };
        while sentence + 1 < sentences.len() && sentences[sentence].end <= start {
            sentence += 1;
        }
        let surface: String = chars[start..i].iter().collect();
        tokens.push(Token {
            normalized: normalize(&surface),
            surface,
            span: Span::new(start, i),
            sentence_index: sentence,
            segment_index: 0,
            is_stopword: false,
            kind,
        });
    }
    tokens
}

/// A set of normalized stopwords.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopwordSet {
    words: HashSet<String>,
}

impl StopwordSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The bundled Portuguese list.
    pub fn portuguese() -> Self {
        Self::parse(include_str!("stopwords_pt.txt"))
    }

    /// One term per line; `#` starts a comment; blank lines are ignored.
    pub fn parse(contents: &str) -> Self {
        let words = contents
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(normalize)
            .collect();
        StopwordSet { words }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let contents = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&contents))
    }

    pub fn contains(&self, normalized: &str) -> bool {
        self.words.contains(normalized)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl<S: AsRef<str>> FromIterator<S> for StopwordSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        StopwordSet {
            words: iter.into_iter().map(|s| normalize(s.as_ref())).collect(),
        }
    }
}

/// Marks (never deletes) tokens whose normalized form is a stopword.
pub fn remove_stopwords(mut tokens: Vec<Token>, stopwords: &StopwordSet) -> Vec<Token> {
    for t in &mut tokens {
        t.is_stopword = t.is_word() && stopwords.contains(&t.normalized);
    }
    tokens
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    pub entries: BTreeMap<String, usize>,
    pub total_tokens: usize,
}

impl FrequencyTable {
    pub fn get(&self, term: &str) -> usize {
        self.entries.get(term).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Entries by descending count, ties by ascending term.
    pub fn ranked(&self) -> Vec<(&str, usize)> {
        let mut v: Vec<(&str, usize)> = self.entries.iter().map(|(t, &c)| (t.as_str(), c)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        v
    }

    pub fn top(&self, n: usize) -> Vec<(&str, usize)> {
        let mut v = self.ranked();
        v.truncate(n);
        v
    }
}

/// Counts normalized word tokens. Stopwords are skipped unless
/// `include_stopwords`; terms shorter than `min_length` characters are
/// always skipped.
pub fn term_frequencies(doc: &Document, include_stopwords: bool, min_length: usize) -> FrequencyTable {
    let mut entries = BTreeMap::new();
    for t in doc.tokens() {
        if !t.is_word() || (t.is_stopword && !include_stopwords) {
            continue;
        }
        if t.normalized.chars().count() < min_length {
            continue;
        }
        *entries.entry(t.normalized.clone()).or_insert(0) += 1;
    }
    FrequencyTable {
        entries,
        total_tokens: doc.tokens().len(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrendSeries {
    pub terms: Vec<String>,
    /// `counts[t][s]`: occurrences of `terms[t]` in segment `s`.
    pub counts: Vec<Vec<usize>>,
    pub segment_count: usize,
    /// Requested terms that never occur in the document.
    pub unknown_terms: Vec<String>,
}

impl TrendSeries {
    pub fn row_total(&self, t: usize) -> usize {
        self.counts[t].iter().sum()
    }

    pub fn max_count(&self) -> usize {
        self.counts.iter().flatten().copied().max().unwrap_or(0)
    }
}

/// Per-segment occurrence counts of the given terms (matched exactly on the
/// normalized form; requested terms are normalized first and deduplicated).
pub fn trend_series<S: AsRef<str>>(doc: &Document, terms: &[S]) -> Result<TrendSeries> {
    let mut seen = HashSet::new();
    let terms: Vec<String> = terms
        .iter()
        .map(|t| normalize(t.as_ref().trim()))
        .filter(|t| !t.is_empty() && seen.insert(t.clone()))
        .collect();
    if terms.is_empty() {
        return Err(Error::NoTerms);
    }
    let index: HashMap<&str, usize> = terms.iter().enumerate().map(|(i, t)| (t.as_str(), i)).collect();
    let segment_count = doc.segment_count();
    let mut counts = vec![vec![0usize; segment_count]; terms.len()];
    for t in doc.tokens().iter().filter(|t| t.is_word()) {
        if let Some(&row) = index.get(t.normalized.as_str()) {
            counts[row][t.segment_index] += 1;
        }
    }
    let unknown_terms = terms
        .iter()
        .zip(&counts)
        .filter(|(_, row)| row.iter().all(|&c| c == 0))
        .map(|(t, _)| t.clone())
        .collect();
    Ok(TrendSeries {
        terms,
        counts,
        segment_count,
        unknown_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(text: &str) -> Vec<String> {
        tokenize(text, &split_sentences(text))
            .into_iter()
            .map(|t| t.surface)
            .collect()
    }

    fn sentence_texts(text: &str) -> Vec<String> {
        let chars: Vec<char> = text.chars().collect();
        split_sentences(text)
            .iter()
            .map(|s| chars[s.start..s.end].iter().collect())
            .collect()
    }

    fn words(n: usize) -> String {
        (0..n).map(|i| format!("w{i}")).collect::<Vec<_>>().join(" ")
    }

    #[test]
    fn even_segments() {
        let doc = load_document(words(100).as_bytes(), 10).unwrap();
        assert_eq!(doc.segment_count(), 10);
        assert!(doc.segments().iter().all(|r| r.len() == 10));
    }

    #[test]
    fn remainder_goes_to_front() {
        let doc = load_document(words(103).as_bytes(), 10).unwrap();
        let sizes: Vec<usize> = doc.segments().iter().map(|r| r.len()).collect();
        assert_eq!(sizes, vec![11, 11, 11, 10, 10, 10, 10, 10, 10, 10]);
    }

    #[test]
    fn load_errors() {
        assert!(matches!(load_document(b"", 1), Err(Error::EmptyDocument)));
        assert!(matches!(load_document(b"  \n\t ", 1), Err(Error::EmptyDocument)));
        assert!(matches!(
            load_document(b"a b", 3),
            Err(Error::SegmentCountTooLarge { requested: 3, tokens: 2 })
        ));
        assert!(matches!(load_document(b"a b", 0), Err(Error::ZeroSegments)));
        assert!(matches!(
            load_document(&[b'a', 0xff, b'b'], 1),
            Err(Error::InvalidEncoding { offset: 1 })
        ));
        assert!(matches!(
            load_document("ab\u{7}c".as_bytes(), 1),
            Err(Error::ControlCharacter { code: 7, offset: 2 })
        ));
        assert!(load_document(b"linha um\r\nlinha dois\tfim", 1).is_ok());
        assert!(matches!(
            load_document(b"a\rb", 1),
            Err(Error::ControlCharacter { code: 13, .. })
        ));
    }

    #[test]
    fn abbreviations_do_not_split() {
        assert_eq!(
            sentence_texts("O Dr. Salgado saiu. Voltou depois."),
            vec!["O Dr. Salgado saiu.", "Voltou depois."]
        );
        assert_eq!(sentence_texts("Veja o art. Quinto do código."), vec!["Veja o art. Quinto do código."]);
    }

    #[test]
    fn terminators() {
        assert_eq!(sentence_texts("Sim! Não? Talvez…"), vec!["Sim!", "Não?", "Talvez…"]);
        assert_eq!(sentence_texts("Fim"), vec!["Fim"]);
        assert_eq!(sentence_texts(""), Vec::<String>::new());
        assert_eq!(sentence_texts("   "), Vec::<String>::new());
        // lowercase continuation is not a boundary
        assert_eq!(sentence_texts("Eram 3.5 milhões. e depois"), vec!["Eram 3.5 milhões. e depois"]);
        assert_eq!(sentence_texts("Quem?! Ele."), vec!["Quem?!", "Ele."]);
    }

    #[test]
    fn quotes_dialogue_and_blank_lines() {
        assert_eq!(
            sentence_texts("Disse: \"Vou.\" Depois saiu.\n— Quando? — Agora."),
            vec!["Disse: \"Vou.\"", "Depois saiu.", "— Quando?", "— Agora."]
        );
        assert_eq!(
            sentence_texts("CAPÍTULO I\n\nO banco caiu.\nDepois"),
            vec!["CAPÍTULO I", "O banco caiu.", "Depois"]
        );
    }

    #[test]
    fn tokenizer_rules() {
        assert_eq!(
            surfaces("O Governador esteve no BES."),
            vec!["O", "Governador", "esteve", "no", "BES", "."]
        );
        assert_eq!(surfaces("disse-lhe"), vec!["disse-lhe"]);
        assert_eq!(surfaces("d'água e d’água"), vec!["d'água", "e", "d’água"]);
        assert_eq!(surfaces("fim- 'ok' --"), vec!["fim", "-", "'", "ok", "'", "-", "-"]);
        assert!(surfaces("").is_empty());
        assert_eq!(surfaces("2015, 3,5%"), vec!["2015", ",", "3", ",", "5", "%"]);
    }

    #[test]
    fn combining_marks_stay_in_word() {
        let text = "pressa\u{0303}o";
        let toks = tokenize(text, &split_sentences(text));
        assert_eq!(toks.len(), 1);
        assert_eq!(toks[0].normalized, "pressão");
    }

    #[test]
    fn normalization_keeps_diacritics() {
        assert_eq!(normalize("PRESSÃO"), "pressão");
        assert_ne!(normalize("pressão"), normalize("pressao"));
    }

    #[test]
    fn stopword_marking() {
        let set: StopwordSet = ["o", "de"].into_iter().collect();
        let text = "o governador de portugal";
        let toks = remove_stopwords(tokenize(text, &split_sentences(text)), &set);
        let content: Vec<&str> = toks.iter().filter(|t| !t.is_stopword).map(|t| t.surface.as_str()).collect();
        assert_eq!(content, vec!["governador", "portugal"]);
        assert_eq!(toks.len(), 4);

        let toks = remove_stopwords(tokenize("O", &split_sentences("O")), &set);
        assert!(toks[0].is_stopword);
        assert!(remove_stopwords(Vec::new(), &set).is_empty());
    }

    #[test]
    fn stopword_file_format() {
        let set = StopwordSet::parse("# comment\nde\n  Da  \n\nque # trailing\n");
        assert_eq!(set.len(), 3);
        assert!(set.contains("da"));
        assert!(set.contains("que"));
        assert!(StopwordSet::portuguese().contains("não"));
    }

    #[test]
    fn frequencies() {
        let doc = load_document(b"bes bes salgado", 1).unwrap();
        let table = term_frequencies(&doc, false, 2);
        assert_eq!(table.entries.len(), 2);
        assert_eq!(table.get("bes"), 2);
        assert_eq!(table.get("salgado"), 1);

        let doc = load_document("O BES e o Banco de Portugal, e o BES.".as_bytes(), 1)
            .unwrap()
            .with_stopwords(&StopwordSet::portuguese());
        let table = term_frequencies(&doc, false, 1);
        let content = doc.tokens().iter().filter(|t| t.is_word() && !t.is_stopword).count();
        assert_eq!(table.entries.values().sum::<usize>(), content);
        assert_eq!(table.get("bes"), 2);
        assert_eq!(table.get("o"), 0);
        let with_stop = term_frequencies(&doc, true, 1);
        assert_eq!(with_stop.get("o"), 3);
        assert_eq!(with_stop.get("e"), 2);
        assert_eq!(term_frequencies(&doc, true, 2).get("e"), 0);
    }

    #[test]
    fn ranking_breaks_ties_by_term() {
        let doc = load_document(b"b a c a b d", 1).unwrap();
        let table = term_frequencies(&doc, true, 1);
        assert_eq!(table.ranked(), vec![("a", 2), ("b", 2), ("c", 1), ("d", 1)]);
        assert_eq!(table.top(1), vec![("a", 2)]);
    }

    #[test]
    fn trend_by_hand() {
        let doc = load_document(b"a b a c a b c c a", 3).unwrap();
        let series = trend_series(&doc, &["a", "C", "zz"]).unwrap();
        assert_eq!(series.counts[0], vec![2, 1, 1]);
        assert_eq!(series.counts[1], vec![0, 1, 2]);
        assert_eq!(series.unknown_terms, vec!["zz".to_string()]);
        assert!(matches!(trend_series::<&str>(&doc, &[]), Err(Error::NoTerms)));
    }

    #[test]
    fn lookups() {
        let doc = load_document("Olá, mundo. Adeus mundo.".as_bytes(), 2).unwrap();
        assert_eq!(doc.sentences().len(), 2);
        assert_eq!(doc.slice(Span::new(5, 10)), "mundo");
        assert_eq!(doc.sentence_containing(Span::new(5, 10)), Some(0));
        assert_eq!(doc.sentence_containing(Span::new(12, 17)), Some(1));
        assert_eq!(doc.sentence_containing(Span::new(5, 15)), None);
        assert_eq!(doc.token_at(5), Some(2));
        assert_eq!(doc.token_at(4), Some(2));
        assert_eq!(doc.token_at(100), None);
        assert!(doc.get_slice(Span::new(0, 999)).is_none());
    }
}
