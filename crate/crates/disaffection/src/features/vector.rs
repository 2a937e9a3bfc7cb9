//! Sparse feature vectors, vocabularies, and counting schemes.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// How token occurrences turn into feature weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountingScheme {
    /// Raw term frequency.
    Tf,
    /// 1 if the term occurs at all.
    Boolean,
    /// Term frequency times inverse document frequency.
    TfIdf,
}

impl CountingScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            CountingScheme::Tf => "tf",
            CountingScheme::Boolean => "boolean",
            CountingScheme::TfIdf => "tfidf",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "tf" => Ok(CountingScheme::Tf),
            "boolean" => Ok(CountingScheme::Boolean),
            "tfidf" => Ok(CountingScheme::TfIdf),
            other => Err(Error::InvalidInput(format!(
                "unknown counting scheme {other:?}"
            ))),
        }
    }
}

/// A sparse vector: strictly increasing indices, no stored zeros, finite
/// weights.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVector {
    entries: Vec<(u32, f64)>,
}

impl SparseVector {
    pub fn empty() -> Self {
        SparseVector::default()
    }

    /// Builds from (index, weight) pairs, validating the invariants.
    pub fn from_pairs(mut pairs: Vec<(u32, f64)>) -> Result<Self> {
        pairs.retain(|&(_, w)| w != 0.0);
        for &(_, w) in &pairs {
            if !w.is_finite() {
                return Err(Error::InvalidInput("non-finite weight".into()));
            }
        }
        pairs.sort_by_key(|&(i, _)| i);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidInput("duplicate index".into()));
        }
        Ok(SparseVector { entries: pairs })
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_index(&self) -> Option<u32> {
        self.entries.last().map(|&(i, _)| i)
    }

    pub fn squared_norm(&self) -> f64 {
        self.entries.iter().map(|&(_, w)| w * w).sum()
    }

    pub fn norm(&self) -> f64 {
        self.squared_norm().sqrt()
    }

    /// Dot product by merge-join over the two sorted entry lists.
    pub fn dot(&self, other: &SparseVector) -> f64 {
        let mut sum = 0.0;
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        while let (Some(&&(ia, wa)), Some(&&(ib, wb))) = (a.peek(), b.peek()) {
            match ia.cmp(&ib) {
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
                std::cmp::Ordering::Equal => {
                    sum += wa * wb;
                    a.next();
                    b.next();
                }
            }
        }
        sum
    }

    /// Returns the vector scaled to unit Euclidean norm.
    ///
    /// The zero vector is returned unchanged.
    pub fn normalized(&self) -> SparseVector {
        let n = self.norm();
        if n == 0.0 {
            return self.clone();
        }
        SparseVector {
            entries: self.entries.iter().map(|&(i, w)| (i, w / n)).collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> SparseVector {
        if factor == 0.0 {
            return SparseVector::empty();
        }
        SparseVector {
            entries: self.entries.iter().map(|&(i, w)| (i, w * factor)).collect(),
        }
    }
}

/// Term-to-index mapping, frozen after build. Indices are dense and
/// contiguous from 0 in first-seen order.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    index: HashMap<String, u32>,
    terms: Vec<String>,
}

impl Vocabulary {
    /// Builds a vocabulary over a corpus of token lists.
    ///
    /// Errors on an empty corpus (no documents at all).
    pub fn build<'a, I, D>(docs: I) -> Result<Self>
    where
        I: IntoIterator<Item = D>,
        D: IntoIterator<Item = &'a String>,
    {
        let mut vocab = Vocabulary {
            index: HashMap::new(),
            terms: Vec::new(),
        };
        let mut any = false;
        for doc in docs {
            any = true;
            for term in doc {
                vocab.intern(term);
            }
        }
        if !any {
            return Err(Error::InsufficientData("empty corpus".into()));
        }
        Ok(vocab)
    }

    fn intern(&mut self, term: &str) {
        if !self.index.contains_key(term) {
            let idx = self.terms.len() as u32;
            self.index.insert(term.to_string(), idx);
            self.terms.push(term.to_string());
        }
    }

    /// Appends every unseen term of `other`, preserving `other`'s order.
    pub fn merge(&mut self, other: &Vocabulary) {
        for term in &other.terms {
            self.intern(term);
        }
    }

    pub fn get(&self, term: &str) -> Option<u32> {
        self.index.get(term).copied()
    }

    pub fn term(&self, idx: u32) -> Option<&str> {
        self.terms.get(idx as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Content hash of the term list, in index order. Ties a persisted
    /// model to the vocabulary it was trained against.
    pub fn hash(&self) -> String {
        let mut hasher = Sha256::new();
        for term in &self.terms {
            hasher.update((term.len() as u64).to_le_bytes());
            hasher.update(term.as_bytes());
        }
        hex_prefix(&hasher.finalize(), 16)
    }

    /// Writes the vocabulary as a versioned text file, one escaped term per
    /// line in index order.
    pub fn save(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "disaffection vocab v1")?;
        writeln!(w, "hash\t{}", self.hash())?;
        for term in &self.terms {
            writeln!(w, "{}", escape(term))?;
        }
        Ok(())
    }

    pub fn load(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        // Provenance comments may precede the version line. Body lines are
        // never comment-stripped: a term may legitimately start with '#'.
        loop {
            let (n, header) = lines
                .next()
                .ok_or_else(|| Error::malformed(1, "empty vocabulary file"))?;
            let header = header?;
            if header.starts_with('#') {
                continue;
            }
            if header.trim_end() != "disaffection vocab v1" {
                return Err(Error::malformed(n + 1, "not a v1 vocabulary file"));
            }
            break;
        }
        let (_, hash_line) = lines
            .next()
            .ok_or_else(|| Error::malformed(2, "missing hash line"))?;
        let hash_line = hash_line?;
        let declared = hash_line
            .strip_prefix("hash\t")
            .ok_or_else(|| Error::malformed(2, "missing hash line"))?
            .to_string();

        let mut vocab = Vocabulary {
            index: HashMap::new(),
            terms: Vec::new(),
        };
        for (i, line) in lines {
            let line = line?;
            let term = unescape(&line).map_err(|e| Error::malformed(i + 1, e))?;
            if vocab.index.contains_key(&term) {
                return Err(Error::Duplicate {
                    what: "vocabulary term",
                    line: i + 1,
                    key: term,
                });
            }
            vocab.intern(&term);
        }
        if vocab.hash() != declared {
            return Err(Error::InvalidInput(format!(
                "vocabulary hash mismatch: file declares {declared}, contents hash to {}",
                vocab.hash()
            )));
        }
        Ok(vocab)
    }
}

pub(crate) fn hex_prefix(bytes: &[u8], n: usize) -> String {
    bytes
        .iter()
        .take(n / 2)
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Escapes tabs, newlines, and backslashes so arbitrary terms survive a
/// line-oriented file.
pub(crate) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

pub(crate) fn unescape(s: &str) -> std::result::Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some('t') => out.push('\t'),
            Some(other) => return Err(format!("bad escape \\{other}")),
            None => return Err("dangling backslash".into()),
        }
    }
    Ok(out)
}

/// Inverse document frequencies over a fixed corpus: `idf = ln(N / df)`.
/// Terms that never occurred are simply absent.
#[derive(Debug, Clone)]
pub struct IdfMap {
    weights: HashMap<String, f64>,
    document_count: usize,
}

impl IdfMap {
    pub fn idf(&self, term: &str) -> Option<f64> {
        self.weights.get(term).copied()
    }

    pub fn document_count(&self) -> usize {
        self.document_count
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Builds an [`IdfMap`] from a document collection.
///
/// `df` counts documents containing the term at least once; empty documents
/// still count toward `N`.
pub fn build_idf<D: AsRef<[String]>>(documents: &[D]) -> Result<IdfMap> {
    if documents.is_empty() {
        return Err(Error::InsufficientData(
            "idf map needs at least one document".into(),
        ));
    }
    let n = documents.len() as f64;
    let mut df: HashMap<&str, usize> = HashMap::new();
    let mut seen: Vec<&str> = Vec::new();
    for doc in documents {
        seen.clear();
        for term in doc.as_ref() {
            if !seen.contains(&term.as_str()) {
                seen.push(term);
            }
        }
        for term in &seen {
            *df.entry(term).or_insert(0) += 1;
        }
    }
    let weights = df
        .into_iter()
        .map(|(term, d)| (term.to_string(), (n / d as f64).ln()))
        .collect();
    Ok(IdfMap {
        weights,
        document_count: documents.len(),
    })
}

/// Turns a token list into a sparse vector over `vocab`.
///
/// Out-of-vocabulary tokens are ignored. For [`CountingScheme::TfIdf`] an
/// idf map is required; terms absent from it contribute nothing.
pub fn vectorize(
    tokens: &[String],
    scheme: CountingScheme,
    vocab: &Vocabulary,
    idf: Option<&IdfMap>,
) -> Result<SparseVector> {
    if scheme == CountingScheme::TfIdf && idf.is_none() {
        return Err(Error::InvalidInput(
            "tfidf counting requires an idf map".into(),
        ));
    }
    let mut counts: HashMap<u32, f64> = HashMap::new();
    for token in tokens {
        if let Some(idx) = vocab.get(token) {
            *counts.entry(idx).or_insert(0.0) += 1.0;
        }
    }
    let pairs = counts
        .into_iter()
        .filter_map(|(idx, tf)| {
            let w = match scheme {
                CountingScheme::Tf => tf,
                CountingScheme::Boolean => 1.0,
                CountingScheme::TfIdf => {
                    let term = vocab.term(idx).expect("index from this vocabulary");
                    tf * idf.unwrap().idf(term).unwrap_or(0.0)
                }
            };
            (w != 0.0).then_some((idx, w))
        })
        .collect();
    SparseVector::from_pairs(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn vocabulary_first_seen_order() {
        let docs = [toks(&["a", "b"]), toks(&["b"])];
        let vocab = Vocabulary::build(&docs).unwrap();
        assert_eq!(vocab.len(), 2);
        assert_eq!(vocab.get("a"), Some(0));
        assert_eq!(vocab.get("b"), Some(1));
    }

    #[test]
    fn vocabulary_deterministic() {
        let docs = [toks(&["x", "y", "x"]), toks(&["z"])];
        let a = Vocabulary::build(&docs).unwrap();
        let b = Vocabulary::build(&docs).unwrap();
        assert_eq!(a.hash(), b.hash());
    }

    #[test]
    fn vocabulary_empty_corpus_errors() {
        let docs: Vec<Vec<String>> = Vec::new();
        assert!(Vocabulary::build(&docs).is_err());
    }

    #[test]
    fn disjoint_merge_sums_sizes() {
        let a = Vocabulary::build(&[toks(&["a", "b"])]).unwrap();
        let b = Vocabulary::build(&[toks(&["c", "d", "e"])]).unwrap();
        let mut merged = a.clone();
        merged.merge(&b);
        assert_eq!(merged.len(), a.len() + b.len());
        // Set-union oracle: overlapping merge keeps one slot per distinct term.
        let c = Vocabulary::build(&[toks(&["b", "c"])]).unwrap();
        let mut overlapped = a;
        overlapped.merge(&c);
        assert_eq!(overlapped.len(), 3);
    }

    #[test]
    fn tf_boolean_and_tfidf_weights() {
        let vocab = Vocabulary::build(&[toks(&["a", "b"])]).unwrap();
        let tokens = toks(&["a", "a", "b"]);

        let tf = vectorize(&tokens, CountingScheme::Tf, &vocab, None).unwrap();
        assert_eq!(tf.iter().collect::<Vec<_>>(), vec![(0, 2.0), (1, 1.0)]);

        let boolean = vectorize(&tokens, CountingScheme::Boolean, &vocab, None).unwrap();
        assert_eq!(boolean.iter().collect::<Vec<_>>(), vec![(0, 1.0), (1, 1.0)]);

        // idf(a) = ln 3 from one-in-three documents.
        let idf = build_idf(&[toks(&["a"]), toks(&["x"]), toks(&["y"])]).unwrap();
        let v = vectorize(&toks(&["a"]), CountingScheme::TfIdf, &vocab, Some(&idf)).unwrap();
        let entries: Vec<_> = v.iter().collect();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].0, 0);
        assert!((entries[0].1 - 3f64.ln()).abs() < 1e-12);
        assert!((entries[0].1 - 1.0986).abs() < 1e-4);
    }

    #[test]
    fn tfidf_without_idf_errors() {
        let vocab = Vocabulary::build(&[toks(&["a"])]).unwrap();
        assert!(vectorize(&toks(&["a"]), CountingScheme::TfIdf, &vocab, None).is_err());
    }

    #[test]
    fn oov_tokens_ignored() {
        let vocab = Vocabulary::build(&[toks(&["a"])]).unwrap();
        let v = vectorize(&toks(&["zzz", "a"]), CountingScheme::Tf, &vocab, None).unwrap();
        assert_eq!(v.iter().collect::<Vec<_>>(), vec![(0, 1.0)]);
    }

    #[test]
    fn idf_term_in_every_document_is_zero() {
        let idf = build_idf(&[toks(&["a", "b"]), toks(&["a"])]).unwrap();
        assert_eq!(idf.idf("a"), Some(0.0));
        assert!((idf.idf("b").unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!((idf.idf("b").unwrap() - 0.6931).abs() < 1e-4);
        assert_eq!(idf.idf("zzz"), None);
    }

    #[test]
    fn idf_counts_empty_documents() {
        let idf = build_idf(&[toks(&["a"]), toks(&[])]).unwrap();
        assert!((idf.idf("a").unwrap() - 2f64.ln()).abs() < 1e-12);
        assert_eq!(idf.document_count(), 2);
    }

    #[test]
    fn idf_duplicating_corpus_is_invariant() {
        let docs = [toks(&["a", "b"]), toks(&["b", "c"]), toks(&["c"])];
        let once = build_idf(&docs).unwrap();
        let doubled: Vec<Vec<String>> = docs.iter().chain(docs.iter()).cloned().collect();
        let twice = build_idf(&doubled).unwrap();
        for term in ["a", "b", "c"] {
            assert!((once.idf(term).unwrap() - twice.idf(term).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn sparse_vector_rejects_duplicates_and_nonfinite() {
        assert!(SparseVector::from_pairs(vec![(1, 1.0), (1, 2.0)]).is_err());
        assert!(SparseVector::from_pairs(vec![(0, f64::NAN)]).is_err());
        // Zeros are dropped, not stored.
        let v = SparseVector::from_pairs(vec![(3, 0.0), (1, 2.0)]).unwrap();
        assert_eq!(v.iter().collect::<Vec<_>>(), vec![(1, 2.0)]);
    }

    #[test]
    fn dot_product_merge_join() {
        let a = SparseVector::from_pairs(vec![(0, 1.0), (2, 2.0), (5, 3.0)]).unwrap();
        let b = SparseVector::from_pairs(vec![(2, 4.0), (5, -1.0), (9, 7.0)]).unwrap();
        assert_eq!(a.dot(&b), 2.0 * 4.0 + 3.0 * -1.0);
        assert_eq!(a.dot(&SparseVector::empty()), 0.0);
    }

    #[test]
    fn vocabulary_roundtrip_with_awkward_terms() {
        let docs = [toks(&["a\tb", "c\nd", "e\\f", "plain"])];
        let vocab = Vocabulary::build(&docs).unwrap();
        let mut buf = Vec::new();
        vocab.save(&mut buf).unwrap();
        let loaded = Vocabulary::load(&buf[..]).unwrap();
        assert_eq!(loaded.len(), vocab.len());
        assert_eq!(loaded.hash(), vocab.hash());
        assert_eq!(loaded.get("a\tb"), Some(0));
        assert_eq!(loaded.get("c\nd"), Some(1));
    }
}
