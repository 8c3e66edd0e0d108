//! Article vectorization by anchored co-occurrence.
//!
//! Text is tokenized, lexicon phrases are collapsed into canonical context
//! tokens, and each article becomes the vector of probabilities that a window
//! around an anchor occurrence contains each context token.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::weights::PointSet;

pub const SIDE_EFFECT: &str = "side-effect";
pub const HUMAN: &str = "human";
pub const DEFAULT_ANCHOR: &str = "amodiaquine";
pub const DEFAULT_WINDOW: usize = 10;

/// The anchor word and the ordered context tokens scored around it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetList {
    anchor: String,
    contexts: Vec<String>,
}

impl TargetList {
    pub fn new(anchor: &str, contexts: &[&str]) -> Result<Self> {
        let anchor = anchor.to_string();
        let contexts: Vec<String> = contexts.iter().map(|c| c.to_string()).collect();
        let mut seen = HashSet::new();
        for t in std::iter::once(&anchor).chain(&contexts) {
            if t.is_empty() || *t != t.to_lowercase() || t.chars().any(char::is_whitespace) {
                return Err(Error::input(format!(
                    "target token {t:?} must be a nonempty lowercase word"
                )));
            }
            if !seen.insert(t.as_str()) {
                return Err(Error::input(format!("target token {t:?} is repeated")));
            }
        }
        if contexts.is_empty() {
            return Err(Error::input("target list needs at least one context token"));
        }
        Ok(Self { anchor, contexts })
    }

    /// Parses `anchor,context1,context2,...`.
    pub fn parse(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
        match parts.split_first() {
            Some((anchor, contexts)) => Self::new(anchor, contexts),
            None => Err(Error::input("empty target list")),
        }
    }

    pub fn anchor(&self) -> &str {
        &self.anchor
    }

    pub fn contexts(&self) -> &[String] {
        &self.contexts
    }

    /// `p_<context>` with dashes replaced by underscores.
    pub fn column_names(&self) -> Vec<String> {
        self.contexts
            .iter()
            .map(|c| format!("p_{}", c.replace('-', "_")))
            .collect()
    }
}

impl Default for TargetList {
    fn default() -> Self {
        Self::new(DEFAULT_ANCHOR, &[HUMAN, SIDE_EFFECT]).expect("default targets are valid")
    }
}

/// Phrase sets collapsed to the canonical tokens `side-effect` and `human`.
#[derive(Debug, Clone, Default)]
pub struct Lexicons {
    phrases: HashMap<Vec<String>, &'static str>,
    longest: usize,
}

impl Lexicons {
    pub fn new<S: AsRef<str>>(side_effect_terms: &[S], human_terms: &[S]) -> Result<Self> {
        let mut lex = Self::default();
        lex.add_all(side_effect_terms, SIDE_EFFECT)?;
        lex.add_all(human_terms, HUMAN)?;
        Ok(lex)
    }

    fn add_all<S: AsRef<str>>(&mut self, terms: &[S], canonical: &'static str) -> Result<()> {
        for term in terms {
            let raw = term.as_ref();
            let tokens = tokenize(raw);
            if tokens.is_empty() {
                continue;
            }
            // canonical tokens inside phrases would make preprocessing
            // non-idempotent
            let other = if canonical == HUMAN { SIDE_EFFECT } else { HUMAN };
            let has_canonical = tokens.iter().any(|t| t == HUMAN || t == SIDE_EFFECT);
            if (tokens.len() == 1 && tokens[0] == other) || (tokens.len() > 1 && has_canonical) {
                return Err(Error::input(format!(
                    "phrase {raw:?} contains a canonical token"
                )));
            }
            match self.phrases.get(&tokens) {
                Some(&existing) if existing != canonical => {
                    return Err(Error::input(format!(
                        "phrase {raw:?} appears in both lexicons"
                    )));
                }
                _ => {}
            }
            self.longest = self.longest.max(tokens.len());
            self.phrases.insert(tokens, canonical);
        }
        Ok(())
    }

    /// Reads a newline-delimited phrase list; blank lines and `#` comments are skipped.
    pub fn parse_phrase_list(text: &str) -> Vec<String> {
        text.lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(str::to_lowercase)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }
}

/// Lowercased words; anything other than letters, digits and inner hyphens
/// separates tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !(c.is_alphanumeric() || c == '-'))
        .map(|t| t.trim_matches('-'))
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// Tokenizes and replaces lexicon phrases, longest match first, scanning left
/// to right.
pub fn preprocess(text: &str, lex: &Lexicons) -> Vec<String> {
    let tokens = tokenize(text);
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        let max_len = lex.longest.min(tokens.len() - i);
        let hit = (1..=max_len)
            .rev()
            .find_map(|len| lex.phrases.get(&tokens[i..i + len]).map(|c| (len, *c)));
        match hit {
            Some((len, canonical)) => {
                out.push(canonical.to_string());
                i += len;
            }
            None => {
                out.push(tokens[i].clone());
                i += 1;
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArticleVector {
    pub article_id: String,
    pub probs: Vec<f64>,
    pub anchor_occurrences: usize,
}

/// Scores `tokens` against `targets` with `window / 2` tokens on each side of
/// every anchor occurrence (anchor excluded, truncated at the ends).
pub fn vectorize_article(
    article_id: &str,
    tokens: &[String],
    targets: &TargetList,
    window: usize,
) -> Result<ArticleVector> {
    if window < 2 || window % 2 == 1 {
        return Err(Error::input(format!("window must be even and >= 2, got {window}")));
    }
    let half = window / 2;
    let k = targets.contexts.len();
    let mut hits = vec![0usize; k];
    let mut occurrences = 0;
    for (p, tok) in tokens.iter().enumerate() {
        if *tok != targets.anchor {
            continue;
        }
        occurrences += 1;
        let lo = p.saturating_sub(half);
        let hi = (p + half).min(tokens.len() - 1);
        let window_tokens = tokens[lo..p].iter().chain(&tokens[p + 1..=hi]);
        let mut present = vec![false; k];
        for t in window_tokens {
            if let Some(c) = targets.contexts.iter().position(|c| c == t) {
                present[c] = true;
            }
        }
        for (h, seen) in hits.iter_mut().zip(present) {
            *h += usize::from(seen);
        }
    }
    let probs = if occurrences == 0 {
        vec![0.0; k]
    } else {
        hits.iter().map(|&h| h as f64 / occurrences as f64).collect()
    };
    Ok(ArticleVector {
        article_id: article_id.to_string(),
        probs,
        anchor_occurrences: occurrences,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: String,
    pub text: String,
}

#[derive(Debug, Clone)]
pub struct VectorizedCorpus {
    pub points: PointSet,
    pub vectors: Vec<ArticleVector>,
}

/// Vectorizes every document, preserving order. `threads > 1` processes
/// documents concurrently with the same output.
pub fn vectorize_corpus(
    documents: &[Document],
    targets: &TargetList,
    lex: &Lexicons,
    window: usize,
    threads: usize,
) -> Result<VectorizedCorpus> {
    if documents.is_empty() {
        return Err(Error::input("corpus is empty"));
    }
    let mut ids = HashSet::new();
    for d in documents {
        if !ids.insert(d.id.as_str()) {
            return Err(Error::input(format!("duplicate article id {:?}", d.id)));
        }
    }
    let one = |d: &Document| vectorize_article(&d.id, &preprocess(&d.text, lex), targets, window);
    let vectors: Vec<ArticleVector> = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::input(format!("cannot start thread pool: {e}")))?;
        pool.install(|| documents.par_iter().map(one).collect::<Result<_>>())?
    } else {
        documents.iter().map(one).collect::<Result<_>>()?
    };
    let points = PointSet::new(vectors.iter().map(|v| v.probs.clone()).collect())?;
    Ok(VectorizedCorpus { points, vectors })
}

/// `id,p_<context>...,anchor_count` with probabilities at six decimals.
pub fn vectors_to_csv(targets: &TargetList, vectors: &[ArticleVector]) -> String {
    let mut out = String::from("id,");
    for name in targets.column_names() {
        out.push_str(&name);
        out.push(',');
    }
    out.push_str("anchor_count\n");
    for v in vectors {
        out.push_str(&v.article_id);
        for p in &v.probs {
            out.push_str(&format!(",{p:.6}"));
        }
        out.push_str(&format!(",{}\n", v.anchor_occurrences));
    }
    out
}
