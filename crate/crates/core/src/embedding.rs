//! Word-vector store and the cosine-similarity expansion backend.
//!
//! Vectors are L2-normalized once at load time, so cosine similarity is a
//! plain dot product afterwards. A candidate's score is its best cosine
//! against any resolved seed, and that seed is reported as its origin.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use flate2::read::MultiGzDecoder;

use crate::expansion::{CandidateEntry, ExpansionRequest};
use crate::fold::fold;
use crate::{Error, Result, Scalar};

/// Counters collected while reading a vector file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub lines: usize,
    pub loaded: usize,
    /// Wrong arity, unparsable or non-finite numbers, invalid UTF-8.
    pub skipped_malformed: usize,
    pub skipped_zero_norm: usize,
    pub skipped_duplicate: usize,
    /// 1-based line number and reason of the first malformed line.
    pub first_malformed: Option<(usize, String)>,
}

impl LoadReport {
    pub fn skipped(&self) -> usize {
        self.skipped_malformed + self.skipped_zero_norm + self.skipped_duplicate
    }

    fn malformed(&mut self, line: usize, reason: String) {
        self.skipped_malformed += 1;
        self.first_malformed.get_or_insert((line, reason));
    }
}

/// Immutable vocabulary of unit vectors sharing one dimension.
#[derive(Clone, Debug)]
pub struct EmbeddingStore<T> {
    dimension: usize,
    tokens: Vec<String>,
    folded: Vec<String>,
    // row-major, tokens.len() * dimension
    vectors: Vec<T>,
    index: HashMap<String, usize>,
}

enum Row {
    Added,
    ZeroNorm,
    Duplicate,
}

impl<T: Scalar> EmbeddingStore<T> {
    fn with_dimension(dimension: usize) -> Self {
        EmbeddingStore {
            dimension,
            tokens: Vec::new(),
            folded: Vec::new(),
            vectors: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Normalizes in f64 and stores the result; caller checks arity.
    fn push_row(&mut self, token: &str, values: &[f64]) -> Row {
        if self.index.contains_key(token) {
            return Row::Duplicate;
        }
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Row::ZeroNorm;
        }
        self.vectors.extend(
            values
                .iter()
                .map(|v| T::from_f64(v / norm).unwrap_or_else(T::zero)),
        );
        self.index.insert(token.to_owned(), self.tokens.len());
        self.tokens.push(token.to_owned());
        self.folded.push(fold(token));
        Row::Added
    }

    /// Loads a GloVe text file, gunzipping when the name ends in `.gz`.
    pub fn load(path: impl AsRef<Path>) -> Result<(Self, LoadReport)> {
        let path = path.as_ref();
        let file = File::open(path)?;
        if path.extension().is_some_and(|e| e == "gz") {
            Self::from_reader(BufReader::new(MultiGzDecoder::new(file)))
        } else {
            Self::from_reader(BufReader::with_capacity(1 << 16, file))
        }
    }

    /// Parses `token v1 v2 ... vd` lines. The first well-formed line fixes
    /// `d`; lines of another arity, with bad numbers, or with a zero vector
    /// are skipped and counted. Later duplicates of a token are skipped.
    pub fn from_reader<R: BufRead>(mut reader: R) -> Result<(Self, LoadReport)> {
        let mut report = LoadReport::default();
        let mut store: Option<Self> = None;
        let mut buf = Vec::new();
        let mut values = Vec::new();
        loop {
            buf.clear();
            if reader.read_until(b'\n', &mut buf)? == 0 {
                break;
            }
            report.lines += 1;
            let line_no = report.lines;
            let Ok(line) = std::str::from_utf8(&buf) else {
                report.malformed(line_no, "invalid UTF-8".into());
                continue;
            };
            let mut fields = line.split_ascii_whitespace();
            let Some(token) = fields.next() else {
                continue;
            };
            values.clear();
            let mut bad = None;
            for field in fields {
                match field.parse::<f64>() {
                    Ok(v) if v.is_finite() => values.push(v),
                    _ => {
                        bad = Some(format!("bad number {field:?}"));
                        break;
                    }
                }
            }
            if let Some(reason) = bad {
                report.malformed(line_no, reason);
                continue;
            }
            if values.is_empty() {
                report.malformed(line_no, "no vector components".into());
                continue;
            }
            let store = store.get_or_insert_with(|| Self::with_dimension(values.len()));
            if values.len() != store.dimension {
                report.malformed(
                    line_no,
                    format!(
                        "expected {} components, found {}",
                        store.dimension,
                        values.len()
                    ),
                );
                continue;
            }
            match store.push_row(token, &values) {
                Row::Added => report.loaded += 1,
                Row::ZeroNorm => report.skipped_zero_norm += 1,
                Row::Duplicate => report.skipped_duplicate += 1,
            }
        }
        match store {
            Some(store) if !store.is_empty() => Ok((store, report)),
            _ => Err(Error::EmptyVocabulary),
        }
    }

    /// Builds a store from in-memory rows with the same skip rules as
    /// [`from_reader`](Self::from_reader).
    pub fn from_rows<I, S>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: AsRef<str>,
    {
        let mut store: Option<Self> = None;
        for (token, values) in rows {
            if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
                continue;
            }
            let store = store.get_or_insert_with(|| Self::with_dimension(values.len()));
            if values.len() == store.dimension {
                store.push_row(token.as_ref(), &values);
            }
        }
        store
            .filter(|s| !s.is_empty())
            .ok_or(Error::EmptyVocabulary)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    fn row(&self, i: usize) -> &[T] {
        &self.vectors[i * self.dimension..(i + 1) * self.dimension]
    }

    /// Stored unit vector of an exact token.
    pub fn vector(&self, token: &str) -> Option<&[T]> {
        self.index.get(token).map(|&i| self.row(i))
    }

    /// Resolves an entity surface to a unit vector.
    ///
    /// Tried in order: the exact token; the lowercased surface with
    /// whitespace runs joined by `_`; the renormalized mean of the
    /// lowercased whitespace-separated tokens that are in the vocabulary.
    pub fn lookup_vector(&self, surface: &str) -> Option<Cow<'_, [T]>> {
        if let Some(v) = self.vector(surface) {
            return Some(Cow::Borrowed(v));
        }
        let lowered = surface.to_lowercase();
        let parts: Vec<&str> = lowered.split_whitespace().collect();
        if parts.is_empty() {
            return None;
        }
        if let Some(v) = self.vector(&parts.join("_")) {
            return Some(Cow::Borrowed(v));
        }
        let mut sum = vec![0.0f64; self.dimension];
        let mut found = false;
        for v in parts.iter().filter_map(|p| self.vector(p)) {
            found = true;
            for (acc, x) in sum.iter_mut().zip(v) {
                *acc += x.to_f64().unwrap_or(0.0);
            }
        }
        let norm = sum.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !found || norm == 0.0 {
            return None;
        }
        Some(Cow::Owned(
            sum.iter()
                .map(|v| T::from_f64(v / norm).unwrap_or_else(T::zero))
                .collect(),
        ))
    }

    /// Top-k vocabulary tokens by best cosine against any resolvable seed.
    /// Cosines are clamped to `[-1, 1]` before ranking.
    ///
    /// Tokens whose case fold matches a positive or an exclusion are never
    /// returned. Ranking is score descending then token ascending; the
    /// origin is the best seed, the lexicographically smallest on ties.
    pub fn expand(&self, request: &ExpansionRequest, model: &str) -> Result<Vec<CandidateEntry>> {
        let mut seeds: Vec<(&str, Cow<'_, [T]>)> = request
            .positives()
            .iter()
            .filter_map(|p| self.lookup_vector(p).map(|v| (p.as_str(), v)))
            .collect();
        if seeds.is_empty() {
            return Err(Error::NoResolvableSeed);
        }
        seeds.sort_by(|a, b| a.0.cmp(b.0));
        seeds.dedup_by(|a, b| a.0 == b.0);

        let excluded = request.excluded_keys();
        let k = request.k();
        let mut heap: BinaryHeap<Ranked<'_>> = BinaryHeap::with_capacity(k + 1);
        for (i, token) in self.tokens.iter().enumerate() {
            if excluded.contains(&self.folded[i]) {
                continue;
            }
            let row = self.row(i);
            let mut best = (dot(row, &seeds[0].1), 0);
            for (s, (_, seed)) in seeds.iter().enumerate().skip(1) {
                let sim = dot(row, seed);
                if sim > best.0 {
                    best = (sim, s);
                }
            }
            let item = Ranked {
                score: clamp_cosine(best.0.to_f64().unwrap_or(f64::NAN)),
                token,
                seed: best.1,
            };
            if heap.len() < k {
                heap.push(item);
            } else if heap.peek().is_some_and(|worst| item < *worst) {
                heap.pop();
                heap.push(item);
            }
        }
        Ok(heap
            .into_sorted_vec()
            .into_iter()
            .map(|r| CandidateEntry {
                surface: r.token.to_owned(),
                score: r.score,
                origin: seeds[r.seed].0.to_owned(),
                model: model.to_owned(),
            })
            .collect())
    }
}

/// Sequential dot product; summation order is part of the ranking contract.
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Rounding can carry a unit-vector dot product just past +-1; scores are
/// clamped back and -0.0 is mapped to 0.0 so that zero scores tie.
fn clamp_cosine(score: f64) -> f64 {
    let score = score.clamp(-1.0, 1.0);
    if score == 0.0 {
        0.0
    } else {
        score
    }
}

/// Heap entry ordered so that `Less` means ranked earlier.
struct Ranked<'a> {
    score: f64,
    token: &'a str,
    seed: usize,
}

impl Ord for Ranked<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .score
            .total_cmp(&self.score)
            .then_with(|| self.token.cmp(other.token))
    }
}

impl PartialOrd for Ranked<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Ranked<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ranked<'_> {}
