use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use seedforge_core::embedding::EmbeddingStore;
use seedforge_core::fold::{fold, fold_char};
use seedforge_core::{HighlightOptions, Scalar};

/// (surface, score, origin)
pub type Ranked = (String, f64, String);

/// Seed resolution, re-derived from the documented lookup order.
fn resolve<T: Scalar>(store: &EmbeddingStore<T>, surface: &str) -> Option<Vec<T>> {
    if let Some(v) = store.vector(surface) {
        return Some(v.to_vec());
    }
    let lowered = surface.to_lowercase();
    let words: Vec<&str> = lowered.split_whitespace().collect();
    if words.is_empty() {
        return None;
    }
    if let Some(v) = store.vector(&words.join("_")) {
        return Some(v.to_vec());
    }
    let hits: Vec<&[T]> = words.iter().filter_map(|w| store.vector(w)).collect();
    if hits.is_empty() {
        return None;
    }
    let mut sum = vec![0.0f64; store.dimension()];
    for v in &hits {
        for (s, x) in sum.iter_mut().zip(v.iter()) {
            *s += x.to_f64().unwrap();
        }
    }
    let mut sq = 0.0f64;
    for s in &sum {
        sq += s * s;
    }
    let norm = sq.sqrt();
    if norm == 0.0 {
        return None;
    }
    Some(sum.iter().map(|s| T::from_f64(s / norm).unwrap()).collect())
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for i in 0..a.len() {
        acc = acc + a[i] * b[i];
    }
    acc
}

/// Scores the entire vocabulary, sorts it fully, and keeps the first `k`.
/// `None` when no positive resolves.
pub fn brute_force_expand<T: Scalar>(
    store: &EmbeddingStore<T>,
    positives: &[String],
    exclusions: &[String],
    k: usize,
) -> Option<Vec<Ranked>> {
    let seeds: Vec<(String, Vec<T>)> = positives
        .iter()
        .filter_map(|p| resolve(store, p).map(|v| (p.clone(), v)))
        .collect();
    if seeds.is_empty() {
        return None;
    }
    let banned: HashSet<String> = positives
        .iter()
        .chain(exclusions)
        .map(|s| fold(s.trim()))
        .collect();

    let mut all: Vec<Ranked> = Vec::new();
    for token in store.tokens() {
        if banned.contains(&fold(token)) {
            continue;
        }
        let v = store.vector(token).unwrap();
        let mut per_seed: Vec<(f64, &str)> = seeds
            .iter()
            .map(|(name, s)| (dot(v, s).to_f64().unwrap().clamp(-1.0, 1.0), name.as_str()))
            .collect();
        per_seed.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then_with(|| a.1.cmp(b.1)));
        let (score, origin) = per_seed[0];
        all.push((token.clone(), score, origin.to_owned()));
    }
    all.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.0.cmp(&b.0))
    });
    all.truncate(k);
    Some(all)
}

/// (category, support, matched seeds) computed straight from the pair list.
pub type Support = (String, f64, Vec<String>);

pub fn brute_force_suggest(
    pairs: &[(String, String)],
    positives: &[String],
    min_support: f64,
) -> Vec<Support> {
    let unique: BTreeSet<(String, String)> = pairs.iter().cloned().collect();
    let categories: BTreeSet<&String> = unique.iter().map(|(_, c)| c).collect();

    let mut seeds: Vec<&String> = Vec::new();
    for p in positives {
        if !seeds.iter().any(|s| fold(s.trim()) == fold(p.trim())) {
            seeds.push(p);
        }
    }
    let in_kb = |seed: &str, category: Option<&str>| {
        unique
            .iter()
            .any(|(e, c)| fold(e) == fold(seed.trim()) && category.is_none_or(|cat| c == cat))
    };
    let found = seeds.iter().filter(|s| in_kb(s, None)).count();

    let mut out = Vec::new();
    for category in categories {
        let matched: Vec<String> = seeds
            .iter()
            .filter(|s| in_kb(s, Some(category)))
            .map(|s| s.to_string())
            .collect();
        if matched.is_empty() {
            continue;
        }
        let support = matched.len() as f64 / found as f64;
        if support >= min_support {
            out.push((category.clone(), support, matched));
        }
    }
    out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    out
}

/// Enumerates every (category, member) pair, ranks them, and applies the
/// exclusion, first-occurrence dedup and truncation rules in one pass.
pub fn brute_force_category_expand(
    pairs: &[(String, String)],
    positives: &[String],
    exclusions: &[String],
    k: usize,
    min_support: f64,
) -> Vec<Ranked> {
    let suggestions = brute_force_suggest(pairs, positives, min_support);
    let unique: BTreeSet<(String, String)> = pairs.iter().cloned().collect();
    let mut all: Vec<(usize, &String, f64, &String)> = Vec::new();
    for (rank, (category, support, _)) in suggestions.iter().enumerate() {
        for (e, c) in &unique {
            if c == category {
                all.push((rank, e, *support, category));
            }
        }
    }
    all.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    let mut taken: HashSet<String> = positives
        .iter()
        .chain(exclusions)
        .map(|s| fold(s.trim()))
        .collect();
    let mut out = Vec::new();
    for (_, member, support, category) in all {
        if taken.insert(fold(member)) {
            out.push((member.clone(), support, category.clone()));
        }
    }
    out.truncate(k);
    out
}

/// Span as (start, end, entity index).
pub type NaiveSpan = (usize, usize, usize);

/// Tries every entity at every char position.
pub fn naive_highlight(
    document: &str,
    entities: &[String],
    options: HighlightOptions,
) -> Vec<NaiveSpan> {
    let norm = |c: char| {
        if options.case_insensitive {
            fold_char(c)
        } else {
            c
        }
    };
    let chars: Vec<(usize, char)> = document.char_indices().collect();
    let alnum_at = |i: usize| i < chars.len() && chars[i].1.is_alphanumeric();
    let byte = |i: usize| {
        if i < chars.len() {
            chars[i].0
        } else {
            document.len()
        }
    };

    let mut spans = Vec::new();
    let mut pos = 0;
    while pos < chars.len() {
        let mut best: Option<(usize, usize)> = None; // (char len, entity)
        for (id, entity) in entities.iter().enumerate() {
            let ec: Vec<char> = entity.chars().map(norm).collect();
            if ec.is_empty() || pos + ec.len() > chars.len() {
                continue;
            }
            let hit = (0..ec.len()).all(|j| norm(chars[pos + j].1) == ec[j]);
            if !hit {
                continue;
            }
            if options.word_boundary && ((pos > 0 && alnum_at(pos - 1)) || alnum_at(pos + ec.len()))
            {
                continue;
            }
            if best.is_none_or(|(len, _)| ec.len() > len) {
                best = Some((ec.len(), id));
            }
        }
        match best {
            Some((len, id)) => {
                spans.push((byte(pos), byte(pos + len), id));
                pos += len;
            }
            None => pos += 1,
        }
    }
    spans
}

/// Removes `<mark ...>` / `</mark>` tags and decodes the five escapes.
pub fn strip_markup(html: &str) -> String {
    let mut out = String::new();
    let mut rest = html;
    while let Some(i) = rest.find('<') {
        out.push_str(&rest[..i]);
        let close = rest[i..].find('>').expect("unterminated tag");
        rest = &rest[i + close + 1..];
    }
    out.push_str(rest);
    let mut decoded = String::new();
    let mut rest = out.as_str();
    while let Some(i) = rest.find('&') {
        decoded.push_str(&rest[..i]);
        let semi = rest[i..].find(';').expect("unterminated entity");
        let entity = &rest[i..i + semi + 1];
        decoded.push_str(match entity {
            "&amp;" => "&",
            "&lt;" => "<",
            "&gt;" => ">",
            "&quot;" => "\"",
            "&#39;" => "'",
            other => panic!("unexpected entity {other}"),
        });
        rest = &rest[i + semi + 1..];
    }
    decoded.push_str(rest);
    decoded
}
