//! Random inputs with deliberate collisions: repeated vectors, case
//! variants of tokens, overlapping entities.

use rand::seq::SliceRandom;
use rand::Rng;

use seedforge_core::{CandidateEntry, Dictionary, EntityEntry, Label};

const LETTERS: &[u8] = b"abcdefgh";

pub fn word<R: Rng>(rng: &mut R, max_len: usize) -> String {
    let len = rng.gen_range(1..=max_len);
    (0..len)
        .map(|_| LETTERS[rng.gen_range(0..LETTERS.len())] as char)
        .collect()
}

/// Vocabulary rows of dimension `dim`. Components are small integers, so
/// identical and parallel vectors (score ties) are common; some tokens are
/// case variants of others.
pub fn store_rows<R: Rng>(rng: &mut R, vocab: usize, dim: usize) -> Vec<(String, Vec<f64>)> {
    let mut rows: Vec<(String, Vec<f64>)> = Vec::with_capacity(vocab);
    let mut names = std::collections::HashSet::new();
    while rows.len() < vocab {
        let mut name = word(rng, 6);
        if rng.gen_bool(0.1) {
            name = name.to_uppercase();
        }
        if rng.gen_bool(0.05) {
            name = format!("{name}_{}", word(rng, 3));
        }
        if !names.insert(name.clone()) {
            continue;
        }
        let vector = if !rows.is_empty() && rng.gen_bool(0.15) {
            // copy or scale an earlier vector
            let base = &rows[rng.gen_range(0..rows.len())].1;
            let scale = [1.0, 2.0, 0.5][rng.gen_range(0..3)];
            base.iter().map(|x| x * scale).collect()
        } else if rng.gen_bool(0.5) {
            (0..dim).map(|_| rng.gen_range(-2i32..=2) as f64).collect()
        } else {
            (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()
        };
        rows.push((name, vector));
    }
    rows
}

/// Seeds: mostly vocabulary tokens (sometimes re-cased), occasionally
/// multiword or out-of-vocabulary surfaces.
pub fn seeds<R: Rng>(rng: &mut R, tokens: &[String], n: usize) -> Vec<String> {
    (0..n)
        .map(|_| match rng.gen_range(0..10) {
            0 => word(rng, 8) + "zz",
            1 => format!(
                "{} {}",
                tokens.choose(rng).unwrap(),
                tokens.choose(rng).unwrap()
            ),
            2 => tokens.choose(rng).unwrap().to_uppercase(),
            _ => tokens.choose(rng).unwrap().clone(),
        })
        .collect()
}

pub fn dictionary<R: Rng>(rng: &mut R, size: usize) -> Dictionary {
    let mut dict = Dictionary::new();
    while dict.len() < size {
        let mut surface = word(rng, 7);
        if rng.gen_bool(0.2) {
            surface = format!("{surface} {}", word(rng, 5));
        }
        if rng.gen_bool(0.1) {
            surface.push_str(["é", ", \"q\"", "ß", "日本"][rng.gen_range(0..4)]);
        }
        let label = if rng.gen_bool(0.7) {
            Label::Positive
        } else {
            Label::Negative
        };
        let iteration = rng.gen_range(0..6);
        let mut entry = if rng.gen_bool(0.5) {
            EntityEntry::manual(surface, label, iteration)
        } else {
            let candidate = CandidateEntry {
                surface,
                score: rng.gen_range(-1.0..=1.0),
                origin: word(rng, 6),
                model: ["emb:glove", "cat:kb", "emb:twitter"][rng.gen_range(0..3)].to_owned(),
            };
            EntityEntry::from_candidate(&candidate, label, iteration)
        };
        entry.active = rng.gen_bool(0.8);
        let _ = dict.insert(entry);
    }
    dict
}

/// Entity list for highlighting: short words, multiword phrases, prefixes
/// of one another, mixed case.
pub fn entities<R: Rng>(rng: &mut R, n: usize) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(n);
    while out.len() < n {
        let e = match rng.gen_range(0..6) {
            0 if !out.is_empty() => format!("{} {}", out.choose(rng).unwrap(), word(rng, 3)),
            1 if !out.is_empty() => {
                let base = out.choose(rng).unwrap().clone();
                format!("{base}{}", word(rng, 2))
            }
            2 => word(rng, 3).to_uppercase(),
            3 => format!("{}é", word(rng, 3)),
            _ => word(rng, 4),
        };
        out.push(e);
    }
    out
}

/// Document assembled from entity fragments, filler words, punctuation
/// and multibyte characters, up to `max_len` bytes.
pub fn document<R: Rng>(rng: &mut R, entities: &[String], max_len: usize) -> String {
    let target = rng.gen_range(0..=max_len);
    let mut doc = String::new();
    let seps = [
        " ", " ", " ", ", ", ".", "-", "\n", "_", "—", "(", ")", "&", "<", "\"", "",
    ];
    loop {
        let piece = match rng.gen_range(0..5) {
            0 | 1 if !entities.is_empty() => {
                let e = entities.choose(rng).unwrap();
                match rng.gen_range(0..3) {
                    0 => e.to_uppercase(),
                    1 => e.to_lowercase(),
                    _ => e.clone(),
                }
            }
            2 => "É日ß".chars().nth(rng.gen_range(0..3)).unwrap().to_string(),
            _ => word(rng, 5),
        };
        let sep = *seps.choose(rng).unwrap();
        if doc.len() + piece.len() + sep.len() > target {
            break;
        }
        doc.push_str(&piece);
        doc.push_str(sep);
    }
    doc
}
