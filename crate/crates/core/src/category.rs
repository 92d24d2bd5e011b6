//! Is-a knowledge base and the category-level expansion backend.
//!
//! A category's support is the fraction of in-KB seeds that belong to it.
//! Categories at or above a support threshold are suggested, and their
//! unseen members become candidates scored by that support.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::expansion::{CandidateEntry, ExpansionRequest};
use crate::fold::fold;
use crate::{Error, Result};

/// Majority reading of "most seeds share the category".
pub const DEFAULT_MIN_SUPPORT: f64 = 0.5;

/// Bidirectional entity <-> category map.
#[derive(Clone, Debug, Default)]
pub struct CategoryIndex {
    entity_to_categories: BTreeMap<String, BTreeSet<String>>,
    category_to_entities: BTreeMap<String, BTreeSet<String>>,
    // folded entity -> KB spellings
    folded: HashMap<String, Vec<String>>,
    pairs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CategorySuggestion {
    pub category: String,
    pub support: f64,
    pub matched_seeds: Vec<String>,
}

impl CategoryIndex {
    /// Reads `entity<TAB>category` lines; `#` comments and blank lines are
    /// ignored, repeated pairs collapse.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_reader(BufReader::new(File::open(path)?))
    }

    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let mut index = CategoryIndex::default();
        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let line = line.map_err(|e| match e.kind() {
                std::io::ErrorKind::InvalidData => Error::Parse {
                    line: line_no,
                    message: "invalid UTF-8".into(),
                },
                _ => Error::Io(e),
            })?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.trim_end_matches('\r').split('\t').collect();
            let [entity, category] = fields[..] else {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 2 tab-separated columns, found {}", fields.len()),
                });
            };
            let (entity, category) = (entity.trim(), category.trim());
            if entity.is_empty() || category.is_empty() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "empty entity or category".into(),
                });
            }
            index.insert(entity, category);
        }
        if index.pairs == 0 {
            return Err(Error::EmptyIndex);
        }
        Ok(index)
    }

    pub fn from_pairs<I, E, C>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (E, C)>,
        E: AsRef<str>,
        C: AsRef<str>,
    {
        let mut index = CategoryIndex::default();
        for (e, c) in pairs {
            let (e, c) = (e.as_ref().trim(), c.as_ref().trim());
            if e.is_empty() || c.is_empty() {
                return Err(Error::InvalidEntry {
                    surface: e.to_owned(),
                    reason: "empty entity or category".into(),
                });
            }
            index.insert(e, c);
        }
        if index.pairs == 0 {
            return Err(Error::EmptyIndex);
        }
        Ok(index)
    }

    fn insert(&mut self, entity: &str, category: &str) {
        let fresh = self
            .entity_to_categories
            .entry(entity.to_owned())
            .or_default()
            .insert(category.to_owned());
        if !fresh {
            return;
        }
        self.category_to_entities
            .entry(category.to_owned())
            .or_default()
            .insert(entity.to_owned());
        let spellings = self.folded.entry(fold(entity)).or_default();
        if !spellings.iter().any(|s| s == entity) {
            spellings.push(entity.to_owned());
        }
        self.pairs += 1;
    }

    /// Number of unique (entity, category) pairs.
    pub fn pair_count(&self) -> usize {
        self.pairs
    }

    pub fn entity_count(&self) -> usize {
        self.entity_to_categories.len()
    }

    pub fn category_count(&self) -> usize {
        self.category_to_entities.len()
    }

    pub fn categories_of(&self, entity: &str) -> Option<&BTreeSet<String>> {
        self.entity_to_categories.get(entity)
    }

    pub fn members_of(&self, category: &str) -> Option<&BTreeSet<String>> {
        self.category_to_entities.get(category)
    }

    /// Categories of every KB entity whose case fold equals the seed's.
    fn categories_of_seed(&self, seed: &str) -> BTreeSet<&str> {
        self.folded
            .get(&fold(seed.trim()))
            .into_iter()
            .flatten()
            .flat_map(|e| &self.entity_to_categories[e])
            .map(String::as_str)
            .collect()
    }

    /// Categories shared by the in-KB seeds with support >= `min_support`,
    /// ranked by support descending then name ascending.
    pub fn suggest_categories<S: AsRef<str>>(
        &self,
        positives: &[S],
        min_support: f64,
    ) -> Result<Vec<CategorySuggestion>> {
        if !(min_support > 0.0 && min_support <= 1.0) {
            return Err(Error::InvalidRequest(format!(
                "min_support must be in (0, 1], got {min_support}"
            )));
        }
        let mut seen = HashSet::new();
        let mut found = 0usize;
        let mut matches: BTreeMap<&str, Vec<String>> = BTreeMap::new();
        for seed in positives.iter().map(AsRef::as_ref) {
            if !seen.insert(fold(seed.trim())) {
                continue;
            }
            let categories = self.categories_of_seed(seed);
            if categories.is_empty() {
                continue;
            }
            found += 1;
            for c in categories {
                matches.entry(c).or_default().push(seed.to_owned());
            }
        }
        let mut out: Vec<CategorySuggestion> = matches
            .into_iter()
            .map(|(category, matched_seeds)| CategorySuggestion {
                category: category.to_owned(),
                support: matched_seeds.len() as f64 / found as f64,
                matched_seeds,
            })
            .filter(|s| s.support >= min_support)
            .collect();
        // Equal denominators: ordering by matched count is ordering by support.
        out.sort_by(|a, b| {
            b.matched_seeds
                .len()
                .cmp(&a.matched_seeds.len())
                .then_with(|| a.category.cmp(&b.category))
        });
        Ok(out)
    }

    /// Members of the suggested categories, in suggestion order and then
    /// member order, scored by their category's support. A member reached
    /// through several categories keeps its first (highest support)
    /// occurrence.
    pub fn expand_by_category(
        &self,
        request: &ExpansionRequest,
        min_support: f64,
        model: &str,
    ) -> Result<Vec<CandidateEntry>> {
        let suggestions = self.suggest_categories(request.positives(), min_support)?;
        let mut excluded = request.excluded_keys();
        let mut out = Vec::new();
        for suggestion in &suggestions {
            for member in &self.category_to_entities[&suggestion.category] {
                if out.len() == request.k() {
                    return Ok(out);
                }
                if !excluded.insert(fold(member)) {
                    continue;
                }
                out.push(CandidateEntry {
                    surface: member.clone(),
                    score: suggestion.support,
                    origin: suggestion.category.clone(),
                    model: model.to_owned(),
                });
            }
        }
        Ok(out)
    }
}
