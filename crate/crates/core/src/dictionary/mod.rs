//! The entity dictionary: an insertion-ordered table of entries whose
//! surfaces are unique under case folding, whatever their label or active
//! flag.

mod exchange;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use exchange::{ExportFormat, ImportFormat, CSV_HEADER};

use crate::expansion::CandidateEntry;
use crate::fold::fold;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "positive" => Ok(Label::Positive),
            "negative" => Ok(Label::Negative),
            other => Err(format!("unknown label {other:?}")),
        }
    }
}

/// One dictionary row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntityEntry {
    pub surface: String,
    pub label: Label,
    /// Seed entity or category that produced the entry; `None` when added by hand.
    pub origin: Option<String>,
    pub score: Option<f64>,
    pub active: bool,
    /// Id of the expansion model that proposed the entry.
    pub model: Option<String>,
    /// Feedback round in which the entry was added.
    pub iteration: u32,
}

impl EntityEntry {
    pub fn manual(surface: impl Into<String>, label: Label, iteration: u32) -> Self {
        EntityEntry {
            surface: surface.into(),
            label,
            origin: None,
            score: None,
            active: true,
            model: None,
            iteration,
        }
    }

    pub fn from_candidate(candidate: &CandidateEntry, label: Label, iteration: u32) -> Self {
        EntityEntry {
            surface: candidate.surface.clone(),
            label,
            origin: Some(candidate.origin.clone()),
            score: Some(candidate.score),
            active: true,
            model: Some(candidate.model.clone()),
            iteration,
        }
    }

    /// Brings the entry into canonical form, or rejects it.
    ///
    /// Canonical form: trimmed surface, empty optional text collapsed to
    /// `None`, score rounded to the 6 decimals the CSV export carries.
    fn normalized(mut self) -> Result<Self> {
        let trimmed = self.surface.trim();
        if trimmed.is_empty() {
            return Err(Error::EmptySurface);
        }
        if trimmed.len() != self.surface.len() {
            self.surface = trimmed.to_owned();
        }
        self.origin = self.origin.filter(|o| !o.is_empty());
        self.model = self.model.filter(|m| !m.is_empty());
        if let Some(score) = self.score {
            if !score.is_finite() || !(-1.0..=1.0).contains(&score) {
                return Err(Error::InvalidEntry {
                    surface: self.surface,
                    reason: format!("score {score} outside [-1, 1]"),
                });
            }
            self.score = Some(round_score(score));
        }
        Ok(self)
    }
}

/// Rounds to 6 decimal places, mapping negative zero to zero.
pub(crate) fn round_score(score: f64) -> f64 {
    let rounded = (score * 1e6).round() / 1e6;
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(try_from = "DictionaryRepr", into = "DictionaryRepr")]
pub struct Dictionary {
    entries: Vec<EntityEntry>,
    // folded surface -> position in `entries`
    index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct DictionaryRepr {
    entries: Vec<EntityEntry>,
}

impl TryFrom<DictionaryRepr> for Dictionary {
    type Error = Error;

    fn try_from(repr: DictionaryRepr) -> Result<Self> {
        let mut dict = Dictionary::new();
        for entry in repr.entries {
            dict.insert(entry)?;
        }
        Ok(dict)
    }
}

impl From<Dictionary> for DictionaryRepr {
    fn from(dict: Dictionary) -> Self {
        DictionaryRepr {
            entries: dict.entries,
        }
    }
}

impl PartialEq for Dictionary {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Dictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[EntityEntry] {
        &self.entries
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.surface.as_str())
    }

    /// Looks an entry up by case-folded surface.
    pub fn get(&self, surface: &str) -> Option<&EntityEntry> {
        self.position(surface).map(|i| &self.entries[i])
    }

    pub fn contains(&self, surface: &str) -> bool {
        self.position(surface).is_some()
    }

    fn position(&self, surface: &str) -> Option<usize> {
        self.index.get(&fold(surface.trim())).copied()
    }

    fn position_or_not_found(&self, surface: &str) -> Result<usize> {
        self.position(surface)
            .ok_or_else(|| Error::NotFound(surface.to_owned()))
    }

    /// Appends a validated entry. Fails without modifying the dictionary.
    pub fn insert(&mut self, entry: EntityEntry) -> Result<()> {
        let entry = entry.normalized()?;
        let key = fold(&entry.surface);
        if self.index.contains_key(&key) {
            return Err(Error::DuplicateEntity(entry.surface));
        }
        self.index.insert(key, self.entries.len());
        self.entries.push(entry);
        Ok(())
    }

    /// Adds a hand-entered entity: active, no origin, no score.
    pub fn add_entity(&mut self, surface: &str, label: Label, iteration: u32) -> Result<()> {
        self.insert(EntityEntry::manual(surface, label, iteration))
    }

    /// Renames an entry, keeping every other field. A rename that only
    /// changes casing is allowed.
    pub fn rename_entity(&mut self, old_surface: &str, new_surface: &str) -> Result<()> {
        let pos = self.position_or_not_found(old_surface)?;
        let new_surface = new_surface.trim();
        if new_surface.is_empty() {
            return Err(Error::EmptySurface);
        }
        let new_key = fold(new_surface);
        match self.index.get(&new_key) {
            Some(&other) if other != pos => {
                return Err(Error::DuplicateEntity(new_surface.to_owned()));
            }
            _ => {}
        }
        let old_key = fold(&self.entries[pos].surface);
        self.index.remove(&old_key);
        self.index.insert(new_key, pos);
        self.entries[pos].surface = new_surface.to_owned();
        Ok(())
    }

    pub fn delete_entity(&mut self, surface: &str) -> Result<EntityEntry> {
        let pos = self.position_or_not_found(surface)?;
        let removed = self.entries.remove(pos);
        self.reindex();
        Ok(removed)
    }

    pub fn set_active(&mut self, surface: &str, active: bool) -> Result<()> {
        let pos = self.position_or_not_found(surface)?;
        self.entries[pos].active = active;
        Ok(())
    }

    /// Surfaces that expansion may use as seeds: positive and active, in
    /// insertion order.
    pub fn active_positive_set(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| e.active && e.label == Label::Positive)
            .map(|e| e.surface.as_str())
            .collect()
    }

    fn reindex(&mut self) {
        self.index = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| (fold(&e.surface), i))
            .collect();
    }
}
