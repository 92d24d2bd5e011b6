//! Request and result types shared by every expansion backend.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::fold::fold;
use crate::{Error, Result};

/// Positive seeds plus the surfaces a backend must not return.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionRequest {
    positives: Vec<String>,
    exclusions: Vec<String>,
    k: usize,
}

impl ExpansionRequest {
    pub fn new<P, E>(positives: P, exclusions: E, k: usize) -> Result<Self>
    where
        P: IntoIterator,
        P::Item: Into<String>,
        E: IntoIterator,
        E::Item: Into<String>,
    {
        let positives: Vec<String> = positives.into_iter().map(Into::into).collect();
        if positives.is_empty() {
            return Err(Error::InvalidRequest("positives must not be empty".into()));
        }
        if k == 0 {
            return Err(Error::InvalidRequest("k must be at least 1".into()));
        }
        Ok(ExpansionRequest {
            positives,
            exclusions: exclusions.into_iter().map(Into::into).collect(),
            k,
        })
    }

    pub fn positives(&self) -> &[String] {
        &self.positives
    }

    pub fn exclusions(&self) -> &[String] {
        &self.exclusions
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Case-folded union of positives and exclusions.
    pub fn excluded_keys(&self) -> HashSet<String> {
        self.positives
            .iter()
            .chain(&self.exclusions)
            .map(|s| fold(s.trim()))
            .collect()
    }
}

/// One ranked suggestion awaiting a verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateEntry {
    pub surface: String,
    pub score: f64,
    /// Seed with the highest similarity, or the category name.
    pub origin: String,
    pub model: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ExpansionRequest::new(Vec::<String>::new(), Vec::<String>::new(), 3).is_err());
        assert!(ExpansionRequest::new(["a"], Vec::<String>::new(), 0).is_err());
        let r = ExpansionRequest::new(["Bath"], [" Pool "], 2).unwrap();
        let keys = r.excluded_keys();
        assert!(keys.contains("bath") && keys.contains("pool"));
    }
}
