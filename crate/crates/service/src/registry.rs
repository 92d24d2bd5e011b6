//! Registered expansion models and the cross-model merge.

use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use seedforge_core::fold::fold;
use seedforge_core::{
    CandidateEntry, CategoryIndex, EmbeddingStore, Error as CoreError, ExpansionRequest,
};

use crate::ApiError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    // declaration order is the merge tie-break order
    Embedding,
    Category,
}

#[derive(Clone)]
pub enum Backend {
    Embedding(Arc<EmbeddingStore>),
    Category(Arc<CategoryIndex>),
    /// Registered but its resource failed to load; requests get 503.
    Unavailable {
        kind: ModelKind,
        reason: String,
    },
}

impl Backend {
    pub fn kind(&self) -> ModelKind {
        match self {
            Backend::Embedding(_) => ModelKind::Embedding,
            Backend::Category(_) => ModelKind::Category,
            Backend::Unavailable { kind, .. } => *kind,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub id: String,
    pub kind: ModelKind,
}

#[derive(Clone, Default)]
pub struct ModelRegistry {
    models: BTreeMap<String, Backend>,
}

impl ModelRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a model; ids must be unique.
    pub fn register(&mut self, id: impl Into<String>, backend: Backend) -> Result<(), String> {
        let id = id.into();
        if self.models.contains_key(&id) {
            return Err(format!("duplicate model id {id:?}"));
        }
        self.models.insert(id, backend);
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn get(&self, id: &str) -> Option<&Backend> {
        self.models.get(id)
    }

    pub fn descriptors(&self) -> Vec<ModelDescriptor> {
        self.models
            .iter()
            .map(|(id, b)| ModelDescriptor {
                id: id.clone(),
                kind: b.kind(),
            })
            .collect()
    }

    /// Runs every selected model and merges their lists.
    ///
    /// An embedding model that cannot resolve any seed contributes nothing;
    /// the request only fails with `no_resolvable_seed` when that happens
    /// to every selected model.
    pub fn expand(
        &self,
        model_ids: &[String],
        request: &ExpansionRequest,
        min_support: f64,
    ) -> Result<Vec<CandidateEntry>, ApiError> {
        if model_ids.is_empty() {
            return Err(ApiError::bad_request(
                "invalid_request",
                "models: at least one model id is required",
            ));
        }
        let mut backends = Vec::with_capacity(model_ids.len());
        for id in model_ids {
            let backend = self.models.get(id).ok_or_else(|| {
                ApiError::bad_request("unknown_model", format!("models: unknown model id {id:?}"))
            })?;
            if !backends.iter().any(|(seen, _)| seen == &id) {
                backends.push((id, backend));
            }
        }

        let mut lists = Vec::with_capacity(backends.len());
        let mut unresolved = 0;
        for (id, backend) in &backends {
            let result = match backend {
                Backend::Embedding(store) => store.expand(request, id),
                Backend::Category(index) => index.expand_by_category(request, min_support, id),
                Backend::Unavailable { reason, .. } => {
                    return Err(ApiError::new(
                        axum::http::StatusCode::SERVICE_UNAVAILABLE,
                        "model_unavailable",
                        format!("model {id:?} is unavailable: {reason}"),
                    ))
                }
            };
            match result {
                Ok(list) => lists.push((backend.kind(), list)),
                Err(CoreError::NoResolvableSeed) => unresolved += 1,
                Err(e) => return Err(e.into()),
            }
        }
        if unresolved == backends.len() {
            return Err(CoreError::NoResolvableSeed.into());
        }
        Ok(merge_candidates(lists, request.k()))
    }
}

fn preferred(a: &(ModelKind, CandidateEntry), b: &(ModelKind, CandidateEntry)) -> Ordering {
    b.1.score
        .total_cmp(&a.1.score)
        .then_with(|| a.0.cmp(&b.0))
        .then_with(|| a.1.model.cmp(&b.1.model))
}

/// Merges per-model candidate lists into one ranking.
///
/// One entry per case-folded surface survives: the highest score, then
/// embedding before category, then the smaller model id. The result is
/// ordered by score descending then surface ascending, cut to `k`.
pub fn merge_candidates(
    lists: Vec<(ModelKind, Vec<CandidateEntry>)>,
    k: usize,
) -> Vec<CandidateEntry> {
    let mut best: HashMap<String, (ModelKind, CandidateEntry)> = HashMap::new();
    for (kind, list) in lists {
        for candidate in list {
            let item = (kind, candidate);
            match best.entry(fold(&item.1.surface)) {
                Entry::Vacant(slot) => {
                    slot.insert(item);
                }
                Entry::Occupied(mut slot) => {
                    if preferred(&item, slot.get()) == Ordering::Less {
                        slot.insert(item);
                    }
                }
            }
        }
    }
    let mut merged: Vec<CandidateEntry> = best.into_values().map(|(_, c)| c).collect();
    merged.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.surface.cmp(&b.surface))
            .then_with(|| a.model.cmp(&b.model))
    });
    merged.truncate(k);
    merged
}
