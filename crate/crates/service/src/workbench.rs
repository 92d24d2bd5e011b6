use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Deserialize;

use seedforge_core::highlight::{highlight, render_annotated};
use seedforge_core::{
    CandidateEntry, Dictionary, ExpansionRequest, ExportFormat, FeedbackDecision, HighlightOptions,
    ImportFormat, Label, RenderFormat, Session, SessionStore, Verdict, DEFAULT_MIN_SUPPORT,
};

use crate::registry::{ModelDescriptor, ModelRegistry};
use crate::ApiError;

/// Largest `k` accepted by the expansion endpoints.
pub const MAX_K: usize = 1000;

#[derive(Clone, Debug, Deserialize)]
pub struct ExpandBody {
    pub entities: Vec<String>,
    pub models: Vec<String>,
    pub k: i64,
    #[serde(default)]
    pub min_support: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct SessionExpandBody {
    pub models: Vec<String>,
    pub k: i64,
    #[serde(default)]
    pub min_support: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct EntityBody {
    pub surface: String,
    #[serde(default = "positive")]
    pub label: Label,
}

fn positive() -> Label {
    Label::Positive
}

#[derive(Clone, Debug, Default, Deserialize)]
pub struct PatchEntityBody {
    #[serde(default)]
    pub new_surface: Option<String>,
    #[serde(default)]
    pub active: Option<bool>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct DecisionBody {
    pub surface: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Deserialize)]
pub struct HighlightBody {
    pub document: String,
    #[serde(default)]
    pub options: HighlightOptions,
    #[serde(default)]
    pub format: Option<RenderFormat>,
}

fn validate_k(k: i64) -> Result<usize, ApiError> {
    if (1..=MAX_K as i64).contains(&k) {
        Ok(k as usize)
    } else {
        Err(ApiError::bad_request(
            "invalid_request",
            format!("k: must be between 1 and {MAX_K}, got {k}"),
        ))
    }
}

fn validate_min_support(min_support: Option<f64>) -> Result<f64, ApiError> {
    match min_support {
        None => Ok(DEFAULT_MIN_SUPPORT),
        Some(s) if s > 0.0 && s <= 1.0 => Ok(s),
        Some(s) => Err(ApiError::bad_request(
            "invalid_request",
            format!("min_support: must be in (0, 1], got {s}"),
        )),
    }
}

/// Models plus the session store, with one lock per session id.
pub struct Workbench {
    registry: ModelRegistry,
    store: SessionStore,
    locks: Mutex<HashMap<String, Arc<Mutex<()>>>>,
}

impl Workbench {
    pub fn new(registry: ModelRegistry, store: SessionStore) -> Self {
        Workbench {
            registry,
            store,
            locks: Mutex::new(HashMap::new()),
        }
    }

    pub fn registry(&self) -> &ModelRegistry {
        &self.registry
    }

    pub fn models(&self) -> Vec<ModelDescriptor> {
        self.registry.descriptors()
    }

    /// Stateless expansion: the given entities are both seeds and exclusions.
    pub fn expand(&self, body: &ExpandBody) -> Result<Vec<CandidateEntry>, ApiError> {
        let entities: Vec<&String> = body
            .entities
            .iter()
            .filter(|e| !e.trim().is_empty())
            .collect();
        if entities.is_empty() {
            return Err(ApiError::bad_request(
                "invalid_request",
                "entities: at least one non-blank entity is required",
            ));
        }
        let k = validate_k(body.k)?;
        let min_support = validate_min_support(body.min_support)?;
        let request = ExpansionRequest::new(
            entities.iter().copied().cloned(),
            entities.iter().copied().cloned(),
            k,
        )?;
        self.registry.expand(&body.models, &request, min_support)
    }

    fn lock_for(&self, id: &str) -> Arc<Mutex<()>> {
        let mut locks = self.locks.lock().unwrap_or_else(|e| e.into_inner());
        locks.entry(id.to_owned()).or_default().clone()
    }

    /// Loads the session, applies `f` under the session's lock and saves
    /// the result. Nothing is persisted when `f` fails.
    fn update<R>(
        &self,
        id: &str,
        f: impl FnOnce(&mut Session) -> Result<R, ApiError>,
    ) -> Result<(Session, R), ApiError> {
        let lock = self.lock_for(id);
        let _guard = lock.lock().unwrap_or_else(|e| e.into_inner());
        let mut session = self.store.load(id)?;
        let out = f(&mut session)?;
        self.store.save(&session)?;
        Ok((session, out))
    }

    pub fn create_session(&self, name: &str) -> Result<Session, ApiError> {
        let session = Session::new(name.trim());
        self.store.save(&session)?;
        Ok(session)
    }

    pub fn session(&self, id: &str) -> Result<Session, ApiError> {
        let lock = self.lock_for(id);
        let _guard = lock.lock().unwrap_or_else(|e| e.into_inner());
        Ok(self.store.load(id)?)
    }

    pub fn add_entity(&self, id: &str, body: &EntityBody) -> Result<Session, ApiError> {
        self.update(id, |s| Ok(s.add_entity(&body.surface, body.label)?))
            .map(|(s, _)| s)
    }

    pub fn patch_entity(
        &self,
        id: &str,
        surface: &str,
        body: &PatchEntityBody,
    ) -> Result<Session, ApiError> {
        if body.new_surface.is_none() && body.active.is_none() {
            return Err(ApiError::bad_request(
                "invalid_request",
                "body: expected new_surface and/or active",
            ));
        }
        self.update(id, |s| {
            // Work on a copy so a failed second step leaves nothing applied.
            let mut next = s.clone();
            let mut current = surface.to_owned();
            if let Some(new_surface) = &body.new_surface {
                next.rename_entity(surface, new_surface)?;
                current = new_surface.clone();
            }
            if let Some(active) = body.active {
                next.set_active(&current, active)?;
            }
            *s = next;
            Ok(())
        })
        .map(|(s, _)| s)
    }

    pub fn delete_entity(&self, id: &str, surface: &str) -> Result<Session, ApiError> {
        self.update(id, |s| Ok(s.delete_entity(surface)?))
            .map(|(s, _)| s)
    }

    /// Replaces the session dictionary with an imported file.
    pub fn import(
        &self,
        id: &str,
        bytes: &[u8],
        format: ImportFormat,
    ) -> Result<Session, ApiError> {
        let dictionary = Dictionary::import(bytes, format)?;
        self.update(id, |s| {
            s.replace_dictionary(dictionary);
            Ok(())
        })
        .map(|(s, _)| s)
    }

    /// Expands the session's active positive entries. Everything already in
    /// the dictionary or pending is excluded; the result becomes the new
    /// pending batch.
    pub fn expand_session(&self, id: &str, body: &SessionExpandBody) -> Result<Session, ApiError> {
        let k = validate_k(body.k)?;
        let min_support = validate_min_support(body.min_support)?;
        self.update(id, |s| {
            let positives: Vec<String> = s
                .dictionary()
                .active_positive_set()
                .into_iter()
                .map(str::to_owned)
                .collect();
            if positives.is_empty() {
                return Err(ApiError::bad_request(
                    "no_active_positives",
                    "the session has no active positive entities to expand",
                ));
            }
            let request = ExpansionRequest::new(positives, s.exclusions(), k)?;
            let candidates = self.registry.expand(&body.models, &request, min_support)?;
            s.set_pending(candidates);
            Ok(())
        })
        .map(|(s, _)| s)
    }

    pub fn feedback(&self, id: &str, decisions: &[DecisionBody]) -> Result<Session, ApiError> {
        self.update(id, |s| {
            let decisions: Vec<FeedbackDecision> = decisions
                .iter()
                .map(|d| {
                    let candidate = s
                        .pending()
                        .iter()
                        .find(|c| seedforge_core::fold::fold_eq(&c.surface, d.surface.trim()))
                        .cloned()
                        .ok_or_else(|| {
                            ApiError::from(seedforge_core::Error::UnknownCandidate(
                                d.surface.clone(),
                            ))
                        })?;
                    Ok(FeedbackDecision::new(candidate, d.verdict))
                })
                .collect::<Result<_, ApiError>>()?;
            Ok(s.apply_feedback(&decisions)?)
        })
        .map(|(s, _)| s)
    }

    pub fn export(&self, id: &str, format: ExportFormat) -> Result<Vec<u8>, ApiError> {
        Ok(self.session(id)?.dictionary().export(format))
    }

    /// Highlights the session's active positive entities in a document.
    pub fn highlight(&self, id: &str, body: &HighlightBody) -> Result<Vec<u8>, ApiError> {
        let session = self.session(id)?;
        let entities = session.dictionary().active_positive_set();
        let spans = highlight(&body.document, &entities, body.options);
        Ok(render_annotated(
            &body.document,
            &spans,
            body.format.unwrap_or(RenderFormat::Json),
        )?)
    }
}
