//! Sessions: a named dictionary, the candidate batch awaiting feedback, and
//! the feedback round counter. Also the on-disk session store.

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::dictionary::{Dictionary, EntityEntry, Label};
use crate::expansion::CandidateEntry;
use crate::fold::fold;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeedbackDecision {
    pub candidate: CandidateEntry,
    pub verdict: Verdict,
}

impl FeedbackDecision {
    pub fn new(candidate: CandidateEntry, verdict: Verdict) -> Self {
        FeedbackDecision { candidate, verdict }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Session {
    id: String,
    name: String,
    dictionary: Dictionary,
    pending: Vec<CandidateEntry>,
    iteration: u32,
    created: DateTime<Utc>,
    updated: DateTime<Utc>,
}

impl Session {
    pub fn new(name: impl Into<String>) -> Self {
        let now = Utc::now();
        Session {
            id: uuid::Uuid::new_v4().simple().to_string(),
            name: name.into(),
            dictionary: Dictionary::new(),
            pending: Vec::new(),
            iteration: 0,
            created: now,
            updated: now,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dictionary
    }

    pub fn pending(&self) -> &[CandidateEntry] {
        &self.pending
    }

    pub fn iteration(&self) -> u32 {
        self.iteration
    }

    pub fn created(&self) -> DateTime<Utc> {
        self.created
    }

    pub fn updated(&self) -> DateTime<Utc> {
        self.updated
    }

    fn touch(&mut self) {
        self.updated = Utc::now();
    }

    /// Drops pending candidates that now collide with a dictionary entry.
    fn prune_pending(&mut self) {
        let dict = &self.dictionary;
        self.pending.retain(|c| !dict.contains(&c.surface));
    }

    pub fn add_entity(&mut self, surface: &str, label: Label) -> Result<()> {
        self.dictionary.add_entity(surface, label, self.iteration)?;
        self.prune_pending();
        self.touch();
        Ok(())
    }

    pub fn rename_entity(&mut self, old_surface: &str, new_surface: &str) -> Result<()> {
        self.dictionary.rename_entity(old_surface, new_surface)?;
        self.prune_pending();
        self.touch();
        Ok(())
    }

    pub fn delete_entity(&mut self, surface: &str) -> Result<EntityEntry> {
        let removed = self.dictionary.delete_entity(surface)?;
        self.touch();
        Ok(removed)
    }

    pub fn set_active(&mut self, surface: &str, active: bool) -> Result<()> {
        self.dictionary.set_active(surface, active)?;
        self.touch();
        Ok(())
    }

    /// Replaces the dictionary wholesale (seed import) and clears pending.
    pub fn replace_dictionary(&mut self, dictionary: Dictionary) {
        self.dictionary = dictionary;
        self.pending.clear();
        self.touch();
    }

    /// Installs a new candidate batch, replacing the previous one.
    /// Candidates colliding with the dictionary or with an earlier
    /// candidate of the batch are dropped.
    pub fn set_pending(&mut self, candidates: Vec<CandidateEntry>) {
        let mut seen = HashSet::new();
        let dict = &self.dictionary;
        self.pending = candidates
            .into_iter()
            .filter(|c| !dict.contains(&c.surface) && seen.insert(fold(&c.surface)))
            .collect();
        self.touch();
    }

    /// Every surface expansion must not propose again: the whole dictionary
    /// (any label, any active state) plus the pending batch.
    pub fn exclusions(&self) -> Vec<String> {
        self.dictionary
            .surfaces()
            .chain(self.pending.iter().map(|c| c.surface.as_str()))
            .map(str::to_owned)
            .collect()
    }

    /// Folds a batch of verdicts into the dictionary.
    ///
    /// Accepted candidates become positive entries and rejected ones negative
    /// entries, both tagged with the current iteration; skipped ones are
    /// dropped. All judged candidates leave the pending set. The iteration
    /// advances once per non-empty batch. On error nothing changes.
    pub fn apply_feedback(&mut self, decisions: &[FeedbackDecision]) -> Result<()> {
        if decisions.is_empty() {
            return Ok(());
        }
        let mut next = self.clone();
        let mut judged = HashSet::new();
        for decision in decisions {
            let key = fold(decision.candidate.surface.trim());
            let candidate = self
                .pending
                .iter()
                .find(|c| fold(&c.surface) == key)
                .ok_or_else(|| Error::UnknownCandidate(decision.candidate.surface.clone()))?;
            if !judged.insert(key) {
                return Err(Error::DuplicateDecision(decision.candidate.surface.clone()));
            }
            let label = match decision.verdict {
                Verdict::Accept => Label::Positive,
                Verdict::Reject => Label::Negative,
                Verdict::Skip => continue,
            };
            next.dictionary.insert(EntityEntry::from_candidate(
                candidate,
                label,
                self.iteration,
            ))?;
        }
        next.pending.retain(|c| !judged.contains(&fold(&c.surface)));
        next.iteration += 1;
        next.touch();
        *self = next;
        Ok(())
    }

    /// Checks the invariants a deserialized session must satisfy.
    pub fn validate(&self) -> Result<()> {
        if let Some(c) = self
            .pending
            .iter()
            .find(|c| self.dictionary.contains(&c.surface))
        {
            return Err(Error::DuplicateEntity(c.surface.clone()));
        }
        Ok(())
    }
}

/// One JSON document per session under a data directory.
#[derive(Clone, Debug)]
pub struct SessionStore {
    dir: PathBuf,
}

impl SessionStore {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| storage(&dir, e))?;
        Ok(SessionStore { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path_for(&self, id: &str) -> Option<PathBuf> {
        let valid = !id.is_empty()
            && id.len() <= 64
            && id
                .bytes()
                .all(|b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_');
        valid.then(|| self.dir.join(format!("{id}.json")))
    }

    /// Writes the session, replacing any earlier save of the same id.
    pub fn save(&self, session: &Session) -> Result<()> {
        let path = self
            .path_for(&session.id)
            .ok_or_else(|| Error::Storage(format!("invalid session id {:?}", session.id)))?;
        let body = serde_json::to_vec_pretty(session).map_err(|e| Error::Storage(e.to_string()))?;
        let tmp = path.with_extension("json.tmp");
        let write = || -> std::io::Result<()> {
            let mut file = fs::File::create(&tmp)?;
            file.write_all(&body)?;
            file.sync_all()?;
            fs::rename(&tmp, &path)
        };
        write().map_err(|e| storage(&path, e))
    }

    pub fn load(&self, id: &str) -> Result<Session> {
        let path = self
            .path_for(id)
            .ok_or_else(|| Error::SessionNotFound(id.to_owned()))?;
        let bytes = match fs::read(&path) {
            Ok(bytes) => bytes,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(Error::SessionNotFound(id.to_owned()))
            }
            Err(e) => return Err(storage(&path, e)),
        };
        let session: Session = serde_json::from_slice(&bytes)
            .map_err(|e| Error::Storage(format!("{}: {e}", path.display())))?;
        session.validate()?;
        Ok(session)
    }

    pub fn exists(&self, id: &str) -> bool {
        self.path_for(id).is_some_and(|p| p.is_file())
    }
}

fn storage(path: &Path, err: std::io::Error) -> Error {
    Error::Storage(format!("{}: {err}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cand(surface: &str, score: f64) -> CandidateEntry {
        CandidateEntry {
            surface: surface.into(),
            score,
            origin: "bath".into(),
            model: "emb:toy".into(),
        }
    }

    fn session_with_pending() -> Session {
        let mut s = Session::new("housing");
        s.add_entity("bath", Label::Positive).unwrap();
        s.set_pending(vec![
            cand("shower", 0.9),
            cand("garage", 0.2),
            cand("sink", 0.5),
        ]);
        s
    }

    #[test]
    fn accept_and_reject() {
        let mut s = session_with_pending();
        s.set_pending(vec![cand("shower", 0.9), cand("garage", 0.2)]);
        s.apply_feedback(&[
            FeedbackDecision::new(cand("shower", 0.9), Verdict::Accept),
            FeedbackDecision::new(cand("garage", 0.2), Verdict::Reject),
        ])
        .unwrap();
        assert_eq!(s.dictionary().len(), 3);
        assert!(s.pending().is_empty());
        assert_eq!(s.iteration(), 1);
        let shower = s.dictionary().get("shower").unwrap();
        assert_eq!(shower.label, Label::Positive);
        assert_eq!(shower.origin.as_deref(), Some("bath"));
        assert_eq!(shower.score, Some(0.9));
        assert_eq!(shower.model.as_deref(), Some("emb:toy"));
        assert_eq!(shower.iteration, 0);
        let garage = s.dictionary().get("garage").unwrap();
        assert_eq!((garage.label, garage.active), (Label::Negative, true));
    }

    #[test]
    fn skip_drops_and_partial_batches_keep_rest() {
        let mut s = session_with_pending();
        s.apply_feedback(&[FeedbackDecision::new(cand("garage", 0.2), Verdict::Skip)])
            .unwrap();
        assert_eq!(s.dictionary().len(), 1);
        let pending: Vec<_> = s.pending().iter().map(|c| c.surface.as_str()).collect();
        assert_eq!(pending, ["shower", "sink"]);
        assert_eq!(s.iteration(), 1);
    }

    #[test]
    fn empty_decisions_change_nothing() {
        let mut s = session_with_pending();
        let before = s.clone();
        s.apply_feedback(&[]).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn unknown_candidate_is_atomic() {
        let mut s = session_with_pending();
        let before = s.clone();
        let err = s
            .apply_feedback(&[
                FeedbackDecision::new(cand("shower", 0.9), Verdict::Accept),
                FeedbackDecision::new(cand("sauna", 0.1), Verdict::Accept),
            ])
            .unwrap_err();
        assert!(matches!(err, Error::UnknownCandidate(s) if s == "sauna"));
        assert_eq!(s, before);
    }

    #[test]
    fn duplicate_decision_is_rejected() {
        let mut s = session_with_pending();
        let before = s.clone();
        let err = s
            .apply_feedback(&[
                FeedbackDecision::new(cand("shower", 0.9), Verdict::Accept),
                FeedbackDecision::new(cand("Shower", 0.9), Verdict::Reject),
            ])
            .unwrap_err();
        assert!(matches!(err, Error::DuplicateDecision(_)));
        assert_eq!(s, before);
    }

    #[test]
    fn pending_never_collides_with_dictionary() {
        let mut s = session_with_pending();
        s.add_entity("Shower", Label::Positive).unwrap();
        assert!(s.pending().iter().all(|c| c.surface != "shower"));
        s.rename_entity("bath", "sink").unwrap();
        assert!(s.pending().iter().all(|c| c.surface != "sink"));
        s.set_pending(vec![
            cand("sink", 0.3),
            cand("garage", 0.2),
            cand("GARAGE", 0.1),
        ]);
        let pending: Vec<_> = s.pending().iter().map(|c| c.surface.as_str()).collect();
        assert_eq!(pending, ["garage"]);
        s.validate().unwrap();
    }

    #[test]
    fn store_round_trip_and_overwrite() {
        let dir = tempfile::tempdir().unwrap();
        let store = SessionStore::open(dir.path()).unwrap();
        let mut s = session_with_pending();
        store.save(&s).unwrap();
        assert_eq!(store.load(s.id()).unwrap(), s);

        s.apply_feedback(&[FeedbackDecision::new(cand("sink", 0.5), Verdict::Accept)])
            .unwrap();
        store.save(&s).unwrap();
        let loaded = store.load(s.id()).unwrap();
        assert_eq!(loaded, s);
        assert_eq!(loaded.iteration(), 1);
    }

    #[test]
    fn store_unknown_and_hostile_ids() {
        let dir = tempfile::tempdir().unwrap();
        let store = SessionStore::open(dir.path()).unwrap();
        assert!(matches!(store.load("nope"), Err(Error::SessionNotFound(_))));
        assert!(matches!(
            store.load("../etc/passwd"),
            Err(Error::SessionNotFound(_))
        ));
    }

    #[test]
    fn store_reports_corrupt_documents() {
        let dir = tempfile::tempdir().unwrap();
        let store = SessionStore::open(dir.path()).unwrap();
        fs::write(dir.path().join("broken.json"), b"{not json").unwrap();
        assert!(matches!(store.load("broken"), Err(Error::Storage(_))));
    }
}
