use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use atc_core::syntax::{parse_theory, ActionTheory, Law};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Op {
    Contract,
    Revise,
}

/// A candidate as offered to the client; the theory is kept as text in the
/// theory grammar, which re-parses to the same theory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub id: String,
    pub text: String,
    pub diff: Value,
    #[serde(rename = "modelGraph")]
    pub model_graph: Value,
    pub provenance: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Event {
    Request { round: usize, op: Op, law: String, candidates: Vec<CandidateRecord>, at: u64 },
    Select { round: usize, candidate: String, at: u64 },
    Undo { at: u64 },
}

/// What is persisted: the initial theory and the append-only event log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub id: String,
    #[serde(rename = "theoryId")]
    pub theory_id: String,
    pub initial: String,
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pending {
    pub round: usize,
    pub op: Op,
    pub law: String,
    pub candidates: Vec<CandidateRecord>,
}

#[derive(Debug, Clone)]
struct Frame {
    previous: ActionTheory,
    pending: Pending,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejected {
    NoPending,
    Stale(String),
    NothingToUndo,
    Corrupt(String),
}

/// State obtained by replaying a record.
#[derive(Debug, Clone)]
pub struct Session {
    pub record: SessionRecord,
    pub current: ActionTheory,
    pub pending: Option<Pending>,
    pub rounds: usize,
    frames: Vec<Frame>,
}

fn parse(text: &str) -> Result<ActionTheory, Rejected> {
    parse_theory(text).map_err(|e| Rejected::Corrupt(e.to_string()))
}

impl Session {
    pub fn new(id: String, theory_id: String, initial: &ActionTheory) -> Self {
        let record = SessionRecord { id, theory_id, initial: initial.render(), events: Vec::new() };
        Session { record, current: initial.clone(), pending: None, rounds: 0, frames: Vec::new() }
    }

    pub fn replay(record: SessionRecord) -> Result<Self, Rejected> {
        let initial = parse(&record.initial)?;
        let events = record.events.clone();
        let mut s = Session { record: SessionRecord { events: Vec::new(), ..record }, current: initial, pending: None, rounds: 0, frames: Vec::new() };
        for e in events {
            s.apply(e)?;
        }
        Ok(s)
    }

    /// Applies one event and appends it to the log.
    pub fn apply(&mut self, event: Event) -> Result<(), Rejected> {
        match &event {
            Event::Request { round, op, law, candidates, .. } => {
                self.rounds = *round;
                self.pending = Some(Pending { round: *round, op: *op, law: law.clone(), candidates: candidates.clone() });
            }
            Event::Select { candidate, .. } => {
                let pending = self.pending.take().ok_or(Rejected::NoPending)?;
                let Some(c) = pending.candidates.iter().find(|c| &c.id == candidate) else {
                    let id = candidate.clone();
                    self.pending = Some(pending);
                    return Err(Rejected::Stale(id));
                };
                let next = parse(&c.text)?;
                let previous = std::mem::replace(&mut self.current, next);
                self.frames.push(Frame { previous, pending });
            }
            Event::Undo { .. } => {
                let frame = self.frames.pop().ok_or(Rejected::NothingToUndo)?;
                self.current = frame.previous;
                self.pending = Some(frame.pending);
            }
        }
        self.record.events.push(event);
        Ok(())
    }

    pub fn can_undo(&self) -> bool {
        !self.frames.is_empty()
    }

    pub fn history_json(&self) -> Value {
        Value::Array(
            self.record
                .events
                .iter()
                .map(|e| match e {
                    Event::Request { round, op, law, candidates, at } => json!({
                        "type": "request", "round": round, "op": op, "law": law, "at": at,
                        "candidates": candidates.iter().map(|c| c.id.clone()).collect::<Vec<_>>(),
                    }),
                    Event::Select { round, candidate, at } => {
                        json!({"type": "select", "round": round, "candidateId": candidate, "at": at})
                    }
                    Event::Undo { at } => json!({"type": "undo", "at": at}),
                })
                .collect(),
        )
    }
}

/// Law-level difference: laws only in `to` are added, laws only in `from`
/// removed; a removed and an added law of the same shape and action are
/// paired as a modification.
pub fn law_diff(from: &ActionTheory, to: &ActionTheory) -> Value {
    let sig = from.sig();
    let show = |l: &Law| l.display(sig).to_string();
    let removed: Vec<Law> = from.laws().into_iter().filter(|l| !to.contains(l)).collect();
    let mut added: Vec<Option<Law>> = to.laws().into_iter().filter(|l| !from.contains(l)).map(Some).collect();
    let mut modified = Vec::new();
    let mut gone = Vec::new();
    for r in removed {
        let partner = added
            .iter_mut()
            .find(|a| a.as_ref().is_some_and(|a| a.shape() == r.shape() && a.action() == r.action()));
        match partner.and_then(Option::take) {
            Some(a) => modified.push(json!({"from": show(&r), "to": show(&a)})),
            None => gone.push(show(&r)),
        }
    }
    json!({
        "added": added.iter().flatten().map(show).collect::<Vec<_>>(),
        "removed": gone,
        "modified": modified,
    })
}
