//! Session service for iterative theory change. [`Service::handle`] is the
//! whole API as a plain function from request to response; [`router`] puts it
//! behind HTTP.

mod http;
mod session;
mod store;

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use atc_core::entailment::{biggest_model, is_consistent, is_modular};
use atc_core::kripke::{canonical_frame, model_to_json, ModelSet};
use atc_core::model_change::{revise_model_set, ChangeError};
use atc_core::syntax::{parse_law, parse_query, parse_theory, theory_to_json, ActionTheory, Law};
use atc_core::theory_change::{contract, provenance_to_json, theory_from_model_set, ContractError, ContractOptions};
use atc_core::Signature;

pub use http::{router, serve};
pub use session::{law_diff, Op};
pub use store::{Store, StoreError};

use session::{CandidateRecord, Event, Rejected, Session, SessionRecord};

#[derive(Debug, Clone, PartialEq)]
pub struct Response {
    pub status: u16,
    pub body: Value,
}

impl Response {
    fn ok(body: Value) -> Self {
        Response { status: 200, body }
    }

    fn created(body: Value) -> Self {
        Response { status: 201, body }
    }

    fn error(status: u16, message: impl Into<String>) -> Self {
        Response { status, body: json!({ "error": message.into() }) }
    }
}

type Reply = Result<Response, Response>;

fn bad_request(m: impl Into<String>) -> Response {
    Response::error(400, m)
}

fn not_found(what: &str, id: &str) -> Response {
    Response::error(404, format!("no {what} `{id}`"))
}

fn conflict(m: impl Into<String>) -> Response {
    Response::error(409, m)
}

fn unprocessable(m: impl Into<String>) -> Response {
    Response::error(422, m)
}

fn internal(m: impl std::fmt::Display) -> Response {
    Response::error(500, m.to_string())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TheoryRecord {
    id: String,
    text: String,
}

struct StoredTheory {
    record: TheoryRecord,
    theory: ActionTheory,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TheoryRequest {
    text: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct SessionRequest {
    theory_id: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LawRequest {
    law: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct SelectRequest {
    candidate_id: String,
}

fn body<T: DeserializeOwned>(bytes: &[u8]) -> Result<T, Response> {
    serde_json::from_slice(bytes).map_err(|e| bad_request(format!("invalid request body: {e}")))
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn modularity_json(t: &ActionTheory) -> Value {
    let r = is_modular(t);
    json!({
        "modular": r.modular,
        "implicitLaws": r.implicit_laws.iter().map(|f| f.display(t.sig()).to_string()).collect::<Vec<_>>(),
    })
}

/// Accepts a law in the theory grammar (`effect φ => [a] ψ`) or as a modal
/// formula of one of the three law shapes.
fn parse_request_law(sig: &Signature, text: &str) -> Result<Law, Response> {
    match parse_law(sig, text) {
        Ok(l) => Ok(l),
        Err(law_err) => match parse_query(sig, text) {
            Ok(q) if q.laws().len() == 1 => Ok(q.laws()[0].clone()),
            _ => Err(bad_request(format!("malformed law: {law_err}"))),
        },
    }
}

pub struct Service {
    store: Option<Store>,
    theories: RwLock<BTreeMap<String, Arc<StoredTheory>>>,
    sessions: RwLock<BTreeMap<String, Arc<Mutex<Session>>>>,
}

impl Service {
    /// A service that keeps everything in memory.
    pub fn in_memory() -> Self {
        Service { store: None, theories: RwLock::default(), sessions: RwLock::default() }
    }

    /// A service persisting to `dir`, restoring whatever is already there.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, StoreError> {
        let store = Store::open(dir.as_ref())?;
        let mut theories = BTreeMap::new();
        for record in store.load_all::<TheoryRecord>("theories")? {
            // records were written from parsed theories; skip any that no
            // longer parse rather than refusing to start
            if let Ok(theory) = parse_theory(&record.text) {
                theories.insert(record.id.clone(), Arc::new(StoredTheory { record, theory }));
            }
        }
        let mut sessions = BTreeMap::new();
        for record in store.load_all::<SessionRecord>("sessions")? {
            if let Ok(s) = Session::replay(record) {
                sessions.insert(s.record.id.clone(), Arc::new(Mutex::new(s)));
            }
        }
        Ok(Service { store: Some(store), theories: RwLock::new(theories), sessions: RwLock::new(sessions) })
    }

    pub fn handle(&self, method: &str, path: &str, body: &[u8]) -> Response {
        let parts: Vec<&str> = path.trim_matches('/').split('/').collect();
        let reply = match (method, parts.as_slice()) {
            ("POST", ["api", "theories"]) => self.create_theory(body),
            ("GET", ["api", "theories", id]) => self.get_theory(id),
            ("POST", ["api", "sessions"]) => self.create_session(body),
            ("GET", ["api", "sessions", id]) => self.with_session(id, |s| Ok(Response::ok(state_json(s)))),
            ("GET", ["api", "sessions", id, "model"]) => self.with_session(id, |s| Ok(Response::ok(model_json(&s.current)))),
            ("POST", ["api", "sessions", id, "contract"]) => self.request(id, Op::Contract, body),
            ("POST", ["api", "sessions", id, "revise"]) => self.request(id, Op::Revise, body),
            ("POST", ["api", "sessions", id, "select"]) => self.select(id, body),
            ("POST", ["api", "sessions", id, "undo"]) => self.undo(id),
            (_, ["api", "theories"] | ["api", "theories", _] | ["api", "sessions"] | ["api", "sessions", _])
            | (_, ["api", "sessions", _, "model" | "contract" | "revise" | "select" | "undo"]) => {
                Err(Response::error(405, format!("method {method} not allowed on {path}")))
            }
            _ => Err(Response::error(404, format!("no endpoint {path}"))),
        };
        reply.unwrap_or_else(|e| e)
    }

    fn persist<T: Serialize>(&self, kind: &str, id: &str, value: &T) -> Result<(), Response> {
        match &self.store {
            Some(store) => store.put(kind, id, value).map_err(internal),
            None => Ok(()),
        }
    }

    fn create_theory(&self, bytes: &[u8]) -> Reply {
        let req: TheoryRequest = body(bytes)?;
        let theory = parse_theory(&req.text).map_err(|e| {
            Response {
                status: 400,
                body: json!({"error": e.to_string(), "line": e.line, "column": e.column}),
            }
        })?;
        let id = uuid::Uuid::new_v4().simple().to_string();
        let record = TheoryRecord { id: id.clone(), text: theory.render() };
        self.persist("theories", &id, &record)?;
        let mut out = modularity_json(&theory);
        out["id"] = json!(id);
        self.theories.write().unwrap().insert(id, Arc::new(StoredTheory { record, theory }));
        Ok(Response::created(out))
    }

    fn theory(&self, id: &str) -> Result<Arc<StoredTheory>, Response> {
        self.theories.read().unwrap().get(id).cloned().ok_or_else(|| not_found("theory", id))
    }

    fn get_theory(&self, id: &str) -> Reply {
        let t = self.theory(id)?;
        let mut out = modularity_json(&t.theory);
        out["id"] = json!(t.record.id);
        out["text"] = json!(t.record.text);
        out["theory"] = theory_to_json(&t.theory);
        Ok(Response::ok(out))
    }

    fn create_session(&self, bytes: &[u8]) -> Reply {
        let req: SessionRequest = body(bytes)?;
        let t = self.theory(&req.theory_id)?;
        let id = uuid::Uuid::new_v4().simple().to_string();
        let s = Session::new(id.clone(), t.record.id.clone(), &t.theory);
        self.persist("sessions", &id, &s.record)?;
        let out = state_json(&s);
        self.sessions.write().unwrap().insert(id, Arc::new(Mutex::new(s)));
        Ok(Response::created(out))
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, Response> {
        self.sessions.read().unwrap().get(id).cloned().ok_or_else(|| not_found("session", id))
    }

    fn with_session(&self, id: &str, f: impl FnOnce(&Session) -> Reply) -> Reply {
        let s = self.session(id)?;
        let guard = s.lock().unwrap();
        f(&guard)
    }

    /// Applies `event` to a copy, persists the copy, then commits it, so the
    /// in-memory state never runs ahead of the file.
    fn commit(&self, s: &mut Session, event: Event) -> Result<(), Response> {
        let mut next = s.clone();
        next.apply(event).map_err(|r| match r {
            Rejected::NoPending => conflict("no pending candidates to select from"),
            Rejected::Stale(id) => conflict(format!("candidate `{id}` is not among the pending candidates")),
            Rejected::NothingToUndo => conflict("nothing to undo"),
            Rejected::Corrupt(e) => internal(e),
        })?;
        self.persist("sessions", &next.record.id, &next.record)?;
        *s = next;
        Ok(())
    }

    fn request(&self, id: &str, op: Op, bytes: &[u8]) -> Reply {
        let arc = self.session(id)?;
        let req: LawRequest = body(bytes)?;
        let mut s = arc.lock().unwrap();
        let law = parse_request_law(s.current.sig(), &req.law)?;
        let round = s.rounds + 1;
        let candidates = match op {
            Op::Contract => contract_candidates(&s.current, &law, round)?,
            Op::Revise => revise_candidates(&s.current, &law, round)?,
        };
        let law_text = law.display(s.current.sig()).to_string();
        self.commit(&mut s, Event::Request { round, op, law: law_text, candidates, at: now() })?;
        Ok(Response::ok(pending_json(&s)))
    }

    fn select(&self, id: &str, bytes: &[u8]) -> Reply {
        let arc = self.session(id)?;
        let req: SelectRequest = body(bytes)?;
        let mut s = arc.lock().unwrap();
        let round = s.pending.as_ref().map(|p| p.round).ok_or_else(|| conflict("no pending candidates to select from"))?;
        self.commit(&mut s, Event::Select { round, candidate: req.candidate_id, at: now() })?;
        Ok(Response::ok(state_json(&s)))
    }

    fn undo(&self, id: &str) -> Reply {
        let arc = self.session(id)?;
        let mut s = arc.lock().unwrap();
        self.commit(&mut s, Event::Undo { at: now() })?;
        Ok(Response::ok(state_json(&s)))
    }
}

fn candidate_id(round: usize, i: usize) -> String {
    format!("r{round}-c{}", i + 1)
}

fn contract_candidates(t: &ActionTheory, law: &Law, round: usize) -> Result<Vec<CandidateRecord>, Response> {
    let cands = contract(t, law, &ContractOptions::default()).map_err(|e| match e {
        ContractError::Theory(e) => bad_request(e.to_string()),
        ContractError::Classical(e) => unprocessable(e.to_string()),
    })?;
    Ok(cands
        .into_iter()
        .enumerate()
        .map(|(i, c)| CandidateRecord {
            id: candidate_id(round, i),
            text: c.theory.render(),
            diff: law_diff(t, &c.theory),
            model_graph: model_to_json(&biggest_model(&c.theory).model, t.sig()),
            provenance: provenance_to_json(&c.provenance, t.sig()),
        })
        .collect())
}

fn revise_candidates(t: &ActionTheory, law: &Law, round: usize) -> Result<Vec<CandidateRecord>, Response> {
    if !is_consistent(t) {
        return Err(unprocessable("cannot revise an inconsistent theory"));
    }
    let base = if is_modular(t).modular { canonical_frame(t) } else { biggest_model(t).model };
    let set: ModelSet = [base].into_iter().collect();
    let outcome = revise_model_set(&set, law).map_err(|e| match e {
        ChangeError::Unsatisfiable => unprocessable(e.to_string()),
        e => bad_request(e.to_string()),
    })?;
    if outcome.results.is_empty() {
        let why = outcome.reason.map(|r| r.code()).unwrap_or("no-result");
        return Err(unprocessable(format!("no revision exists ({why})")));
    }
    let sig = t.sig();
    outcome
        .results
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut theory = theory_from_model_set(&r.models, sig, t.name()).map_err(|e| unprocessable(e.to_string()))?;
            theory.set_name(t.name());
            let graph = r.models.iter().next().map(|m| model_to_json(m, sig)).unwrap_or(Value::Null);
            let changes: Vec<Value> = r
                .changes
                .iter()
                .map(|c| {
                    let d = &c.delta;
                    let worlds = |ws: &[atc_core::Valuation]| ws.iter().map(|w| w.display(sig).to_string()).collect::<Vec<_>>();
                    let arrows = |xs: &[(atc_core::Action, atc_core::Valuation, atc_core::Valuation)]| {
                        xs.iter()
                            .map(|(a, u, v)| json!([sig.action_name(*a), u.display(sig).to_string(), v.display(sig).to_string()]))
                            .collect::<Vec<_>>()
                    };
                    json!({
                        "addedWorlds": worlds(&d.added_worlds),
                        "removedWorlds": worlds(&d.removed_worlds),
                        "addedArrows": arrows(&d.added_arrows),
                        "removedArrows": arrows(&d.removed_arrows),
                    })
                })
                .collect();
            Ok(CandidateRecord {
                id: candidate_id(round, i),
                diff: law_diff(t, &theory),
                text: theory.render(),
                model_graph: graph,
                provenance: json!({ "changes": changes }),
            })
        })
        .collect()
}

fn candidate_json(c: &CandidateRecord) -> Value {
    let theory = parse_theory(&c.text).map(|t| theory_to_json(&t)).unwrap_or(Value::Null);
    json!({
        "id": c.id,
        "theory": theory,
        "text": c.text,
        "diff": c.diff,
        "modelGraph": c.model_graph,
        "provenance": c.provenance,
    })
}

fn pending_json(s: &Session) -> Value {
    match &s.pending {
        None => Value::Null,
        Some(p) => json!({
            "round": p.round,
            "op": p.op,
            "law": p.law,
            "candidates": p.candidates.iter().map(candidate_json).collect::<Vec<_>>(),
        }),
    }
}

fn state_json(s: &Session) -> Value {
    let mut current = modularity_json(&s.current);
    current["text"] = json!(s.current.render());
    current["theory"] = theory_to_json(&s.current);
    json!({
        "id": s.record.id,
        "theoryId": s.record.theory_id,
        "current": current,
        "pending": pending_json(s),
        "canUndo": s.can_undo(),
        "history": s.history_json(),
    })
}

fn model_json(t: &ActionTheory) -> Value {
    let modular = is_modular(t).modular;
    let (kind, m) = if modular { ("canonical", canonical_frame(t)) } else { ("biggest", biggest_model(t).model) };
    json!({ "kind": kind, "modular": modular, "model": model_to_json(&m, t.sig()) })
}
