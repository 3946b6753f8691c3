"""Group-decision session service with file-backed persistence.

A session moves draft -> voting -> closed.  The facilitator loads
alternatives and registers weighted voters while drafting, voters submit
complete rankings under per-voter access tokens, and closing computes the
weighted Borda group ranking.  Every mutation is appended to a per-session
JSONL event log and fsynced before it is acknowledged, so a restarted
store replays to the identical state.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from cropboard.group import (
    Ballot,
    GroupRanking,
    borda_scores,
    rank_by_points,
    ranking_to_document,
    validate_ballot,
)
from cropboard.model import ObjectiveTriple

DRAFT = "draft"
VOTING = "voting"
CLOSED = "closed"


class ServiceError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


@dataclass
class Alternative:
    id: str
    objectives: ObjectiveTriple
    plan: dict | None = None  # plan document, when imported from a front export


@dataclass
class Voter:
    voter_id: str
    weight: float
    token: str


@dataclass
class Session:
    id: str
    state: str = DRAFT
    alternatives: list[Alternative] = field(default_factory=list)
    voters: list[Voter] = field(default_factory=list)
    ballots: dict[str, Ballot] = field(default_factory=dict)
    result: GroupRanking | None = None

    def alternative_ids(self) -> list[str]:
        return [a.id for a in self.alternatives]

    def voter_by_token(self, token: str) -> Voter | None:
        for voter in self.voters:
            if secrets.compare_digest(voter.token, token):
                return voter
        return None


# ---------------------------------------------------------------------------
# event application (used for both live mutation and startup replay)


def _apply(session: Session, event: dict) -> None:
    kind = event["event"]
    if kind == "created":
        session.id = event["id"]
    elif kind == "alternatives_added":
        for raw in event["alternatives"]:
            session.alternatives.append(
                Alternative(
                    id=raw["id"],
                    objectives=ObjectiveTriple(**raw["objectives"]),
                    plan=raw.get("plan"),
                )
            )
    elif kind == "voter_registered":
        session.voters.append(
            Voter(
                voter_id=event["voter_id"],
                weight=float(event["weight"]),
                token=event["token"],
            )
        )
    elif kind == "voting_opened":
        session.state = VOTING
    elif kind == "ballot_submitted":
        voter = next(v for v in session.voters if v.voter_id == event["voter_id"])
        session.ballots[voter.voter_id] = Ballot(
            voter_id=voter.voter_id,
            weight=voter.weight,
            ranking=tuple(event["ranking"]),
        )
    elif kind == "closed":
        # the result is a pure function of alternatives and ballots, so
        # replay recomputes it instead of trusting a stored copy
        scores = borda_scores(
            set(session.alternative_ids()),
            [session.ballots[v.voter_id] for v in session.voters if v.voter_id in session.ballots],
        )
        session.result = rank_by_points(scores)
        session.state = CLOSED
    else:
        raise ServiceError("CORRUPT_LOG", f"unknown event kind {kind!r}")


def parse_alternatives_document(document: dict) -> list[dict]:
    """Normalize an import document into alternative records.

    Accepts a solution-front export (kind "pareto-front", entries carry
    plans) or a bare alternative list (kind "alternative-set").
    """
    if not isinstance(document, dict):
        raise ServiceError("INVALID_DOCUMENT", "expected a JSON object")
    kind = document.get("kind")
    if kind == "pareto-front":
        raw_entries = document.get("solutions", [])
        id_key = "label"
    elif kind == "alternative-set":
        raw_entries = document.get("alternatives", [])
        id_key = "id"
    else:
        raise ServiceError(
            "INVALID_DOCUMENT",
            f"expected kind pareto-front or alternative-set, got {kind!r}",
        )
    if not isinstance(raw_entries, list):
        raise ServiceError("INVALID_DOCUMENT", "entries must be a list")
    records = []
    for idx, raw in enumerate(raw_entries):
        where = f"entry {idx}"
        if not isinstance(raw, dict):
            raise ServiceError("INVALID_DOCUMENT", f"{where}: expected an object")
        alt_id = raw.get(id_key)
        if not isinstance(alt_id, str) or not alt_id:
            raise ServiceError("INVALID_DOCUMENT", f"{where}: missing {id_key}")
        objectives = raw.get("objectives")
        if not isinstance(objectives, dict):
            raise ServiceError("INVALID_DOCUMENT", f"{where}: missing objectives")
        try:
            triple = {
                "profit": float(objectives["profit"]),
                "waste": float(objectives["waste"]),
                "unmet": float(objectives["unmet"]),
            }
        except (KeyError, TypeError, ValueError):
            raise ServiceError(
                "INVALID_DOCUMENT", f"{where}: objectives need profit, waste, unmet"
            ) from None
        plan = raw.get("plan")
        if plan is not None and not isinstance(plan, dict):
            raise ServiceError("INVALID_DOCUMENT", f"{where}: plan must be an object")
        records.append({"id": alt_id, "objectives": triple, "plan": plan})
    return records


def _planted_summary(plan: dict | None) -> dict | None:
    """Planted-area totals per farmer and per variety from a plan document."""
    if plan is None:
        return None
    by_farmer: dict[str, float] = {}
    by_variety: dict[str, float] = {}
    total = 0.0
    for entry in plan.get("planted", []):
        area = float(entry.get("area", 0.0))
        if area <= 0:
            continue
        by_farmer[entry["farmer"]] = by_farmer.get(entry["farmer"], 0.0) + area
        by_variety[entry["variety"]] = by_variety.get(entry["variety"], 0.0) + area
        total += area
    return {
        "by_farmer": [
            {"farmer": k, "area": round(v, 6)} for k, v in sorted(by_farmer.items())
        ],
        "by_variety": [
            {"variety": k, "area": round(v, 6)} for k, v in sorted(by_variety.items())
        ],
        "total": round(total, 6),
    }


def session_summary(session: Session) -> dict:
    """Facilitator/voter view: no tokens, no ballot contents."""
    missing = [
        v.voter_id for v in session.voters if v.voter_id not in session.ballots
    ]
    doc = {
        "id": session.id,
        "state": session.state,
        "alternatives": [
            {
                "id": a.id,
                "objectives": a.objectives.as_dict(),
                "planted_summary": _planted_summary(a.plan),
            }
            for a in session.alternatives
        ],
        "voters": [
            {"voter_id": v.voter_id, "weight": v.weight} for v in session.voters
        ],
        "ballot_count": len(session.ballots),
        "missing_voters": sorted(missing),
        "result": ranking_to_document(session.result) if session.result else None,
    }
    return doc


def export_session(session: Session) -> dict:
    """Canonical snapshot for audit and durability checks; tokens excluded."""
    return {
        "schema_version": 1,
        "kind": "session-export",
        "id": session.id,
        "state": session.state,
        "alternatives": [
            {
                "id": a.id,
                "objectives": a.objectives.as_dict(),
                "plan": a.plan,
            }
            for a in session.alternatives
        ],
        "voters": [
            {"voter_id": v.voter_id, "weight": v.weight} for v in session.voters
        ],
        "ballots": [
            {"voter_id": voter_id, "ranking": list(ballot.ranking)}
            for voter_id, ballot in sorted(session.ballots.items())
        ],
        "result": ranking_to_document(session.result) if session.result else None,
    }


def export_text(session: Session) -> str:
    return json.dumps(export_session(session), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# store


class SessionStore:
    """All sessions under one state directory, one JSONL log per session."""

    def __init__(self, state_dir: str | Path):
        self.state_dir = Path(state_dir)
        try:
            self.state_dir.mkdir(parents=True, exist_ok=True)
            probe = self.state_dir / ".writable"
            probe.write_text("ok")
            probe.unlink()
        except OSError as exc:
            raise ServiceError(
                "STATE_DIR", f"state directory {self.state_dir} is not writable: {exc}"
            ) from None
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._store_lock = threading.Lock()
        for path in sorted(self.state_dir.glob("*.jsonl")):
            session = self._replay(path)
            self._sessions[session.id] = session
            self._locks[session.id] = threading.Lock()

    def _replay(self, path: Path) -> Session:
        session = Session(id=path.stem)
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    event = json.loads(line)
                except json.JSONDecodeError:
                    raise ServiceError(
                        "CORRUPT_LOG", f"{path.name}:{line_no}: not valid JSON"
                    ) from None
                _apply(session, event)
        return session

    def _append(self, session_id: str, event: dict) -> None:
        path = self.state_dir / f"{session_id}.jsonl"
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def _commit(self, session: Session, event: dict) -> None:
        # durability before visibility: the event hits disk, then memory
        self._append(session.id, event)
        _apply(session, event)

    def lock_for(self, session_id: str) -> threading.Lock:
        with self._store_lock:
            return self._locks[session_id]

    def session_ids(self) -> list[str]:
        with self._store_lock:
            return sorted(self._sessions)

    def get(self, session_id: str) -> Session:
        with self._store_lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise ServiceError("UNKNOWN_SESSION", f"no session {session_id!r}")
        return session

    # -- commands ----------------------------------------------------------

    def create_session(self) -> Session:
        with self._store_lock:
            while True:
                sid = uuid.uuid4().hex[:12]
                if sid not in self._sessions:
                    break
            session = Session(id=sid)
            self._sessions[sid] = session
            self._locks[sid] = threading.Lock()
        with self._locks[sid]:
            self._commit(session, {"event": "created", "id": sid})
        return session

    def add_alternatives(self, session_id: str, document: dict) -> Session:
        session = self.get(session_id)
        with self.lock_for(session_id):
            if session.state != DRAFT:
                raise ServiceError(
                    "WRONG_STATE", f"alternatives can only be added while drafting"
                )
            records = parse_alternatives_document(document)
            seen = set(session.alternative_ids())
            for record in records:
                if record["id"] in seen:
                    raise ServiceError(
                        "DUPLICATE", f"alternative {record['id']!r} already present"
                    )
                seen.add(record["id"])
            self._commit(
                session, {"event": "alternatives_added", "alternatives": records}
            )
        return session

    def register_voter(self, session_id: str, voter_id: str, weight) -> tuple[Session, str]:
        session = self.get(session_id)
        with self.lock_for(session_id):
            if session.state not in (DRAFT, VOTING):
                raise ServiceError("WRONG_STATE", "voting is already closed")
            if not isinstance(voter_id, str) or not voter_id:
                raise ServiceError("INVALID_DOCUMENT", "voter_id must be a non-empty string")
            if not isinstance(weight, (int, float)) or isinstance(weight, bool):
                raise ServiceError("NONPOSITIVE_WEIGHT", "weight must be a number > 0")
            if not weight > 0:
                raise ServiceError("NONPOSITIVE_WEIGHT", f"weight {weight!r} must be > 0")
            if any(v.voter_id == voter_id for v in session.voters):
                raise ServiceError("DUPLICATE_VOTER", f"voter {voter_id!r} already registered")
            token = secrets.token_urlsafe(16)
            self._commit(
                session,
                {
                    "event": "voter_registered",
                    "voter_id": voter_id,
                    "weight": float(weight),
                    "token": token,
                },
            )
        return session, token

    def open_voting(self, session_id: str) -> Session:
        session = self.get(session_id)
        with self.lock_for(session_id):
            if session.state != DRAFT:
                raise ServiceError("WRONG_STATE", "only a draft session can open voting")
            if len(session.alternatives) < 2:
                raise ServiceError(
                    "TOO_FEW_ALTERNATIVES", "voting needs at least 2 alternatives"
                )
            if not session.voters:
                raise ServiceError("NO_VOTERS", "voting needs at least 1 registered voter")
            self._commit(session, {"event": "voting_opened"})
        return session

    def submit_ballot(self, session_id: str, token: str, ranking) -> Session:
        session = self.get(session_id)
        with self.lock_for(session_id):
            if session.state != VOTING:
                raise ServiceError("WRONG_STATE", "ballots are only accepted while voting")
            if not isinstance(token, str):
                raise ServiceError("BAD_TOKEN", "token must be a string")
            voter = session.voter_by_token(token)
            if voter is None:
                raise ServiceError("BAD_TOKEN", "unrecognized access token")
            if not isinstance(ranking, (list, tuple)) or not all(
                isinstance(alt, str) for alt in ranking
            ):
                raise ServiceError("INVALID_BALLOT", "ranking must be a list of ids")
            ballot = Ballot(voter.voter_id, voter.weight, tuple(ranking))
            issues = validate_ballot(ballot, set(session.alternative_ids()))
            if issues:
                detail = "; ".join(f"{i.code}: {i.message}" for i in issues)
                raise ServiceError("INVALID_BALLOT", detail)
            self._commit(
                session,
                {
                    "event": "ballot_submitted",
                    "voter_id": voter.voter_id,
                    "ranking": list(ranking),
                },
            )
        return session

    def close_session(self, session_id: str, allow_missing: bool = False) -> Session:
        session = self.get(session_id)
        with self.lock_for(session_id):
            if session.state != VOTING:
                raise ServiceError("WRONG_STATE", "only a voting session can close")
            missing = [
                v.voter_id for v in session.voters if v.voter_id not in session.ballots
            ]
            if missing and not allow_missing:
                raise ServiceError(
                    "MISSING_BALLOTS", f"waiting on ballots from: {', '.join(sorted(missing))}"
                )
            self._commit(
                session, {"event": "closed", "allow_missing": bool(allow_missing)}
            )
        return session


# ---------------------------------------------------------------------------
# wire protocol


_STATUS_BY_CODE = {
    "UNKNOWN_SESSION": 404,
    "BAD_TOKEN": 403,
    "WRONG_STATE": 409,
    "DUPLICATE": 409,
    "DUPLICATE_VOTER": 409,
    "TOO_FEW_ALTERNATIVES": 409,
    "NO_VOTERS": 409,
    "MISSING_BALLOTS": 409,
    "NONPOSITIVE_WEIGHT": 400,
    "INVALID_BALLOT": 400,
    "INVALID_DOCUMENT": 400,
}


def create_app(store: SessionStore):
    """REST app over a session store.

    Endpoints (all JSON):
      POST /sessions                         -> create, returns summary
      GET  /sessions                         -> list of session ids
      GET  /sessions/{sid}                   -> summary (no tokens, no ballots)
      POST /sessions/{sid}/alternatives      -> body: front export or alternative-set
      POST /sessions/{sid}/voters            -> body: {voter_id, weight}; returns token
      POST /sessions/{sid}/open              -> draft -> voting
      POST /sessions/{sid}/ballots           -> body: {token, ranking}
      POST /sessions/{sid}/close             -> body: {allow_missing?}; computes result
      GET  /sessions/{sid}/result            -> group ranking (409 until closed)
      GET  /sessions/{sid}/export            -> canonical session snapshot
    """
    from fastapi import Body, FastAPI, Request
    from fastapi.middleware.cors import CORSMiddleware
    from fastapi.responses import JSONResponse

    app = FastAPI(title="cropboard sessions", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store

    @app.exception_handler(ServiceError)
    async def service_error(request: Request, exc: ServiceError):
        status = _STATUS_BY_CODE.get(exc.code, 400)
        return JSONResponse(
            status_code=status,
            content={"error": {"code": exc.code, "message": exc.message}},
        )

    @app.post("/sessions")
    def create_session():
        session = store.create_session()
        return session_summary(session)

    @app.get("/sessions")
    def list_sessions():
        return {"sessions": store.session_ids()}

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        return session_summary(store.get(sid))

    @app.post("/sessions/{sid}/alternatives")
    def add_alternatives(sid: str, document: dict = Body(...)):
        return session_summary(store.add_alternatives(sid, document))

    @app.post("/sessions/{sid}/voters")
    def register_voter(sid: str, body: dict = Body(...)):
        session, token = store.register_voter(
            sid, body.get("voter_id"), body.get("weight")
        )
        return {"voter_id": body.get("voter_id"), "token": token}

    @app.post("/sessions/{sid}/open")
    def open_voting(sid: str):
        return session_summary(store.open_voting(sid))

    @app.post("/sessions/{sid}/ballots")
    def submit_ballot(sid: str, body: dict = Body(...)):
        session = store.submit_ballot(sid, body.get("token"), body.get("ranking"))
        return {"ballot_count": len(session.ballots)}

    @app.post("/sessions/{sid}/close")
    def close_session(sid: str, body: dict | None = Body(None)):
        allow_missing = bool((body or {}).get("allow_missing", False))
        session = store.close_session(sid, allow_missing=allow_missing)
        return session_summary(session)

    @app.get("/sessions/{sid}/result")
    def get_result(sid: str):
        session = store.get(sid)
        if session.result is None:
            raise ServiceError("WRONG_STATE", "no result until the session closes")
        return ranking_to_document(session.result)

    @app.get("/sessions/{sid}/export")
    def get_export(sid: str):
        from fastapi.responses import Response

        text = export_text(store.get(sid))
        return Response(content=text, media_type="application/json")

    return app


def serve(state_dir: str | Path, host: str = "127.0.0.1", port: int = 8000) -> None:
    import uvicorn

    store = SessionStore(state_dir)
    uvicorn.run(create_app(store), host=host, port=port, log_level="warning")
