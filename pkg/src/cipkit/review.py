"""Human-review store and HTTP service for paraphrase pairs.

State lives in two plain files: the pair dataset (JSONL) and an append-only
mutation log (JSONL, one record per accepted revision or approval). The
in-memory store is always dataset + replayed log, so reloading after a crash
reproduces the exact pre-crash state. Each pair carries a version counter
for optimistic concurrency: a mutation must cite the version it read and is
rejected on mismatch.
"""
from __future__ import annotations

import json
import logging
import os
import threading
from datetime import datetime, timezone
from pathlib import Path

from pydantic import BaseModel

from .lexicon import IdiomLexicon, detect_idioms
from .pseudo import (
    STATUS_APPROVED,
    STATUS_FLAGGED,
    STATUS_REVISED,
    STATUSES,
    CipPair,
    Revision,
    read_cip_pairs,
)

logger = logging.getLogger(__name__)


class UnknownPairError(KeyError):
    """No pair with the requested id."""


class VersionConflictError(Exception):
    """The cited version is stale; carries the current pair."""

    def __init__(self, current: CipPair):
        super().__init__(f"version conflict on pair {current.id!r}: current version is {current.version}")
        self.current = current


class RevisionRejected(ValueError):
    """The submitted target failed validation; carries detected idioms."""

    def __init__(self, message: str, idioms: list[str] | None = None):
        super().__init__(message)
        self.idioms = idioms or []


class StoreError(RuntimeError):
    """The dataset or log file is unusable."""


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


class ReviewStore:
    """Reviewable pair collection backed by a dataset file plus mutation log."""

    def __init__(self, dataset_path: str | Path, log_path: str | Path,
                 lexicon: IdiomLexicon):
        self.dataset_path = Path(dataset_path)
        self.log_path = Path(log_path)
        self.lexicon = lexicon
        self._lock = threading.Lock()
        self._pairs: dict[str, CipPair] = {}
        self._next_seq = 1
        self._load()

    def _load(self) -> None:
        for pair in read_cip_pairs(self.dataset_path):
            if pair.id in self._pairs:
                raise StoreError(f"duplicate pair id in dataset: {pair.id!r}")
            self._pairs[pair.id] = pair
        if self.log_path.exists():
            self._replay_log()

    def _replay_log(self) -> None:
        with open(self.log_path, encoding="utf-8") as handle:
            lines = handle.read().splitlines()
        for index, line in enumerate(lines):
            if not line.strip():
                continue
            try:
                entry = json.loads(line)
            except json.JSONDecodeError as exc:
                if index == len(lines) - 1:
                    # A crash mid-append can truncate the final record; it was
                    # never acknowledged, so dropping it is safe.
                    logger.warning("dropping truncated final log record in %s", self.log_path)
                    break
                raise StoreError(f"{self.log_path}:{index + 1}: corrupt log record") from exc
            self._apply_entry(entry, index + 1)

    def _apply_entry(self, entry: dict, lineno: int) -> None:
        seq = entry.get("seq")
        if seq != self._next_seq:
            raise StoreError(f"{self.log_path}:{lineno}: log sequence gap "
                             f"(expected {self._next_seq}, found {seq})")
        pair = self._pairs.get(entry.get("pair_id"))
        if pair is None:
            raise StoreError(f"{self.log_path}:{lineno}: log references unknown pair "
                             f"{entry.get('pair_id')!r}")
        action = entry.get("action")
        if action == "revise":
            pair.revisions.append(Revision(
                timestamp=entry["ts"], annotator=entry["annotator"],
                old_target=entry["old_target"], new_target=entry["new_target"]))
            pair.target = entry["new_target"]
            pair.status = entry["new_status"]
        elif action == "approve":
            pair.status = STATUS_APPROVED
        else:
            raise StoreError(f"{self.log_path}:{lineno}: unknown log action {action!r}")
        pair.version += 1
        self._next_seq += 1

    def _append_log(self, entry: dict) -> None:
        line = json.dumps(entry, ensure_ascii=False)
        with open(self.log_path, "a", encoding="utf-8") as handle:
            handle.write(line + "\n")
            handle.flush()
            os.fsync(handle.fileno())

    # -- queries ---------------------------------------------------------

    def get(self, pair_id: str) -> CipPair:
        try:
            return self._pairs[pair_id]
        except KeyError:
            raise UnknownPairError(pair_id) from None

    def list_pairs(self, status: str | None = None, offset: int = 0,
                   limit: int = 50) -> tuple[list[CipPair], int]:
        """One stable-ordered page (by pair id) and the filtered total."""
        if offset < 0 or limit < 1:
            raise ValueError("offset must be >= 0 and limit >= 1")
        if status is not None and status not in STATUSES:
            raise ValueError(f"unknown status filter: {status!r}")
        matching = [pair for _, pair in sorted(self._pairs.items())
                    if status is None or pair.status == status]
        return matching[offset:offset + limit], len(matching)

    def status_counts(self) -> dict[str, int]:
        counts = {status: 0 for status in STATUSES}
        for pair in self._pairs.values():
            counts[pair.status] += 1
        counts["total"] = len(self._pairs)
        return counts

    # -- mutations -------------------------------------------------------

    def submit_revision(self, pair_id: str, new_target: str, annotator: str,
                        version: int, force: bool = False) -> CipPair:
        """Replace a pair's target after idiom validation.

        Force pushes an idiom-containing target through but leaves the pair
        flagged instead of revised.
        """
        with self._lock:
            pair = self.get(pair_id)
            if version != pair.version:
                raise VersionConflictError(pair)
            if not new_target.strip():
                raise RevisionRejected("revision target must not be empty")
            found = [occ.text for occ in detect_idioms(new_target, self.lexicon)]
            if found and not force:
                raise RevisionRejected("revision target still contains idioms", idioms=found)
            new_status = STATUS_FLAGGED if found else STATUS_REVISED
            entry = {
                "seq": self._next_seq,
                "ts": _utc_now(),
                "action": "revise",
                "pair_id": pair_id,
                "annotator": annotator,
                "old_target": pair.target,
                "new_target": new_target,
                "force": force,
                "new_status": new_status,
            }
            self._append_log(entry)
            self._apply_entry(entry, -1)
            return pair

    def approve(self, pair_id: str, annotator: str, version: int) -> CipPair:
        """Mark a clean pair approved; approving twice is a logged-once no-op."""
        with self._lock:
            pair = self.get(pair_id)
            if pair.status == STATUS_APPROVED:
                return pair
            if version != pair.version:
                raise VersionConflictError(pair)
            if pair.status == STATUS_FLAGGED:
                raise RevisionRejected("flagged pairs must be revised before approval")
            found = [occ.text for occ in detect_idioms(pair.target, self.lexicon)]
            if found:
                raise RevisionRejected("target still contains idioms", idioms=found)
            entry = {
                "seq": self._next_seq,
                "ts": _utc_now(),
                "action": "approve",
                "pair_id": pair_id,
                "annotator": annotator,
            }
            self._append_log(entry)
            self._apply_entry(entry, -1)
            return pair

    # -- export ----------------------------------------------------------

    def export(self, path: str | Path, include_revised: bool = False) -> int:
        """Write finalized pairs as JSONL; returns the number written.

        Output is ordered by pair id and carries only the reviewed fields,
        so identical store states export byte-identical files.
        """
        wanted = {STATUS_APPROVED, STATUS_REVISED} if include_revised else {STATUS_APPROVED}
        written = 0
        with open(path, "w", encoding="utf-8") as handle:
            for _, pair in sorted(self._pairs.items()):
                if pair.status not in wanted:
                    continue
                record = {
                    "id": pair.id,
                    "source": pair.source,
                    "target": pair.target,
                    "idioms": [occ.to_dict() for occ in pair.idioms],
                }
                handle.write(json.dumps(record, ensure_ascii=False) + "\n")
                written += 1
        return written


# request bodies live at module scope so deferred annotations resolve
class RevisionBody(BaseModel):
    target: str
    annotator: str
    version: int
    force: bool = False


class ApproveBody(BaseModel):
    annotator: str
    version: int


def create_app(store: ReviewStore):
    """FastAPI application exposing the review API over the given store."""
    from fastapi import FastAPI, Query, Request
    from fastapi.middleware.cors import CORSMiddleware
    from fastapi.responses import JSONResponse

    app = FastAPI(title="cipkit review service")
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])

    @app.exception_handler(UnknownPairError)
    async def _unknown_pair(_: Request, exc: UnknownPairError):
        return JSONResponse(status_code=404, content={"error": f"unknown pair: {exc.args[0]}"})

    @app.exception_handler(VersionConflictError)
    async def _conflict(_: Request, exc: VersionConflictError):
        return JSONResponse(status_code=409,
                            content={"error": str(exc), "current": exc.current.to_dict()})

    @app.exception_handler(RevisionRejected)
    async def _rejected(_: Request, exc: RevisionRejected):
        return JSONResponse(status_code=422, content={"error": str(exc), "idioms": exc.idioms})

    @app.get("/api/pairs")
    def list_pairs(status: str | None = None, offset: int = Query(0, ge=0),
                   limit: int = Query(50, ge=1, le=500)):
        try:
            page, total = store.list_pairs(status=status, offset=offset, limit=limit)
        except ValueError as exc:
            return JSONResponse(status_code=400, content={"error": str(exc)})
        return {"pairs": [pair.to_dict() for pair in page], "total": total}

    @app.get("/api/pairs/{pair_id}")
    def get_pair(pair_id: str):
        return store.get(pair_id).to_dict()

    @app.post("/api/pairs/{pair_id}/revision")
    def submit_revision(pair_id: str, body: RevisionBody):
        pair = store.submit_revision(pair_id, body.target, body.annotator,
                                     body.version, body.force)
        return pair.to_dict()

    @app.post("/api/pairs/{pair_id}/approve")
    def approve(pair_id: str, body: ApproveBody):
        return store.approve(pair_id, body.annotator, body.version).to_dict()

    @app.get("/api/stats")
    def stats():
        return store.status_counts()

    @app.get("/api/lexicon/check")
    def lexicon_check(text: str = ""):
        return {"idioms": [occ.to_dict() for occ in detect_idioms(text, store.lexicon)]}

    return app


def serve(dataset: str | Path, log: str | Path, lexicon: IdiomLexicon,
          host: str = "127.0.0.1", port: int = 8000,
          ui_dir: str | Path | None = None) -> None:
    """Run the review service with uvicorn (blocking)."""
    import uvicorn

    store = ReviewStore(dataset, log, lexicon)
    app = create_app(store)
    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    uvicorn.run(app, host=host, port=port)
