"""Stateful interactive editing sessions over HTTP.

Each session owns a scene snapshot and an instruction history. Instructions
route through the keyword engine first; novel instructions go to the model
when a provider is attached, with a template fallback otherwise. Failed
instructions never change the scene. Per-session mutation is serialized;
sessions are independent.
"""
from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import cga_expr, evaluation, gateway, templates
from .cga_expr import EditRequest
from .scene import Scene, default_scene, scene_from_document, scene_to_document


@dataclass
class StepRecord:
    index: int
    instruction: str
    route: str
    matched_keyword: Optional[str]
    strategy: str
    request_text: str
    parse_ok: bool
    tokens: dict
    latency: dict
    before_revision: int
    after_revision: int

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "instruction": self.instruction,
            "route": self.route,
            "matched_keyword": self.matched_keyword,
            "strategy": self.strategy,
            "request_text": self.request_text,
            "verdict": {"parse_ok": self.parse_ok},
            "tokens": self.tokens,
            "latency": self.latency,
            "before_revision": self.before_revision,
            "after_revision": self.after_revision,
        }


@dataclass
class Session:
    id: str
    strategy: str
    scene: Scene
    history: list[StepRecord] = field(default_factory=list)
    undo_stack: list[Scene] = field(default_factory=list)
    created_at: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock)


class InstructionFailure(Exception):
    def __init__(self, message: str, route: str):
        super().__init__(message)
        self.route = route


class SessionEngine:
    """Session store plus the routing/execution logic."""

    def __init__(self, provider: Optional[gateway.Provider] = None,
                 policy: Optional[gateway.RetryPolicy] = None,
                 journal_path: Optional[str] = None):
        self.provider = provider
        self.policy = policy or gateway.RetryPolicy(max_attempts=3)
        self.strategies = gateway.load_strategies()
        self.sessions: dict[str, Session] = {}
        self._registry_lock = threading.Lock()
        self._journal_path = Path(journal_path) if journal_path else None
        self._journal_lock = threading.Lock()

    @property
    def llm_available(self) -> bool:
        if self.provider is None:
            return False
        key_getter = getattr(type(self.provider), "api_key", None)
        if key_getter is not None:
            return self.provider.api_key is not None
        return True

    def create_session(self, strategy: str, fixture: Optional[dict] = None) -> Session:
        if strategy not in self.strategies:
            raise KeyError(f"unknown strategy {strategy!r}")
        scene = scene_from_document(fixture) if fixture else default_scene()
        session = Session(id=uuid.uuid4().hex, strategy=strategy, scene=scene)
        with self._registry_lock:
            self.sessions[session.id] = session
        return session

    def get_session(self, session_id: str) -> Session:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise KeyError(f"unknown session {session_id!r}") from None

    def apply_instruction(self, session_id: str, instruction: str) -> StepRecord:
        session = self.get_session(session_id)
        with session.lock:
            decision = templates.route(instruction, self.llm_available)
            t0 = time.perf_counter()
            api_s = 0.0
            tokens = {"prompt": 0, "completion": 0}
            if decision.route in ("template", "fallback_template"):
                try:
                    request = templates.template_request(instruction, session.scene)
                except templates.TemplateError as exc:
                    raise InstructionFailure(str(exc), decision.route) from exc
                request_text = json.dumps(request.assignments)
                parsed = request
            else:
                strategy = self.strategies[session.strategy]
                context = gateway.scene_context_render(session.scene)
                outcome = gateway.complete(
                    self.provider, strategy, context, instruction, self.policy,
                    validator=lambda text: evaluation.check_parse(
                        text, strategy.output_kind).parse_ok,
                )
                api_s = sum(rec.api_latency_s for rec in outcome.records)
                tokens = {
                    "prompt": sum(rec.prompt_tokens for rec in outcome.records),
                    "completion": sum(rec.completion_tokens for rec in outcome.records),
                }
                accepted = outcome.accepted
                if accepted is None:
                    raise InstructionFailure(
                        "model produced no parse-valid output within the retry budget",
                        decision.route,
                    )
                request_text = accepted.raw_text
                parsed = evaluation.check_parse(request_text, strategy.output_kind).request
            parse_t0 = time.perf_counter()
            try:
                scene_after = self._execute(session.scene, parsed)
            except Exception as exc:
                raise InstructionFailure(f"execution failed: {exc}", decision.route) from exc
            parse_execute_s = time.perf_counter() - parse_t0
            render_t0 = time.perf_counter()
            scene_to_document(scene_after)
            render_ready_s = time.perf_counter() - render_t0
            step = StepRecord(
                index=len(session.history),
                instruction=instruction,
                route=decision.route,
                matched_keyword=decision.matched_keyword,
                strategy=session.strategy,
                request_text=request_text,
                parse_ok=True,
                tokens=tokens,
                latency={
                    "api_s": api_s,
                    "parse_execute_s": parse_execute_s,
                    "render_ready_s": render_ready_s,
                    "total_s": time.perf_counter() - t0,
                },
                before_revision=session.scene.revision,
                after_revision=scene_after.revision,
            )
            session.undo_stack.append(session.scene)
            session.scene = scene_after
            session.history.append(step)
            self._journal(session, step)
            return step

    def _execute(self, scene: Scene, parsed) -> Scene:
        if isinstance(parsed, EditRequest):
            result = cga_expr.execute_request(scene, parsed)
            failed = [f"{name}: {st.error}" for name, st in result.statuses.items() if not st.ok]
            if failed:
                raise InstructionFailure("; ".join(failed), "execute")
            return result.scene
        return evaluation.execute_parsed(scene, parsed)

    def undo(self, session_id: str) -> Scene:
        session = self.get_session(session_id)
        with session.lock:
            if not session.undo_stack:
                raise InstructionFailure("nothing to undo", "undo")
            session.scene = session.undo_stack.pop()
            session.history.pop()
            return session.scene

    def _journal(self, session: Session, step: StepRecord) -> None:
        if self._journal_path is None:
            return
        with self._journal_lock:
            with self._journal_path.open("a") as f:
                f.write(json.dumps({"session": session.id, **step.to_json()}) + "\n")


# -- HTTP layer -------------------------------------------------------------------

class CreateSessionBody(BaseModel):
    strategy: str = "simple_cga"
    fixture: Optional[dict] = None


class InstructionBody(BaseModel):
    instruction: str


def create_app(engine: Optional[SessionEngine] = None) -> FastAPI:
    engine = engine or SessionEngine()
    app = FastAPI(title="cgascene session service")
    app.state.engine = engine
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        try:
            session = engine.create_session(body.strategy, body.fixture)
        except (KeyError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"id": session.id, "scene": scene_to_document(session.scene)}

    @app.post("/sessions/{session_id}/instructions")
    def apply_instruction(session_id: str, body: InstructionBody):
        try:
            step = engine.apply_instruction(session_id, body.instruction)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except InstructionFailure as exc:
            return {
                "ok": False,
                "error": str(exc),
                "route": exc.route,
                "scene": scene_to_document(engine.get_session(session_id).scene),
            }
        session = engine.get_session(session_id)
        return {"ok": True, "scene": scene_to_document(session.scene), "step": step.to_json()}

    @app.get("/sessions/{session_id}/scene")
    def get_scene(session_id: str):
        try:
            session = engine.get_session(session_id)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return scene_to_document(session.scene)

    @app.get("/sessions/{session_id}/history")
    def get_history(session_id: str):
        try:
            session = engine.get_session(session_id)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {"steps": [step.to_json() for step in session.history]}

    @app.post("/sessions/{session_id}/undo")
    def undo(session_id: str):
        try:
            scene = engine.undo(session_id)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except InstructionFailure as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return {"scene": scene_to_document(scene)}

    return app


def main() -> None:
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(description="Run the session service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8023)
    parser.add_argument("--provider", choices=["none", "mock", "live"], default="none")
    parser.add_argument("--fixture", default=None, help="mock fixture path")
    parser.add_argument("--model", default="gpt-4o-mini")
    parser.add_argument("--journal", default=None, help="instruction journal path")
    args = parser.parse_args()

    provider = None
    if args.provider == "mock":
        if not args.fixture:
            parser.error("--provider mock needs --fixture")
        provider = gateway.MockProvider(args.fixture)
    elif args.provider == "live":
        provider = gateway.OpenAICompatProvider(model=args.model)
    engine = SessionEngine(provider=provider, journal_path=args.journal)
    uvicorn.run(create_app(engine), host=args.host, port=args.port, log_level="warning")


if __name__ == "__main__":
    main()
