"""Provider-agnostic completion gateway.

Holds the prompt registry, the rising-temperature retry policy, token and
latency accounting, a deterministic fixture-playback mock provider, and an
OpenAI-compatible live adapter. The gateway never mutates scene state.
"""
from __future__ import annotations

import json
import os
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Optional, Protocol

from .scene import Scene

API_KEY_ENV = "CGASCENE_API_KEY"
FIXTURE_VERSION = 1

OUTPUT_KIND_BY_STRATEGY = {
    "simple_cga": "cga_json",
    "simple_cga_verbose": "cga_json",
    "shenlong_cga": "cga_json",
    "euclidean_mat4": "mat4_json",
    "compact_se3": "se3_json",
}

# Default per-strategy completion budgets (powered-suite settings).
DEFAULT_MAX_TOKENS = {
    "simple_cga": 600,
    "simple_cga_verbose": 600,
    "shenlong_cga": 600,
    "euclidean_mat4": 600,
    "compact_se3": 500,
}

# The verbose prompt variant appends one style line to the simple prompt;
# it nudges the model toward fully expanded displacement vectors.
_VERBOSE_SUFFIX = "\nStyle: write T() with all three components, e.g. T(2.0*e1 + 0.0*e2 + 0.0*e3)."


class GatewayError(RuntimeError):
    pass


class FixtureError(GatewayError):
    pass


@dataclass(frozen=True)
class PromptStrategy:
    name: str
    system_prompt: str
    output_kind: str
    max_tokens: int

    def __post_init__(self):
        if not self.system_prompt:
            raise ValueError("system prompt must be nonempty")
        if self.output_kind not in ("cga_json", "se3_json", "mat4_json"):
            raise ValueError(f"unknown output kind {self.output_kind!r}")


@dataclass(frozen=True)
class RetryPolicy:
    max_attempts: int = 3

    def __post_init__(self):
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")

    def temperature(self, attempt: int) -> float:
        return 0.1 + 0.05 * attempt


@dataclass(frozen=True)
class CompletionRecord:
    attempt_index: int
    raw_text: str
    prompt_tokens: int
    completion_tokens: int
    api_latency_s: float
    provider_id: str
    temperature: float
    error: Optional[str] = None


@dataclass(frozen=True)
class CompletionRequest:
    strategy_name: str
    system_prompt: str
    user_message: str
    instruction: str
    attempt: int
    temperature: float
    max_tokens: int


@dataclass(frozen=True)
class ProviderReply:
    text: str
    prompt_tokens: int = 0
    completion_tokens: int = 0
    latency_s: float = 0.0


class Provider(Protocol):
    provider_id: str

    def generate(self, request: CompletionRequest) -> ProviderReply: ...


@dataclass(frozen=True)
class CompletionOutcome:
    records: tuple[CompletionRecord, ...]
    success_index: Optional[int]

    @property
    def accepted(self) -> Optional[CompletionRecord]:
        if self.success_index is None:
            return None
        return self.records[self.success_index]


def _prompt_text(name: str) -> str:
    raw = resources.files("cgascene.data.prompts").joinpath(f"{name}.txt").read_text()
    return raw[:-1] if raw.endswith("\n") else raw


def load_strategies(max_tokens: Optional[dict[str, int]] = None) -> dict[str, PromptStrategy]:
    """The prompt registry: four canonical strategies plus the verbose
    variant of the simple prompt used by the ablation grid."""
    budgets = dict(DEFAULT_MAX_TOKENS)
    if max_tokens:
        budgets.update(max_tokens)
    simple = _prompt_text("simple_cga")
    texts = {
        "simple_cga": simple,
        "simple_cga_verbose": simple + _VERBOSE_SUFFIX,
        "shenlong_cga": _prompt_text("shenlong_cga"),
        "euclidean_mat4": _prompt_text("euclidean_mat4"),
        "compact_se3": _prompt_text("compact_se3"),
    }
    return {
        name: PromptStrategy(
            name=name,
            system_prompt=text,
            output_kind=OUTPUT_KIND_BY_STRATEGY[name],
            max_tokens=budgets[name],
        )
        for name, text in texts.items()
    }


def scene_context_render(scene: Scene, limit: Optional[int] = None) -> str:
    """Deterministic 'name shape color center size' listing, optionally
    truncated to the first `limit` objects."""
    lines = []
    for obj in scene.objects.values():
        if limit is not None and len(lines) >= limit:
            break
        cx, cy, cz = obj.center
        lines.append(f"{obj.name} {obj.shape} {obj.color} [{cx:g}, {cy:g}, {cz:g}] {obj.size:g}")
    return "\n".join(lines)


def render_user_message(scene_context: str, instruction: str) -> str:
    if scene_context:
        return f"Scene:\n{scene_context}\n\nInstruction: {instruction}"
    return f"Instruction: {instruction}"


def complete(
    provider: Provider,
    strategy: PromptStrategy,
    scene_context: str,
    instruction: str,
    policy: RetryPolicy,
    validator: Callable[[str], bool],
) -> CompletionOutcome:
    """Issue attempts until the validator accepts or the budget runs out.

    Every attempt is recorded (retry-aware cost accounting needs the failed
    ones too); transport failures become error records, not exceptions.
    """
    user_message = render_user_message(scene_context, instruction)
    records: list[CompletionRecord] = []
    success_index: Optional[int] = None
    for attempt in range(policy.max_attempts):
        temperature = policy.temperature(attempt)
        request = CompletionRequest(
            strategy_name=strategy.name,
            system_prompt=strategy.system_prompt,
            user_message=user_message,
            instruction=instruction,
            attempt=attempt,
            temperature=temperature,
            max_tokens=strategy.max_tokens,
        )
        started = time.perf_counter()
        try:
            reply = provider.generate(request)
        except Exception as exc:  # provider transport failure
            records.append(
                CompletionRecord(
                    attempt_index=attempt,
                    raw_text="",
                    prompt_tokens=0,
                    completion_tokens=0,
                    api_latency_s=time.perf_counter() - started,
                    provider_id=getattr(provider, "provider_id", "unknown"),
                    temperature=temperature,
                    error=str(exc),
                )
            )
            continue
        latency = reply.latency_s if reply.latency_s > 0 else time.perf_counter() - started
        records.append(
            CompletionRecord(
                attempt_index=attempt,
                raw_text=reply.text,
                prompt_tokens=reply.prompt_tokens,
                completion_tokens=reply.completion_tokens,
                api_latency_s=latency,
                provider_id=getattr(provider, "provider_id", "unknown"),
                temperature=temperature,
            )
        )
        if validator(reply.text):
            success_index = attempt
            break
    return CompletionOutcome(records=tuple(records), success_index=success_index)


# -- providers -----------------------------------------------------------------

class MockProvider:
    """Deterministic playback of a fixture file.

    Fixture schema (versioned):
        {"version": 1,
         "default": {"text": ..., "prompt_tokens": ..., "completion_tokens": ...,
                     "latency_s": ...},
         "responses": [{"strategy": ..., "instruction": ..., "attempt": 0?,
                        "text": ..., "prompt_tokens": ..., "completion_tokens": ...,
                        "latency_s": ...}, ...]}

    Lookup key is (strategy, instruction, attempt); entries without an
    attempt match any attempt. Unmatched queries play the default failure.
    """

    provider_id = "mock"

    def __init__(self, fixture_path: str):
        try:
            with open(fixture_path) as f:
                doc = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            raise FixtureError(f"cannot load fixture {fixture_path!r}: {exc}") from exc
        if not isinstance(doc, dict) or doc.get("version") != FIXTURE_VERSION:
            raise FixtureError(f"fixture {fixture_path!r} must declare version {FIXTURE_VERSION}")
        if "responses" not in doc or not isinstance(doc["responses"], list):
            raise FixtureError(f"fixture {fixture_path!r} is missing the responses list")
        self._exact: dict[tuple[str, str, int], ProviderReply] = {}
        self._any_attempt: dict[tuple[str, str], ProviderReply] = {}
        for i, entry in enumerate(doc["responses"]):
            try:
                reply = _reply_from_entry(entry)
                key = (entry["strategy"], entry["instruction"])
            except (KeyError, TypeError) as exc:
                raise FixtureError(f"fixture response #{i} is malformed: {exc}") from exc
            if "attempt" in entry:
                self._exact[(*key, int(entry["attempt"]))] = reply
            else:
                self._any_attempt[key] = reply
        default = doc.get("default", {"text": ""})
        self._default = _reply_from_entry(default)

    def generate(self, request: CompletionRequest) -> ProviderReply:
        key3 = (request.strategy_name, request.instruction, request.attempt)
        if key3 in self._exact:
            return self._exact[key3]
        key2 = (request.strategy_name, request.instruction)
        if key2 in self._any_attempt:
            return self._any_attempt[key2]
        return self._default


def _reply_from_entry(entry: dict) -> ProviderReply:
    return ProviderReply(
        text=entry["text"],
        prompt_tokens=int(entry.get("prompt_tokens", 0)),
        completion_tokens=int(entry.get("completion_tokens", 0)),
        latency_s=float(entry.get("latency_s", 0.0)),
    )


class OpenAICompatProvider:
    """Minimal chat-completions adapter for OpenAI-compatible endpoints."""

    def __init__(self, model: str, base_url: str = "https://api.openai.com/v1",
                 api_key_env: str = API_KEY_ENV, timeout_s: float = 60.0):
        self.model = model
        self.base_url = base_url.rstrip("/")
        self.api_key_env = api_key_env
        self.timeout_s = timeout_s
        self.provider_id = f"openai-compat:{model}"

    @property
    def api_key(self) -> Optional[str]:
        return os.environ.get(self.api_key_env)

    def generate(self, request: CompletionRequest) -> ProviderReply:
        key = self.api_key
        if not key:
            raise GatewayError(f"no API key in ${self.api_key_env}")
        payload = {
            "model": self.model,
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
            "messages": [
                {"role": "system", "content": request.system_prompt},
                {"role": "user", "content": request.user_message},
            ],
        }
        req = urllib.request.Request(
            f"{self.base_url}/chat/completions",
            data=json.dumps(payload).encode(),
            headers={"Content-Type": "application/json", "Authorization": f"Bearer {key}"},
        )
        started = time.perf_counter()
        try:
            with urllib.request.urlopen(req, timeout=self.timeout_s) as resp:
                body = json.load(resp)
        except (urllib.error.URLError, json.JSONDecodeError) as exc:
            raise GatewayError(f"provider request failed: {exc}") from exc
        latency = time.perf_counter() - started
        try:
            text = body["choices"][0]["message"]["content"]
            usage = body.get("usage", {})
        except (KeyError, IndexError, TypeError) as exc:
            raise GatewayError(f"unexpected provider response shape: {exc}") from exc
        return ProviderReply(
            text=text,
            prompt_tokens=int(usage.get("prompt_tokens", 0)),
            completion_tokens=int(usage.get("completion_tokens", 0)),
            latency_s=latency,
        )


@dataclass(frozen=True)
class GatewayConfig:
    """Provider selection; loaded from a JSON config file when given."""

    provider: str = "mock"  # mock | live
    model: str = "gpt-4o-mini"
    base_url: str = "https://api.openai.com/v1"
    api_key_env: str = API_KEY_ENV
    fixture_path: Optional[str] = None
    max_tokens: dict[str, int] = field(default_factory=dict)


def load_gateway_config(path: Optional[str] = None) -> GatewayConfig:
    if path is None:
        return GatewayConfig()
    with open(path) as f:
        doc = json.load(f)
    known = {"provider", "model", "base_url", "api_key_env", "fixture_path", "max_tokens"}
    unknown = set(doc) - known
    if unknown:
        raise GatewayError(f"unknown gateway config keys: {sorted(unknown)}")
    return GatewayConfig(**doc)


def make_provider(config: GatewayConfig) -> Provider:
    if config.provider == "mock":
        if not config.fixture_path:
            raise GatewayError("mock provider needs a fixture_path")
        return MockProvider(config.fixture_path)
    if config.provider == "live":
        return OpenAICompatProvider(
            model=config.model, base_url=config.base_url, api_key_env=config.api_key_env
        )
    raise GatewayError(f"unknown provider {config.provider!r}")
