"""Uniform chat-completion interface with retries and structured output.

Backends are pluggable: an HTTP adapter for real vendors and a scripted
stub for tests. The stub is a pure function of (model_id, messages), so
every orchestration built on it is reproducible.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Protocol

from . import schemas


class GatewayError(Exception):
    pass


class Timeout(GatewayError):
    pass


class RateLimited(GatewayError):
    pass


class BackendError(GatewayError):
    pass


class SchemaViolation(GatewayError):
    def __init__(self, schema_id: str, errors: list[str], raw: str) -> None:
        super().__init__(f"output failed schema {schema_id!r}: {errors[:3]}")
        self.schema_id = schema_id
        self.errors = errors
        self.raw = raw


RETRYABLE = (Timeout, RateLimited, BackendError)


@dataclass(frozen=True)
class ChatMessage:
    role: str  # "system" | "user"
    text: str

    def __post_init__(self) -> None:
        if self.role not in ("system", "user"):
            raise ValueError(f"unsupported role {self.role!r}")


@dataclass(frozen=True)
class ChatRequest:
    model_id: str
    messages: tuple[ChatMessage, ...]
    temperature: float = 0.0
    max_output_tokens: int = 4096

    def __post_init__(self) -> None:
        if not self.messages:
            raise ValueError("messages must be non-empty")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_output_tokens <= 0:
            raise ValueError("max_output_tokens must be positive")

    @property
    def prompt_text(self) -> str:
        return "\n".join(m.text for m in self.messages)


@dataclass(frozen=True)
class ModelPanel:
    model_ids: tuple[str, str, str, str, str]

    def __post_init__(self) -> None:
        if len(self.model_ids) != 5:
            raise ValueError("panel must have exactly 5 models")
        if len(set(self.model_ids)) != 5:
            raise ValueError("panel models must be distinct")


def prompt_hash(request: ChatRequest) -> str:
    h = hashlib.sha256()
    h.update(request.model_id.encode())
    for m in request.messages:
        h.update(b"\x00" + m.role.encode() + b"\x01" + m.text.encode())
    return h.hexdigest()


class Backend(Protocol):
    def complete(self, request: ChatRequest) -> str: ...


class ScriptedBackend:
    """Deterministic stub: a reply function of the request, plus optional
    scripted failures (fail the first N calls, or always)."""

    def __init__(
        self,
        reply: str | Callable[[ChatRequest], str],
        *,
        fail_first: int = 0,
        always_fail: bool = False,
        failure: Exception | None = None,
    ) -> None:
        self._reply = reply
        self.fail_first = fail_first
        self.always_fail = always_fail
        self.failure = failure or BackendError("scripted failure")
        self.calls = 0

    def complete(self, request: ChatRequest) -> str:
        self.calls += 1
        if self.always_fail or self.calls <= self.fail_first:
            raise self.failure
        if callable(self._reply):
            return self._reply(request)
        return self._reply


class FixtureBackend:
    """Replies read from a fixtures directory mapping prompt hash -> text.

    Each fixture file is named ``<sha256>.txt``. Unknown prompts raise,
    which keeps fixture drift loud instead of silently wrong.
    """

    def __init__(self, fixtures_dir: str | Path) -> None:
        self.fixtures_dir = Path(fixtures_dir)

    def complete(self, request: ChatRequest) -> str:
        path = self.fixtures_dir / f"{prompt_hash(request)}.txt"
        if not path.exists():
            raise BackendError(f"no fixture for prompt hash {prompt_hash(request)}")
        return path.read_text(encoding="utf-8")


class HttpBackend:
    """Adapter for an OpenAI-style chat completions endpoint."""

    def __init__(
        self,
        base_url: str,
        api_key: str = "",
        *,
        timeout: float = 60.0,
        client=None,
    ) -> None:
        import httpx

        self.base_url = base_url.rstrip("/")
        self.api_key = api_key
        self._client = client or httpx.Client(timeout=timeout)

    def complete(self, request: ChatRequest) -> str:
        import httpx

        payload = {
            "model": request.model_id,
            "messages": [{"role": m.role, "content": m.text} for m in request.messages],
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
        }
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            resp = self._client.post(
                f"{self.base_url}/chat/completions", json=payload, headers=headers
            )
        except httpx.TimeoutException as exc:
            raise Timeout(str(exc)) from exc
        except httpx.HTTPError as exc:
            raise BackendError(str(exc)) from exc
        if resp.status_code == 429:
            raise RateLimited(resp.text)
        if resp.status_code >= 500:
            raise BackendError(f"{resp.status_code}: {resp.text}")
        if resp.status_code >= 400:
            raise BackendError(f"{resp.status_code}: {resp.text}")
        return resp.json()["choices"][0]["message"]["content"]


def extract_json(text: str) -> str:
    """Strip prose and code fences around the first JSON object."""
    if "```" in text:
        for chunk in text.split("```")[1::2]:
            chunk = chunk.strip()
            if chunk.startswith("json"):
                chunk = chunk[4:].strip()
            if chunk.startswith("{"):
                text = chunk
                break
    start = text.find("{")
    if start == -1:
        raise ValueError("no JSON object found")
    depth = 0
    in_string = False
    escaped = False
    for i, ch in enumerate(text[start:], start):
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return text[start : i + 1]
    raise ValueError("unbalanced JSON object")


@dataclass
class RetryPolicy:
    max_attempts: int = 3
    backoff_base: float = 0.05
    sleep: Callable[[float], None] = time.sleep


class LLMGateway:
    def __init__(
        self,
        backends: dict[str, Backend] | Backend,
        *,
        retry: RetryPolicy | None = None,
        schema_retries: int = 2,
        max_concurrency: int = 8,
    ) -> None:
        self._backends = backends
        self.retry = retry or RetryPolicy()
        self.schema_retries = schema_retries
        self._sem = threading.Semaphore(max_concurrency)

    def _backend_for(self, model_id: str) -> Backend:
        if isinstance(self._backends, dict):
            try:
                return self._backends[model_id]
            except KeyError:
                raise BackendError(f"no backend configured for {model_id!r}") from None
        return self._backends

    def complete(self, request: ChatRequest) -> str:
        backend = self._backend_for(request.model_id)
        last: Exception | None = None
        for attempt in range(self.retry.max_attempts):
            try:
                with self._sem:
                    return backend.complete(request)
            except RETRYABLE as exc:
                last = exc
                if attempt + 1 < self.retry.max_attempts:
                    self.retry.sleep(self.retry.backoff_base * (2**attempt))
        assert last is not None
        raise last

    def complete_structured(self, request: ChatRequest, schema_id: str) -> dict:
        if schema_id not in schemas.SCHEMAS:
            raise KeyError(f"unknown schema {schema_id!r}")
        current = request
        raw = ""
        errors: list[str] = ["no output"]
        for _ in range(self.schema_retries + 1):
            raw = self.complete(current)
            try:
                document = json.loads(extract_json(raw))
            except ValueError as exc:
                errors = [str(exc)]
            else:
                errors = schemas.validate(schema_id, document)
                if not errors:
                    return document
            corrective = ChatMessage(
                role="user",
                text=(
                    "Your previous output was not valid against the required "
                    f"JSON schema: {errors[:3]}. Return ONLY a corrected JSON "
                    "object, no extra text."
                ),
            )
            current = ChatRequest(
                model_id=request.model_id,
                messages=current.messages + (corrective,),
                temperature=request.temperature,
                max_output_tokens=request.max_output_tokens,
            )
        raise SchemaViolation(schema_id, errors, raw)
