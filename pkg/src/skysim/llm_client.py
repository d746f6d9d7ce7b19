"""Chat-completion backends: live HTTP, record/replay cassette, and scripted.

The pipeline only ever sees the returned assistant text, so backends are
interchangeable.  Replay runs are bit-reproducible: a request is keyed by a
content hash of everything that could influence the reply, and a missing key
fails loudly instead of silently hitting the network.

Cassette format (documented for interoperability): JSON lines.  The first
line is a header ``{"cassette_version": 1}``; every following line is one
record ``{"key", "request", "response", "timestamp"}`` where ``request``
holds digest fields (model, params, text hashes) for human inspection only —
the ``key`` alone identifies a request.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

CASSETTE_VERSION = 1


class BackendError(RuntimeError):
    """Transport-level failure surfaced after retries."""


class ReplayMissError(BackendError):
    """The replay store has no entry for this request."""


class ScriptExhaustedError(BackendError):
    """A scripted backend ran out of queued replies."""


class CassetteFormatError(ValueError):
    pass


@dataclass(frozen=True)
class CompletionParams:
    temperature: float = 0.0
    max_tokens: int | None = None
    seed: int | None = None

    def as_dict(self) -> dict:
        return {"temperature": self.temperature, "max_tokens": self.max_tokens, "seed": self.seed}


@dataclass(frozen=True)
class CompletionRequest:
    """One chat completion call: system prompt plus alternating messages."""

    system: str
    messages: tuple[tuple[str, str], ...]
    model: str = "offline"
    params: CompletionParams = field(default_factory=CompletionParams)

    def __post_init__(self):
        if not self.system.strip():
            raise ValueError("system prompt must not be empty")
        if not self.messages:
            raise ValueError("at least one user message is required")
        for i, (role, _text) in enumerate(self.messages):
            expected = "user" if i % 2 == 0 else "assistant"
            if role != expected:
                raise ValueError(
                    f"message roles must alternate user/assistant; position {i} is {role!r}"
                )
        if self.messages[-1][0] != "user":
            raise ValueError("the last message must be from the user")


def replay_key(request: CompletionRequest) -> str:
    """Content hash; any byte difference in the request changes the key."""
    canonical = json.dumps(
        {
            "system": request.system,
            "messages": [list(m) for m in request.messages],
            "model": request.model,
            "params": request.params.as_dict(),
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


class Backend:
    """Interface: turn a CompletionRequest into assistant text."""

    def complete(self, request: CompletionRequest) -> str:
        raise NotImplementedError


def complete(request: CompletionRequest, backend: Backend) -> str:
    return backend.complete(request)


class ScriptedBackend(Backend):
    """Returns queued replies in order; used for deterministic tests."""

    def __init__(self, replies=()):
        self.queue = deque(replies)
        self.requests: list[CompletionRequest] = []

    def push(self, *replies: str) -> None:
        self.queue.extend(replies)

    def complete(self, request: CompletionRequest) -> str:
        self.requests.append(request)
        if not self.queue:
            raise ScriptExhaustedError("scripted backend has no reply queued for this request")
        return self.queue.popleft()


class HttpBackend(Backend):
    """OpenAI-compatible chat-completions endpoint over HTTPS.

    Network and timeout errors are retried with exponential backoff (max 3
    attempts); HTTP error statuses are surfaced immediately.
    """

    def __init__(
        self,
        endpoint: str,
        api_key_env: str = "SKYSIM_API_KEY",
        timeout: float = 60.0,
        max_attempts: int = 3,
        post=None,
        sleep=time.sleep,
    ):
        self.endpoint = endpoint
        self.api_key_env = api_key_env
        self.timeout = timeout
        self.max_attempts = max_attempts
        self._post = post or self._requests_post
        self._sleep = sleep

    def _requests_post(self, payload: dict) -> dict:
        import requests

        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        try:
            resp = requests.post(self.endpoint, json=payload, headers=headers, timeout=self.timeout)
        except (requests.ConnectionError, requests.Timeout) as exc:
            raise TimeoutError(str(exc)) from exc
        if resp.status_code >= 400:
            raise BackendError(f"HTTP {resp.status_code} from {self.endpoint}: {resp.text[:500]}")
        return resp.json()

    def complete(self, request: CompletionRequest) -> str:
        payload = {
            "model": request.model,
            "messages": [{"role": "system", "content": request.system}]
            + [{"role": role, "content": text} for role, text in request.messages],
            "temperature": request.params.temperature,
        }
        if request.params.max_tokens is not None:
            payload["max_tokens"] = request.params.max_tokens
        if request.params.seed is not None:
            payload["seed"] = request.params.seed
        delay = 1.0
        last_exc: Exception | None = None
        for attempt in range(self.max_attempts):
            try:
                data = self._post(payload)
                break
            except BackendError:
                raise
            except (TimeoutError, ConnectionError, OSError) as exc:
                last_exc = exc
                if attempt + 1 < self.max_attempts:
                    self._sleep(delay)
                    delay *= 2
        else:
            raise BackendError(
                f"request failed after {self.max_attempts} attempts: {last_exc}"
            ) from last_exc
        try:
            return data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise BackendError(f"malformed completion response: {data!r}") from exc


class CassetteStore:
    """Append-friendly persistent map from replay key to response text.

    Writes are serialized by a lock (single-writer guarantee); reads are
    lock-free on the already-loaded dict.
    """

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self.entries: dict[str, str] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key: str) -> bool:
        return key in self.entries

    @classmethod
    def load(cls, path: str | Path) -> "CassetteStore":
        store = cls(path)
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        if not lines:
            raise CassetteFormatError(f"{path}: empty cassette (missing version header)")
        header = json.loads(lines[0])
        version = header.get("cassette_version")
        if version != CASSETTE_VERSION:
            raise CassetteFormatError(
                f"{path}: cassette_version {version!r}, expected {CASSETTE_VERSION}"
            )
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                store.entries[record["key"]] = record["response"]
            except (json.JSONDecodeError, KeyError) as exc:
                raise CassetteFormatError(f"{path}:{lineno}: bad cassette record") from exc
        return store

    def save(self, path: str | Path | None = None) -> None:
        target = Path(path) if path is not None else self.path
        if target is None:
            raise ValueError("no cassette path configured")
        with self._lock:
            lines = [json.dumps({"cassette_version": CASSETTE_VERSION})]
            lines.extend(
                json.dumps({"key": k, "response": v}, sort_keys=True)
                for k, v in sorted(self.entries.items())
            )
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text("\n".join(lines) + "\n", encoding="utf-8")
        self.path = target

    def record(self, request: CompletionRequest, response: str) -> str:
        key = replay_key(request)
        line = json.dumps(
            {
                "key": key,
                "request": {
                    "model": request.model,
                    "params": request.params.as_dict(),
                    "system_sha": _digest(request.system),
                    "messages_sha": _digest(json.dumps([list(m) for m in request.messages])),
                },
                "response": response,
                "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            },
            sort_keys=True,
        )
        with self._lock:
            first = not self.entries and (self.path is None or not self.path.exists())
            self.entries[key] = response
            if self.path is not None:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.path, "a", encoding="utf-8") as fh:
                    if first:
                        fh.write(json.dumps({"cassette_version": CASSETTE_VERSION}) + "\n")
                    fh.write(line + "\n")
        return key


class ReplayBackend(Backend):
    """Serves recorded replies; optionally records misses through a live backend.

    Without a live delegate a miss raises ReplayMissError — replay runs never
    fall through to the network.
    """

    def __init__(self, store: CassetteStore, live: Backend | None = None):
        self.store = store
        self.live = live

    def complete(self, request: CompletionRequest) -> str:
        key = replay_key(request)
        if key in self.store.entries:
            return self.store.entries[key]
        if self.live is None:
            raise ReplayMissError(
                f"no recorded reply for request {key[:12]}… (model={request.model}); "
                "re-record the cassette or run with a live backend"
            )
        response = self.live.complete(request)
        self.store.record(request, response)
        return response
