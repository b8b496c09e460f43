"""Chat-completion gateway: uniform client, scripted mock, exchange log.

Both the HTTP client and the scripted mock present the same ``complete()``
surface and record every exchange in an append-only log, so any pipeline
built on top can be replayed offline byte-for-byte.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import httpx

TRANSCRIPT_HEADER = "# chat transcript v1"

ROLES = ("system", "user", "assistant")


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------


class GatewayError(Exception):
    code = "GatewayError"


class TransportError(GatewayError):
    code = "Transport"

    def __init__(self, status: int, body: str):
        super().__init__(f"transport failure: HTTP {status}: {body[:200]}")
        self.status = status
        self.body = body[:200]


class GatewayTimeoutError(GatewayError):
    code = "Timeout"


class RetriesExhaustedError(GatewayError):
    code = "RetriesExhausted"


class EmptyCompletionError(GatewayError):
    code = "EmptyCompletion"


class AmbiguousFixtureError(GatewayError):
    code = "AmbiguousFixture"


# ---------------------------------------------------------------------------
# Wire types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EndpointConfig:
    """Connection settings for one OpenAI-compatible chat endpoint.

    ``api_key_env`` names the environment variable holding the key; the key
    value itself never lands in configs, transcripts or logs. Temperature
    defaults to 0 so agent pipelines are reproducible.
    """

    base_url: str = "http://localhost:0"
    model_id: str = "scripted"
    api_key_env: str = "MINSTREL_API_KEY"
    temperature: float = 0.0
    max_output_tokens: int = 1024
    timeout_s: float = 60.0
    max_retries: int = 2

    def __post_init__(self):
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature must be within [0, 2]")
        if self.max_output_tokens <= 0:
            raise ValueError("max_output_tokens must be positive")
        if self.timeout_s <= 0:
            raise ValueError("timeout must be positive")
        if not 0 <= self.max_retries <= 5:
            raise ValueError("max_retries must be between 0 and 5")

    def snapshot(self) -> dict:
        return {
            "base_url": self.base_url,
            "model_id": self.model_id,
            "api_key_env": self.api_key_env,
            "temperature": self.temperature,
            "max_output_tokens": self.max_output_tokens,
        }

    @classmethod
    def from_dict(cls, data: dict) -> EndpointConfig:
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in data.items() if k in known})


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown role: {self.role}")
        if not self.content:
            raise ValueError("message content must be non-empty")

    def to_dict(self) -> dict:
        return {"role": self.role, "content": self.content}


@dataclass(frozen=True)
class ChatExchange:
    sequence_no: int
    request_messages: tuple[ChatMessage, ...]
    config: dict
    response: str
    latency_s: float = 0.0

    def to_record(self) -> dict:
        # latency is intentionally excluded: transcripts must be
        # byte-identical across replays of the same script
        return {
            "sequence_no": self.sequence_no,
            "request": {
                "config": self.config,
                "messages": [m.to_dict() for m in self.request_messages],
            },
            "response": self.response,
        }


class ExchangeLog:
    """Append-only, internally serialized record of completed exchanges."""

    def __init__(self):
        self._lock = threading.Lock()
        self._exchanges: list[ChatExchange] = []

    def append(self, messages: tuple[ChatMessage, ...], config: dict, response: str, latency_s: float) -> ChatExchange:
        with self._lock:
            exchange = ChatExchange(
                sequence_no=len(self._exchanges) + 1,
                request_messages=messages,
                config=config,
                response=response,
                latency_s=latency_s,
            )
            self._exchanges.append(exchange)
            return exchange

    def all(self) -> tuple[ChatExchange, ...]:
        with self._lock:
            return tuple(self._exchanges)

    def __len__(self) -> int:
        with self._lock:
            return len(self._exchanges)


def export_transcript(exchanges: list[ChatExchange] | tuple[ChatExchange, ...]) -> str:
    """Serialize exchanges deterministically, one JSON record per line."""
    lines = [TRANSCRIPT_HEADER]
    for exchange in exchanges:
        lines.append(
            json.dumps(exchange.to_record(), ensure_ascii=False, sort_keys=True, separators=(",", ":"))
        )
    return "\n".join(lines) + "\n"


def _validate_messages(messages: list[ChatMessage] | tuple[ChatMessage, ...]) -> tuple[ChatMessage, ...]:
    messages = tuple(messages)
    if not messages:
        raise ValueError("messages must be non-empty")
    if messages[0].role == "assistant":
        raise ValueError("the first message must come from system or user")
    return messages


# ---------------------------------------------------------------------------
# Gateways
# ---------------------------------------------------------------------------


class ChatGateway:
    """Shared base: exchange recording plus the ``complete`` entry point."""

    def __init__(self, config: EndpointConfig | None = None):
        self.config = config or EndpointConfig()
        self.exchanges = ExchangeLog()

    def complete(self, messages: list[ChatMessage] | tuple[ChatMessage, ...], config: EndpointConfig | None = None) -> str:
        messages = _validate_messages(messages)
        cfg = config or self.config
        started = time.monotonic()
        response = self._send(messages, cfg)
        if not response:
            raise EmptyCompletionError("the endpoint returned an empty completion")
        self.exchanges.append(messages, cfg.snapshot(), response, time.monotonic() - started)
        return response

    def call_count(self) -> int:
        return len(self.exchanges)

    def _send(self, messages: tuple[ChatMessage, ...], config: EndpointConfig) -> str:
        raise NotImplementedError


class HttpGateway(ChatGateway):
    """OpenAI-compatible chat-completions client over HTTPS JSON.

    Retries only transport failures and 5xx responses, with exponential
    backoff; schema problems in agent output are repaired one level up.
    """

    def __init__(
        self,
        config: EndpointConfig,
        api_key: str | None = None,
        transport: httpx.BaseTransport | None = None,
        backoff_base_s: float = 0.5,
    ):
        super().__init__(config)
        self._api_key = api_key
        self._client = httpx.Client(transport=transport, timeout=config.timeout_s)
        self._backoff_base_s = backoff_base_s

    def _resolve_key(self, config: EndpointConfig) -> str:
        if self._api_key is not None:
            return self._api_key
        import os

        return os.environ.get(config.api_key_env, "")

    def _send(self, messages: tuple[ChatMessage, ...], config: EndpointConfig) -> str:
        url = config.base_url.rstrip("/") + "/chat/completions"
        payload = {
            "model": config.model_id,
            "messages": [m.to_dict() for m in messages],
            "temperature": config.temperature,
            "max_tokens": config.max_output_tokens,
        }
        headers = {"Content-Type": "application/json"}
        key = self._resolve_key(config)
        if key:
            headers["Authorization"] = f"Bearer {key}"

        last_error: GatewayError | None = None
        for attempt in range(config.max_retries + 1):
            if attempt:
                time.sleep(self._backoff_base_s * (2 ** (attempt - 1)))
            try:
                response = self._client.post(url, json=payload, headers=headers)
            except httpx.TimeoutException as exc:
                last_error = GatewayTimeoutError(str(exc))
                continue
            except httpx.TransportError as exc:
                last_error = TransportError(0, str(exc))
                continue
            if response.status_code >= 500:
                last_error = TransportError(response.status_code, response.text)
                continue
            if response.status_code != 200:
                raise TransportError(response.status_code, response.text)
            try:
                body = response.json()
                text = body["choices"][0]["message"]["content"]
            except (KeyError, IndexError, ValueError) as exc:
                raise TransportError(response.status_code, f"malformed body: {exc}")
            return text or ""
        raise RetriesExhaustedError(
            f"gave up after {config.max_retries + 1} attempts: {last_error}"
        )


@dataclass
class Fixture:
    """One scripted response: substring-matched or positional."""

    response: str
    match: str | None = None
    used: bool = field(default=False, compare=False)


class ScriptedGateway(ChatGateway):
    """Deterministic scripted endpoint for offline replay.

    Fixtures are consumed once each. Substring matchers take precedence;
    if none matches, the first unused positional fixture answers. Two
    matching substring fixtures are ambiguous and refuse the call.
    """

    def __init__(self, fixtures: list[Fixture], name: str = "scripted"):
        super().__init__(EndpointConfig(model_id=f"scripted:{name}"))
        self._fixtures = list(fixtures)
        self._lock = threading.Lock()
        self.name = name

    @classmethod
    def from_responses(cls, responses: list[str], name: str = "scripted") -> ScriptedGateway:
        return cls([Fixture(response=r) for r in responses], name=name)

    @classmethod
    def from_pack(cls, pack: dict, name: str | None = None) -> ScriptedGateway:
        fixtures = [
            Fixture(response=entry["response"], match=entry.get("match"))
            for entry in pack["responses"]
        ]
        return cls(fixtures, name=name or pack.get("name", "pack"))

    @classmethod
    def from_pack_file(cls, path: str | Path) -> ScriptedGateway:
        path = Path(path)
        return cls.from_pack(json.loads(path.read_text(encoding="utf-8")), name=path.stem)

    def remaining(self) -> int:
        with self._lock:
            return sum(1 for f in self._fixtures if not f.used)

    def _send(self, messages: tuple[ChatMessage, ...], config: EndpointConfig) -> str:
        request_text = "\n".join(m.content for m in messages)
        with self._lock:
            matching = [
                f
                for f in self._fixtures
                if not f.used and f.match is not None and f.match in request_text
            ]
            if len(matching) > 1:
                raise AmbiguousFixtureError(
                    f"{len(matching)} substring fixtures match the request"
                )
            if matching:
                chosen = matching[0]
            else:
                positional = [f for f in self._fixtures if not f.used and f.match is None]
                if not positional:
                    raise EmptyCompletionError("the script has no fixture for this request")
                chosen = positional[0]
            chosen.used = True
            return chosen.response


def load_fixture_pack(path: str | Path) -> dict:
    """Read a fixture pack JSON file ({name, config?, responses[]})."""
    return json.loads(Path(path).read_text(encoding="utf-8"))
