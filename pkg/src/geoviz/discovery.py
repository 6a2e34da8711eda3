"""Similarity-based link discovery between unassociated entities.

Entities are rendered to a canonical text, embedded by a pluggable
provider, and compared with cosine similarity; unlinked pairs scoring at or
above a threshold become candidate links (displayed as dashed edges, never
persisted). Two providers ship: a deterministic hashed character-trigram
embedder that works offline, and a generic HTTP client for remote
embedding endpoints. Embeddings are memoized in a shared, thread-safe LRU
cache keyed by (provider name, text).
"""

from __future__ import annotations

import threading
import time
from collections import OrderedDict
from dataclasses import dataclass
from typing import TYPE_CHECKING, Protocol

import numpy as np

from geoviz import _kernels as kernels
from geoviz.graph import UnknownEntityError
from geoviz.model import Entity, EntityId

if TYPE_CHECKING:
    from geoviz.graph import Graph

DEFAULT_DIM = 256
DEFAULT_SCOPE_CAP = 500
FALLBACK_THRESHOLD = 0.50
REMOTE_THRESHOLD = 0.80


class ProviderError(Exception):
    """An embedding provider failed; surfaced, never an empty result."""


class DimensionMismatchError(ValueError):
    pass


class ScopeTooLargeError(ValueError):
    def __init__(self, size: int, cap: int) -> None:
        self.size = size
        self.cap = cap
        super().__init__(f"scope of {size} nodes exceeds cap {cap}")


@dataclass(frozen=True)
class CandidateLink:
    """A proposed link between two unlinked entities; a < b lexicographically."""

    a: EntityId
    b: EntityId
    score: float
    explanation: str


class EmbeddingProvider(Protocol):
    name: str

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]: ...


def entity_text(e: Entity) -> str:
    """Canonical embedding text: label, kind, attribute values (by key), region."""
    parts = [e.label, e.kind]
    parts.extend(value for _, value in sorted(e.attributes.items()))
    if e.region is not None and e.region.known:
        parts.append(e.region.continent)  # type: ignore[arg-type]
        parts.append(e.region.country)  # type: ignore[arg-type]
    return " | ".join(parts)


def cosine_similarity(u: np.ndarray, v: np.ndarray) -> float:
    """u.v / (|u||v|); either operand zero gives 0.0 by convention."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionMismatchError(f"dimensions differ: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def fallback_embed(text: str, dim: int = DEFAULT_DIM) -> np.ndarray:
    """Deterministic hashed character-trigram embedding, L2-normalized.

    The text is lowercased and UTF-8 encoded; every byte trigram is hashed
    (FNV-1a) into one of ``dim`` buckets. Texts shorter than one trigram
    embed to the zero vector.
    """
    counts = np.array(kernels.trigram_counts(text.lower().encode("utf-8"), dim))
    norm = np.linalg.norm(counts)
    return counts / norm if norm > 0 else counts


class TrigramProvider:
    """Offline fallback provider; pure function of its input."""

    def __init__(self, dim: int = DEFAULT_DIM) -> None:
        self.dim = dim
        self.name = f"trigram-{dim}"

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        return [fallback_embed(text, self.dim) for text in texts]


class RemoteProvider:
    """Client for a generic HTTP embeddings endpoint.

    POSTs {"model": ..., "input": [...]} and expects
    {"data": [{"embedding": [...]}, ...]} with one row per input, in order.
    Batches at most ``batch_size`` texts per request and retries twice with
    exponential backoff. Returned vectors are L2-normalized.
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key: str | None = None,
        batch_size: int = 64,
        timeout: float = 30.0,
        retries: int = 2,
    ) -> None:
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        self.batch_size = batch_size
        self.timeout = timeout
        self.retries = retries
        self.name = f"remote:{model}"
        self._dim: int | None = None

    def _post(self, batch: list[str]) -> list[np.ndarray]:
        import requests

        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        last_error: Exception | None = None
        for attempt in range(self.retries + 1):
            if attempt:
                time.sleep(0.5 * 2 ** (attempt - 1))
            try:
                response = requests.post(
                    self.endpoint,
                    json={"model": self.model, "input": batch},
                    headers=headers,
                    timeout=self.timeout,
                )
                response.raise_for_status()
                payload = response.json()
                rows = payload["data"]
                if len(rows) != len(batch):
                    raise ProviderError(
                        f"provider returned {len(rows)} embeddings for {len(batch)} inputs"
                    )
                vectors = []
                for row in rows:
                    vec = np.asarray(row["embedding"], dtype=np.float64)
                    if self._dim is None:
                        self._dim = vec.shape[0]
                    elif vec.shape[0] != self._dim:
                        raise ProviderError(
                            f"embedding dimension changed: {vec.shape[0]} != {self._dim}"
                        )
                    norm = np.linalg.norm(vec)
                    vectors.append(vec / norm if norm > 0 else vec)
                return vectors
            except ProviderError:
                raise
            except Exception as exc:  # noqa: BLE001 - network/shape errors retried alike
                last_error = exc
        raise ProviderError(f"embedding endpoint failed after {self.retries + 1} attempts: {last_error}")

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        vectors: list[np.ndarray] = []
        for i in range(0, len(texts), self.batch_size):
            vectors.extend(self._post(texts[i : i + self.batch_size]))
        return vectors


class EmbeddingCache:
    """Thread-safe per-text LRU keyed by (provider name, text).

    A cached vector whose dimension no longer matches freshly produced ones
    is silently invalidated and re-fetched.
    """

    def __init__(self, capacity: int = 4096) -> None:
        self.capacity = capacity
        self._lock = threading.Lock()
        self._entries: OrderedDict[tuple[str, str], np.ndarray] = OrderedDict()

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    def embed(self, provider: EmbeddingProvider, texts: list[str]) -> list[np.ndarray]:
        results: dict[int, np.ndarray] = {}
        missing: list[tuple[int, str]] = []
        with self._lock:
            for i, text in enumerate(texts):
                key = (provider.name, text)
                if key in self._entries:
                    self._entries.move_to_end(key)
                    results[i] = self._entries[key]
                else:
                    missing.append((i, text))
        if missing:
            fresh = provider.embed_batch([text for _, text in missing])
            if len(fresh) != len(missing):
                raise ProviderError("provider returned wrong embedding count")
            dim = fresh[0].shape[0] if fresh else None
            with self._lock:
                if dim is not None:
                    for key, vec in list(self._entries.items()):
                        if vec.shape[0] != dim:
                            del self._entries[key]
                for (i, text), vec in zip(missing, fresh):
                    results[i] = vec
                    self._entries[(provider.name, text)] = vec
                    self._entries.move_to_end((provider.name, text))
                while len(self._entries) > self.capacity:
                    self._entries.popitem(last=False)
        return [results[i] for i in range(len(texts))]


def discover_links(
    g: Graph,
    scope: set[EntityId],
    provider: EmbeddingProvider,
    threshold: float,
    limit: int,
    cache: EmbeddingCache | None = None,
    scope_cap: int = DEFAULT_SCOPE_CAP,
) -> list[CandidateLink]:
    """Candidate links among unassociated nodes in scope.

    Every unordered pair with no stored edge in either direction is scored
    by cosine similarity of its entity texts; pairs scoring >= threshold
    are returned best first (ties by id pair), truncated to ``limit``.
    """
    if not -1.0 <= threshold <= 1.0:
        raise ValueError(f"threshold {threshold} out of [-1, 1]")
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    if len(scope) > scope_cap:
        raise ScopeTooLargeError(len(scope), scope_cap)
    for eid in scope:
        if eid not in g.entities:
            raise UnknownEntityError(eid)

    ids = sorted(scope)
    if len(ids) < 2:
        return []
    texts = [entity_text(g.entities[eid]) for eid in ids]
    if cache is not None:
        vectors = cache.embed(provider, texts)
    else:
        vectors = provider.embed_batch(texts)
    if len(vectors) != len(texts):
        raise ProviderError("provider returned wrong embedding count")

    matrix = np.stack(vectors).astype(np.float64)
    norms = np.linalg.norm(matrix, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    unit = matrix / safe[:, None]
    scores = unit @ unit.T

    candidates = []
    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            if g.has_edge_between(ids[i], ids[j]):
                continue
            score = float(scores[i, j])
            if score >= threshold:
                explanation = (
                    f"{g.entities[ids[i]].label!r} and {g.entities[ids[j]].label!r} "
                    f"have similar descriptions (cosine {score:.4f})"
                )
                candidates.append(CandidateLink(ids[i], ids[j], score, explanation))
    candidates.sort(key=lambda c: (-c.score, c.a, c.b))
    return candidates[:limit]
