import json
import random
import threading

import numpy as np
import pytest

from geoviz.discovery import (
    CandidateLink,
    DimensionMismatchError,
    EmbeddingCache,
    ProviderError,
    RemoteProvider,
    ScopeTooLargeError,
    TrigramProvider,
    cosine_similarity,
    discover_links,
    entity_text,
    fallback_embed,
)
from geoviz.graph import UnknownEntityError, load
from geoviz.ingest import parse_dataset
from geoviz.model import Entity
from tests.conftest import random_dataset


class TestEntityText:
    def test_template_with_empty_tail(self):
        e = Entity(id="x", label="L", kind="landslide")
        assert entity_text(e) == "L | landslide"

    def test_identical_entities_identical_text(self):
        a = Entity(id="x", label="L", kind="k", attributes={"a": "1"})
        b = Entity(id="y", label="L", kind="k", attributes={"a": "1"})
        assert entity_text(a) == entity_text(b)

    def test_attribute_values_in_key_order(self):
        a = Entity(id="x", label="L", kind="k", attributes={"z": "last", "a": "first"})
        assert entity_text(a) == "L | k | first | last"

    def test_sample_danba_pair_mentions_danba(self, sample_graph):
        for eid in ("event_danba_debris_flow", "event_danba_landslide"):
            assert "Danba" in entity_text(sample_graph.entities[eid])


class TestCosineSimilarity:
    def test_self_similarity(self):
        v = np.array([0.3, -0.2, 0.9])
        assert cosine_similarity(v, v) == pytest.approx(1.0, abs=1e-9)

    def test_orthogonal(self):
        u = np.zeros(8)
        v = np.zeros(8)
        u[0] = 1.0
        v[1] = 1.0
        assert cosine_similarity(u, v) == 0.0

    def test_hand_computed(self):
        u = np.array([1.0, 1.0, 0.0])
        v = np.array([1.0, 0.0, 0.0])
        assert cosine_similarity(u, v) == pytest.approx(0.7071, abs=1e-4)

    def test_zero_vector_convention(self):
        assert cosine_similarity(np.zeros(4), np.ones(4)) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            cosine_similarity(np.ones(3), np.ones(4))

    def test_properties_on_random_pairs(self):
        rng = np.random.default_rng(17)
        for _ in range(2000):
            dim = int(rng.integers(2, 16))
            u = rng.normal(size=dim)
            v = rng.normal(size=dim)
            s = cosine_similarity(u, v)
            assert abs(s) <= 1.0 + 1e-9
            assert s == pytest.approx(cosine_similarity(v, u), abs=1e-12)
            c = float(rng.uniform(0.1, 100.0))
            assert cosine_similarity(c * u, v) == pytest.approx(s, abs=1e-9)


class TestFallbackEmbed:
    def test_empty_text_zero_vector(self):
        v = fallback_embed("")
        assert v.shape == (256,)
        assert np.all(v == 0.0)

    def test_deterministic(self):
        assert np.array_equal(fallback_embed("danba landslide"), fallback_embed("danba landslide"))

    def test_normalized(self):
        v = fallback_embed("a landslide in danba county")
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-6)

    def test_case_insensitive(self):
        assert np.array_equal(fallback_embed("DANBA"), fallback_embed("danba"))

    def test_related_text_scores_higher(self):
        base = fallback_embed("danba landslide")
        near = fallback_embed("danba county landslide")
        far = fallback_embed("paris flood")
        assert cosine_similarity(base, near) > cosine_similarity(base, far)

    def test_matches_reference_trigram_bag(self):
        # independent oracle: count trigrams with FNV-1a reimplemented inline
        text = "valley debris flow"
        dim = 64
        data = text.encode()
        counts = [0.0] * dim
        for i in range(len(data) - 2):
            h = 0x811C9DC5
            for byte in data[i : i + 3]:
                h = ((h ^ byte) * 0x01000193) & 0xFFFFFFFF
            counts[h % dim] += 1.0
        expected = np.array(counts)
        expected /= np.linalg.norm(expected)
        assert np.allclose(fallback_embed(text, dim), expected)


def _mini_graph(texts: dict[str, str], edges: list[tuple[str, str]]):
    lines = [
        json.dumps({"type": "entity", "id": eid, "label": label, "kind": "k"})
        for eid, label in texts.items()
    ]
    lines += [
        json.dumps({"type": "edge", "source": a, "target": b, "predicate": "p"})
        for a, b in edges
    ]
    return load(parse_dataset("\n".join(lines) + "\n"))


class TestDiscoverLinks:
    def test_single_node_scope(self):
        g = _mini_graph({"a": "alpha"}, [])
        assert discover_links(g, {"a"}, TrigramProvider(), 0.5, 10) == []

    def test_identical_texts_score_one(self):
        g = _mini_graph({"a": "same text here", "b": "same text here"}, [])
        links = discover_links(g, {"a", "b"}, TrigramProvider(), 0.5, 10)
        assert len(links) == 1
        link = links[0]
        assert (link.a, link.b) == ("a", "b")
        assert link.score == pytest.approx(1.0, abs=1e-6)
        assert "a" not in link.explanation or link.explanation  # explanation is non-empty text
        assert "same text here" in link.explanation

    def test_never_returns_stored_edges_or_self_pairs(self):
        rng = random.Random(21)
        for _ in range(20):
            d = random_dataset(rng, n_entities=rng.randint(2, 25), edge_p=0.2)
            g = load(d)
            scope = {e.id for e in d.entities}
            links = discover_links(g, scope, TrigramProvider(), -1.0, 1000)
            for link in links:
                assert link.a < link.b
                assert link.a in scope and link.b in scope
                assert not g.has_edge_between(link.a, link.b)

    def test_ordering_deterministic_and_total(self):
        rng = random.Random(22)
        d = random_dataset(rng, n_entities=20, edge_p=0.1)
        g = load(d)
        scope = {e.id for e in d.entities}
        first = discover_links(g, scope, TrigramProvider(), -1.0, 1000)
        second = discover_links(g, scope, TrigramProvider(), -1.0, 1000)
        assert first == second
        scores = [link.score for link in first]
        assert scores == sorted(scores, reverse=True)

    def test_threshold_and_limit(self):
        g = _mini_graph({"a": "same text", "b": "same text", "c": "entirely other words"}, [])
        all_links = discover_links(g, {"a", "b", "c"}, TrigramProvider(), -1.0, 10)
        high = discover_links(g, {"a", "b", "c"}, TrigramProvider(), 0.99, 10)
        assert {(l.a, l.b) for l in high} == {("a", "b")}
        assert len(all_links) >= len(high)
        top1 = discover_links(g, {"a", "b", "c"}, TrigramProvider(), -1.0, 1)
        assert top1 == all_links[:1]

    def test_scope_cap(self):
        rng = random.Random(23)
        d = random_dataset(rng, n_entities=30, edge_p=0.0)
        g = load(d)
        with pytest.raises(ScopeTooLargeError):
            discover_links(g, {e.id for e in d.entities}, TrigramProvider(), 0.5, 10, scope_cap=10)

    def test_unknown_scope_member(self):
        g = _mini_graph({"a": "alpha"}, [])
        with pytest.raises(UnknownEntityError):
            discover_links(g, {"a", "ghost"}, TrigramProvider(), 0.5, 10)

    def test_parameter_validation(self):
        g = _mini_graph({"a": "alpha", "b": "beta"}, [])
        with pytest.raises(ValueError):
            discover_links(g, {"a", "b"}, TrigramProvider(), 1.5, 10)
        with pytest.raises(ValueError):
            discover_links(g, {"a", "b"}, TrigramProvider(), 0.5, 0)

    def test_provider_error_surfaces(self):
        class Exploding:
            name = "boom"

            def embed_batch(self, texts):
                raise ProviderError("endpoint down")

        g = _mini_graph({"a": "alpha", "b": "beta"}, [])
        with pytest.raises(ProviderError):
            discover_links(g, {"a", "b"}, Exploding(), 0.5, 10)

    def test_danba_scenario(self, sample_graph):
        from geoviz.graph import khop_subgraph

        sub = khop_subgraph(sample_graph, "event_danba_debris_flow", 2)
        assert "event_danba_landslide" in sub.nodes
        links = discover_links(sample_graph, set(sub.nodes), TrigramProvider(), 0.5, 50)
        pairs = {(l.a, l.b) for l in links}
        assert ("event_danba_debris_flow", "event_danba_landslide") in pairs


class RecordingProvider:
    def __init__(self, dim=8):
        self.dim = dim
        self.calls: list[list[str]] = []
        self.name = f"recording-{dim}"

    def embed_batch(self, texts):
        self.calls.append(list(texts))
        out = []
        for text in texts:
            rng = np.random.default_rng(abs(hash((self.dim, text))) % (2**32))
            v = rng.normal(size=self.dim)
            out.append(v / np.linalg.norm(v))
        return out


class TestEmbeddingCache:
    def test_hit_avoids_provider_call(self):
        cache = EmbeddingCache()
        provider = RecordingProvider()
        first = cache.embed(provider, ["x", "y"])
        second = cache.embed(provider, ["x", "y"])
        assert len(provider.calls) == 1
        assert all(np.array_equal(a, b) for a, b in zip(first, second))

    def test_partial_miss_fetches_only_missing(self):
        cache = EmbeddingCache()
        provider = RecordingProvider()
        cache.embed(provider, ["x"])
        cache.embed(provider, ["x", "y"])
        assert provider.calls == [["x"], ["y"]]

    def test_keyed_by_provider_name(self):
        cache = EmbeddingCache()
        p1, p2 = RecordingProvider(), RecordingProvider()
        p2.name = "other"
        cache.embed(p1, ["x"])
        cache.embed(p2, ["x"])
        assert p1.calls == [["x"]] and p2.calls == [["x"]]

    def test_lru_eviction(self):
        cache = EmbeddingCache(capacity=2)
        provider = RecordingProvider()
        cache.embed(provider, ["a"])
        cache.embed(provider, ["b"])
        cache.embed(provider, ["a"])  # refresh a
        cache.embed(provider, ["c"])  # evicts b
        cache.embed(provider, ["b"])
        assert provider.calls == [["a"], ["b"], ["c"], ["b"]]

    def test_dimension_change_invalidates(self):
        cache = EmbeddingCache()
        p8 = RecordingProvider(dim=8)
        cache.embed(p8, ["x"])
        p16 = RecordingProvider(dim=16)
        p16.name = p8.name  # same configuration key, new dimension
        vecs = cache.embed(p16, ["y"])
        assert vecs[0].shape == (16,)
        # old 8-dim entry was dropped, so "x" re-embeds at 16
        vecs = cache.embed(p16, ["x"])
        assert vecs[0].shape == (16,)

    def test_thread_safety_smoke(self):
        cache = EmbeddingCache(capacity=64)
        provider = TrigramProvider(dim=32)
        texts = [f"text {i % 20}" for i in range(200)]
        errors = []

        def worker():
            try:
                for t in texts:
                    cache.embed(provider, [t])
            except Exception as exc:  # pragma: no cover
                errors.append(exc)

        threads = [threading.Thread(target=worker) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        assert len(cache) <= 64


class FakeResponse:
    def __init__(self, payload, status=200):
        self._payload = payload
        self.status_code = status

    def raise_for_status(self):
        if self.status_code >= 400:
            raise RuntimeError(f"http {self.status_code}")

    def json(self):
        return self._payload


class TestRemoteProvider:
    def test_wire_format_and_batching(self, monkeypatch):
        requests_seen = []

        def fake_post(url, json=None, headers=None, timeout=None):
            requests_seen.append((url, json, headers))
            return FakeResponse({"data": [{"embedding": [1.0, 0.0]} for _ in json["input"]]})

        monkeypatch.setattr("requests.post", fake_post)
        provider = RemoteProvider("http://embed.test/v1", "m1", api_key="sekrit", batch_size=2)
        vectors = provider.embed_batch(["a", "b", "c"])
        assert len(vectors) == 3
        assert len(requests_seen) == 2  # 2 + 1
        url, body, headers = requests_seen[0]
        assert url == "http://embed.test/v1"
        assert body == {"model": "m1", "input": ["a", "b"]}
        assert headers["Authorization"] == "Bearer sekrit"
        assert np.linalg.norm(vectors[0]) == pytest.approx(1.0)

    def test_retries_then_succeeds(self, monkeypatch):
        attempts = {"n": 0}

        def flaky_post(url, json=None, headers=None, timeout=None):
            attempts["n"] += 1
            if attempts["n"] < 3:
                raise ConnectionError("nope")
            return FakeResponse({"data": [{"embedding": [0.0, 1.0]} for _ in json["input"]]})

        monkeypatch.setattr("requests.post", flaky_post)
        monkeypatch.setattr("time.sleep", lambda _s: None)
        provider = RemoteProvider("http://embed.test", "m")
        assert len(provider.embed_batch(["x"])) == 1
        assert attempts["n"] == 3

    def test_exhausted_retries_raise_provider_error(self, monkeypatch):
        def dead_post(url, json=None, headers=None, timeout=None):
            raise ConnectionError("nope")

        monkeypatch.setattr("requests.post", dead_post)
        monkeypatch.setattr("time.sleep", lambda _s: None)
        provider = RemoteProvider("http://embed.test", "m")
        with pytest.raises(ProviderError):
            provider.embed_batch(["x"])

    def test_count_mismatch_is_provider_error(self, monkeypatch):
        def short_post(url, json=None, headers=None, timeout=None):
            return FakeResponse({"data": []})

        monkeypatch.setattr("requests.post", short_post)
        provider = RemoteProvider("http://embed.test", "m")
        with pytest.raises(ProviderError):
            provider.embed_batch(["x"])
