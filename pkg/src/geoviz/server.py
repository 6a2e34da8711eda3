"""HTTP/JSON query service over an immutable dataset snapshot.

Every endpoint is a thin mapping onto one engine operation; identical
requests against an unchanged snapshot return byte-identical bodies.
Reloads are serialized and swap the (graph, indexes, trees) snapshot
atomically, so in-flight readers finish on the snapshot they started with.
Errors use one envelope: {"error": code, "detail": string}.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException
from starlette.staticfiles import StaticFiles

from geoviz import discovery, graph as graph_mod, mapview, tree as tree_mod
from geoviz.graph import FocusNotVisibleError, Graph, UnknownEntityError
from geoviz.index import BBox, Indexes, build_indexes, query_keyword
from geoviz.ingest import IngestError, parse_dataset
from geoviz.model import MAX_INSTANT, MIN_INSTANT, Dataset, Entity, TimeSpan

MAX_K = 6
DEFAULT_K = 2
MAX_RESULT_NODES = 5000
DEFAULT_DISCOVER_LIMIT = 20
EMBED_KEY_ENV = "GEOVIZ_EMBED_KEY"


@dataclass
class ServerConfig:
    data_path: Path
    port: int = 8080
    host: str = "127.0.0.1"
    static_dir: Path | None = None
    embed_endpoint: str | None = None
    embed_model: str = ""
    scope_cap: int = discovery.DEFAULT_SCOPE_CAP
    lenient_parse: bool = False

    def __post_init__(self) -> None:
        if not 1 <= self.port <= 65535:
            raise ValueError(f"port {self.port} out of [1, 65535]")
        self.data_path = Path(self.data_path)


@dataclass(frozen=True)
class Snapshot:
    """Everything derived from one dataset; replaced wholesale on reload."""

    dataset: Dataset
    graph: Graph
    indexes: Indexes
    temporal_tree: dict
    spatial_tree: dict


def build_snapshot(dataset: Dataset) -> Snapshot:
    g = graph_mod.load(dataset)
    return Snapshot(
        dataset=dataset,
        graph=g,
        indexes=build_indexes(g),
        temporal_tree=tree_mod.tree_to_dict(tree_mod.build_temporal_tree(dataset)),
        spatial_tree=tree_mod.tree_to_dict(tree_mod.build_spatial_tree(dataset)),
    )


class ApiError(Exception):
    def __init__(self, status: int, code: str, detail: str) -> None:
        self.status = status
        self.code = code
        self.detail = detail
        super().__init__(f"{code}: {detail}")


@dataclass
class ServerState:
    config: ServerConfig
    snapshot: Snapshot
    cache: discovery.EmbeddingCache = field(default_factory=discovery.EmbeddingCache)
    reload_lock: threading.Lock = field(default_factory=threading.Lock)

    def fallback_provider(self) -> discovery.TrigramProvider:
        return discovery.TrigramProvider()

    def remote_provider(self) -> discovery.RemoteProvider:
        if not self.config.embed_endpoint:
            raise ApiError(400, "remote_not_configured", "no embedding endpoint configured")
        return discovery.RemoteProvider(
            endpoint=self.config.embed_endpoint,
            model=self.config.embed_model,
            api_key=os.environ.get(EMBED_KEY_ENV),
        )


# --- parameter parsing -------------------------------------------------------


def _parse_iso_date(value: str, name: str) -> date:
    try:
        return date.fromisoformat(value)
    except ValueError as exc:
        raise ApiError(400, "invalid_parameter", f"{name} must be an ISO date: {exc}") from exc


def _time_range(time_start: str | None, time_end: str | None) -> TimeSpan | None:
    if time_start is None and time_end is None:
        return None
    start = _parse_iso_date(time_start, "time_start") if time_start else MIN_INSTANT
    end = _parse_iso_date(time_end, "time_end") if time_end else MAX_INSTANT
    if not start < end:
        raise ApiError(400, "invalid_parameter", f"empty time range [{start}, {end})")
    return TimeSpan(start, end)


def _parse_bbox(raw: str) -> BBox:
    parts = raw.split(",")
    if len(parts) != 4:
        raise ApiError(400, "invalid_parameter", "bbox must be 'minLat,minLon,maxLat,maxLon'")
    try:
        min_lat, min_lon, max_lat, max_lon = (float(p) for p in parts)
        return BBox(min_lat=min_lat, max_lat=max_lat, min_lon=min_lon, max_lon=max_lon)
    except ValueError as exc:
        raise ApiError(400, "invalid_parameter", f"bad bbox: {exc}") from exc


def _parse_k(k: int) -> int:
    if not 0 <= k <= MAX_K:
        raise ApiError(400, "invalid_parameter", f"k must be in [0, {MAX_K}]")
    return k


def _map_filter(
    bbox: str | None,
    time_start: str | None,
    time_end: str | None,
    q: str | None,
    kinds: str | None,
) -> mapview.MapFilter:
    return mapview.MapFilter(
        bbox=_parse_bbox(bbox) if bbox else None,
        time=_time_range(time_start, time_end),
        keyword=q if q is not None else None,
        kinds=frozenset(k for k in kinds.split(",") if k) if kinds else None,
    )


# --- serialization -----------------------------------------------------------


def _node_summary(e: Entity) -> dict:
    return {"id": e.id, "label": e.label, "kind": e.kind}


def _edge_dict(edge) -> dict:
    return {"source": edge.source, "target": edge.target, "predicate": edge.predicate}


def _entity_dict(e: Entity) -> dict:
    return {
        "id": e.id,
        "label": e.label,
        "kind": e.kind,
        "attrs": dict(e.attributes),
        "time": (
            {"start": e.time.start.isoformat(), "end": e.time.end.isoformat()}
            if e.time is not None
            else None
        ),
        "location": (
            {"lat": e.location.lat, "lon": e.location.lon} if e.location is not None else None
        ),
        "region": (
            {"continent": e.region.continent, "country": e.region.country}
            if e.region is not None and e.region.known
            else None
        ),
    }


def _candidate_dict(c: discovery.CandidateLink) -> dict:
    return {"a": c.a, "b": c.b, "score": c.score, "explanation": c.explanation}


# --- application -------------------------------------------------------------


def create_app(config: ServerConfig) -> FastAPI:
    """Build the service; raises IngestError when the dataset fails to parse."""
    with open(config.data_path, "rb") as f:
        dataset = parse_dataset(f, lenient=config.lenient_parse)
    state = ServerState(config=config, snapshot=build_snapshot(dataset))

    app = FastAPI(title="geoviz", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.geoviz = state

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse({"error": exc.code, "detail": exc.detail}, status_code=exc.status)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            {"error": "invalid_parameter", "detail": str(exc.errors()[0].get("msg", "invalid request"))},
            status_code=400,
        )

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(_request: Request, exc: StarletteHTTPException) -> JSONResponse:
        return JSONResponse(
            {"error": "http_error", "detail": str(exc.detail)}, status_code=exc.status_code
        )

    @app.get("/health")
    def health() -> dict:
        snap = state.snapshot
        return {
            "status": "ok",
            "entities": snap.graph.node_count,
            "edges": snap.graph.edge_count,
        }

    @app.get("/tree")
    def tree(axis: str = "temporal") -> dict:
        snap = state.snapshot
        if axis == tree_mod.TEMPORAL:
            return snap.temporal_tree
        if axis == tree_mod.SPATIAL:
            return snap.spatial_tree
        raise ApiError(400, "invalid_parameter", "axis must be 'temporal' or 'spatial'")

    @app.get("/net")
    def net(time_start: str | None = None, time_end: str | None = None) -> dict:
        snap = state.snapshot
        time_range = _time_range(time_start, time_end)
        if time_range is None:
            ids = sorted(snap.graph.entities)
        else:
            ids = sorted(graph_mod.filter_by_time(snap.graph, time_range))
        truncated = len(ids) > MAX_RESULT_NODES
        shown = ids[:MAX_RESULT_NODES]
        shown_set = set(shown)
        edges = [
            _edge_dict(e)
            for e in snap.graph.edges
            if e.source in shown_set and e.target in shown_set
        ]
        return {
            "nodes": [_node_summary(snap.graph.entities[i]) for i in shown],
            "edges": edges,
            "total": len(ids),
            "truncated": truncated,
        }

    def _subgraph(snap: Snapshot, focus: str, k: int, time_range: TimeSpan | None):
        visible = None
        if time_range is not None:
            visible = graph_mod.filter_by_time(snap.graph, time_range)
        try:
            sub = graph_mod.khop_subgraph(snap.graph, focus, k, visible)
        except UnknownEntityError as exc:
            raise ApiError(404, "unknown_entity", f"no entity {exc.entity_id!r}") from exc
        except FocusNotVisibleError as exc:
            raise ApiError(400, "focus_not_visible", str(exc)) from exc
        if len(sub.nodes) > MAX_RESULT_NODES:
            raise ApiError(
                413, "result_too_large", f"{len(sub.nodes)} nodes exceed cap {MAX_RESULT_NODES}; lower k"
            )
        return sub

    @app.get("/net/subgraph")
    def net_subgraph(
        focus: str,
        k: int = DEFAULT_K,
        time_start: str | None = None,
        time_end: str | None = None,
    ) -> dict:
        snap = state.snapshot
        sub = _subgraph(snap, focus, _parse_k(k), _time_range(time_start, time_end))
        return {
            "focus": sub.focus,
            "k": k,
            "nodes": [_node_summary(snap.graph.entities[i]) for i in sub.nodes],
            "edges": [_edge_dict(e) for e in sub.edges],
            "candidates": [],
        }

    @app.post("/net/discover")
    def net_discover(payload: dict = Body(...)) -> dict:
        snap = state.snapshot
        if not isinstance(payload, dict) or "focus" not in payload:
            raise ApiError(400, "invalid_parameter", "body must include 'focus'")
        focus = payload["focus"]
        provider_name = payload.get("provider", "fallback")
        if provider_name == "fallback":
            provider = state.fallback_provider()
            default_threshold = discovery.FALLBACK_THRESHOLD
        elif provider_name == "remote":
            provider = state.remote_provider()
            default_threshold = discovery.REMOTE_THRESHOLD
        else:
            raise ApiError(400, "invalid_parameter", "provider must be 'fallback' or 'remote'")
        try:
            k = _parse_k(int(payload.get("k", DEFAULT_K)))
            threshold = float(payload.get("threshold", default_threshold))
            limit = int(payload.get("limit", DEFAULT_DISCOVER_LIMIT))
        except (TypeError, ValueError) as exc:
            raise ApiError(400, "invalid_parameter", f"bad discover parameter: {exc}") from exc
        time_range = _time_range(payload.get("time_start"), payload.get("time_end"))
        sub = _subgraph(snap, focus, k, time_range)
        try:
            candidates = discovery.discover_links(
                snap.graph,
                set(sub.nodes),
                provider,
                threshold=threshold,
                limit=limit,
                cache=state.cache,
                scope_cap=state.config.scope_cap,
            )
        except discovery.ScopeTooLargeError as exc:
            raise ApiError(413, "scope_too_large", str(exc)) from exc
        except discovery.ProviderError as exc:
            raise ApiError(502, "provider_error", str(exc)) from exc
        except ValueError as exc:
            raise ApiError(400, "invalid_parameter", str(exc)) from exc
        return {
            "focus": focus,
            "k": k,
            "provider": provider.name,
            "threshold": threshold,
            "scope_size": len(sub.nodes),
            "candidates": [_candidate_dict(c) for c in candidates],
        }

    @app.get("/map/markers")
    def map_markers(
        bbox: str | None = None,
        zoom: int = 3,
        time_start: str | None = None,
        time_end: str | None = None,
        q: str | None = None,
        kinds: str | None = None,
    ) -> dict:
        snap = state.snapshot
        if not 0 <= zoom <= 18:
            raise ApiError(400, "invalid_parameter", "zoom must be in [0, 18]")
        ids = mapview.apply_filter(
            snap.graph, snap.indexes, _map_filter(bbox, time_start, time_end, q, kinds)
        )
        clusters = mapview.cluster_markers(snap.graph, ids, zoom)
        payload = []
        for c in clusters:
            entry: dict = {"lat": c.lat, "lon": c.lon, "count": c.count}
            if c.members is not None:
                entry["members"] = list(c.members)
            payload.append(entry)
        return {"clusters": payload, "total": sum(c.count for c in clusters)}

    @app.get("/map/timeline")
    def map_timeline(
        granularity: str = "year",
        bbox: str | None = None,
        time_start: str | None = None,
        time_end: str | None = None,
        q: str | None = None,
        kinds: str | None = None,
    ) -> dict:
        snap = state.snapshot
        if granularity not in (mapview.YEAR, mapview.DECADE):
            raise ApiError(400, "invalid_parameter", "granularity must be 'year' or 'decade'")
        ids = mapview.apply_filter(
            snap.graph, snap.indexes, _map_filter(bbox, time_start, time_end, q, kinds)
        )
        bins = mapview.timeline_histogram(snap.graph, ids, granularity)
        return {
            "granularity": granularity,
            "bins": [
                {"start": b.start.isoformat(), "end": b.end.isoformat(), "count": b.count}
                for b in bins
            ],
        }

    @app.get("/search")
    def search(q: str = "") -> dict:
        snap = state.snapshot
        ids = sorted(query_keyword(snap.indexes.text, q))
        return {
            "count": len(ids),
            "entities": [_node_summary(snap.graph.entities[i]) for i in ids],
        }

    @app.get("/entity/{entity_id}")
    def entity(entity_id: str) -> dict:
        snap = state.snapshot
        try:
            record, edges = mapview.entity_detail(snap.graph, entity_id)
        except UnknownEntityError as exc:
            raise ApiError(404, "unknown_entity", f"no entity {exc.entity_id!r}") from exc
        return {"entity": _entity_dict(record), "edges": [_edge_dict(e) for e in edges]}

    @app.post("/admin/reload")
    def admin_reload(payload: dict | None = Body(None)) -> dict:
        path = Path(payload["data_path"]) if payload and "data_path" in payload else config.data_path
        with state.reload_lock:
            try:
                with open(path, "rb") as f:
                    dataset = parse_dataset(f, lenient=config.lenient_parse)
            except FileNotFoundError as exc:
                raise ApiError(400, "invalid_parameter", f"no such file: {path}") from exc
            except IngestError as exc:
                raise ApiError(422, "ingest_failed", exc.report.summary()) from exc
            state.snapshot = build_snapshot(dataset)
        snap = state.snapshot
        return {"ok": True, "entities": snap.graph.node_count, "edges": snap.graph.edge_count}

    if config.static_dir is not None:
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")
    else:

        @app.get("/")
        def root() -> dict:
            return {
                "service": "geoviz",
                "endpoints": [
                    "/health",
                    "/tree",
                    "/net",
                    "/net/subgraph",
                    "/net/discover",
                    "/map/markers",
                    "/map/timeline",
                    "/search",
                    "/entity/{id}",
                    "/admin/reload",
                ],
            }

    return app


def serve(config: ServerConfig) -> None:
    """Run until terminated; startup fails fast with the ingest report."""
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
