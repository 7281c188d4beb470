"""HTTP facade over the engine: sessions, frame upload, trajectory submission,
replication preview, toy generation, and metric queries.

Sessions live in memory behind per-session locks; an optional directory mirror
persists uploaded artifacts for inspection.  Generation runs synchronously in
the request with an in-flight guard, and result ids are deterministic hashes
of (frame, tracks, w, steps, seed), so repeating a request returns the cached
result.
"""

from __future__ import annotations

import hashlib
import json
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse

from .checkpoint import load_checkpoint
from .codec import MockCodec, decode, encode_condition
from .condition import replicate_features
from .geometry import LatentGeometry
from .metrics import epe
from .model import ConditionBundle, ToyDenoiser
from .bench import retrack_video
from .pngio import PNG_MAGIC, png_bytes_to_frame, video_to_apng_bytes
from .sampling import DEFAULT_GUIDANCE, DEFAULT_STEPS, sample
from .trajectory import (
    TrajectorySet,
    parse_trajectories,
    quantized_tracks,
    trajectories_to_doc,
    validate_set,
)
from .wmt import MAGIC as WMT_MAGIC
from .wmt import read_tensor_bytes, write_tensor_bytes

try:
    import tomllib
except ModuleNotFoundError:  # 3.10
    import tomli as tomllib


class ServiceError(Exception):
    def __init__(self, status: int, code: str, message: str, detail=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8787
    checkpoint: str | None = None
    session_dir: str | None = None
    workers: int = 2

    @classmethod
    def from_toml(cls, path: str | Path) -> "ServiceConfig":
        with open(path, "rb") as f:
            doc = tomllib.load(f)
        svc = doc.get("service", {})
        return cls(
            host=svc.get("host", "127.0.0.1"),
            port=int(svc.get("port", 8787)),
            checkpoint=svc.get("checkpoint"),
            session_dir=svc.get("session_dir"),
            workers=int(svc.get("workers", 2)),
        )


@dataclass
class Session:
    session_id: str
    geometry: LatentGeometry
    created: float = field(default_factory=time.time)
    frame: np.ndarray | None = None
    cond_base: np.ndarray | None = None
    tracks: TrajectorySet | None = None
    results: dict[str, dict] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)
    generating: bool = False


class Studio:
    """Engine state shared by request handlers: the model plus the sessions."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.sessions: dict[str, Session] = {}
        self.registry_lock = threading.Lock()
        self.model: ToyDenoiser | None = (
            load_checkpoint(config.checkpoint) if config.checkpoint else None
        )

    def create_session(self, geometry: LatentGeometry) -> Session:
        session = Session(session_id=secrets.token_hex(8), geometry=geometry)
        with self.registry_lock:
            self.sessions[session.session_id] = session
        if self.config.session_dir:
            (Path(self.config.session_dir) / session.session_id).mkdir(
                parents=True, exist_ok=True
            )
        return session

    def get(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise ServiceError(404, "session_not_found", f"no session {session_id}")
        return session

    def persist(self, session: Session, name: str, data: bytes) -> None:
        if self.config.session_dir:
            path = Path(self.config.session_dir) / session.session_id / name
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(data)


def _decode_frame(body: bytes, geom: LatentGeometry) -> np.ndarray:
    if body.startswith(PNG_MAGIC):
        frame = png_bytes_to_frame(body)
    elif body.startswith(WMT_MAGIC):
        frame = read_tensor_bytes(body)
    else:
        raise ServiceError(422, "unknown_payload", "frame must be PNG or WMT1 bytes")
    expected = (geom.height, geom.width, 3)
    if frame.shape != expected:
        raise ServiceError(
            422,
            "dimension_mismatch",
            "frame dimensions do not match session geometry",
            detail={"expected": list(expected), "actual": list(frame.shape)},
        )
    return frame.astype(np.float32)


def _video_response(video: np.ndarray, fmt: str) -> Response:
    if fmt == "wmt1":
        return Response(write_tensor_bytes(video), media_type="application/octet-stream")
    if fmt == "apng":
        return Response(video_to_apng_bytes(video), media_type="image/apng")
    raise ServiceError(422, "unknown_format", f"format {fmt!r} not supported (apng|wmt1)")


def build_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    studio = Studio(config)
    app = FastAPI(title="motionweave studio service")
    app.state.studio = studio

    @app.exception_handler(ServiceError)
    async def service_error_handler(request: Request, exc: ServiceError):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message, "detail": exc.detail},
        )

    @app.get("/health")
    def health():
        return {
            "status": "ok",
            "model_loaded": studio.model is not None,
            "sessions": len(studio.sessions),
            "ranges": {"w": [0.0, 20.0], "steps": [1, 500], "seed": [0, 2**31 - 1]},
            "geometry": studio.model.geometry.to_dict() if studio.model else None,
        }

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        doc = await request.json()
        try:
            geometry = LatentGeometry.from_dict(doc)
        except (KeyError, TypeError, ValueError) as exc:
            raise ServiceError(422, "invalid_geometry", str(exc))
        if studio.model is not None and geometry != studio.model.geometry:
            raise ServiceError(
                422,
                "invalid_geometry",
                "geometry does not match the loaded checkpoint",
                detail={"checkpoint_geometry": studio.model.geometry.to_dict()},
            )
        session = studio.create_session(geometry)
        return {"id": session.session_id, "geometry": geometry.to_dict()}

    @app.post("/sessions/{session_id}/frame")
    async def upload_frame(session_id: str, request: Request):
        session = studio.get(session_id)
        body = await request.body()
        frame = _decode_frame(body, session.geometry)
        codec = MockCodec(geometry=session.geometry)
        with session.lock:
            session.frame = frame
            session.cond_base = encode_condition(codec, frame).astype(np.float64)
            session.results.clear()  # previews/results built on the old frame are stale
        studio.persist(session, "frame.wmt1", write_tensor_bytes(frame))
        return {"status": "ok", "shape": list(frame.shape)}

    @app.put("/sessions/{session_id}/tracks")
    async def put_tracks(session_id: str, request: Request):
        session = studio.get(session_id)
        doc = await request.json()
        try:
            ts = parse_trajectories(doc, session.geometry)
        except (KeyError, TypeError, ValueError) as exc:
            raise ServiceError(422, "invalid_trajectories", str(exc))
        report = validate_set(ts)
        if not report:
            with session.lock:
                session.tracks = ts
                session.results.clear()
            studio.persist(
                session, "tracks.json", json.dumps(trajectories_to_doc(ts)).encode()
            )
        return {
            "accepted": not report,
            "violations": [
                {"track_id": v.track_id, "frame": v.frame, "kind": v.kind, "message": v.message}
                for v in report
            ],
        }

    @app.get("/sessions/{session_id}/preview")
    def preview(session_id: str, seed: int = Query(0), format: str = Query("apng")):
        session = studio.get(session_id)
        if session.frame is None:
            raise ServiceError(409, "missing_frame", "upload a first frame before previewing")
        if session.tracks is None:
            raise ServiceError(409, "missing_tracks", "submit trajectories before previewing")
        codec = MockCodec(geometry=session.geometry)
        rng = np.random.default_rng(seed)
        cond = replicate_features(
            session.cond_base, quantized_tracks(session.tracks), rng
        )
        video = decode(codec, cond.astype(np.float32))
        return _video_response(video, format)

    @app.post("/sessions/{session_id}/generate")
    async def generate(session_id: str, request: Request):
        session = studio.get(session_id)
        if studio.model is None:
            raise ServiceError(503, "no_model", "service started without a checkpoint")
        if session.frame is None:
            raise ServiceError(409, "missing_frame", "upload a first frame before generating")
        doc = await request.json() if await request.body() else {}
        w = float(doc.get("w", DEFAULT_GUIDANCE))
        steps = int(doc.get("steps", DEFAULT_STEPS))
        seed = int(doc.get("seed", 0))
        if steps < 1:
            raise ServiceError(422, "invalid_parameters", "steps must be >= 1")

        tracks_doc = trajectories_to_doc(session.tracks) if session.tracks else None
        key = hashlib.sha256(
            session.frame.tobytes()
            + json.dumps(tracks_doc, sort_keys=True).encode()
            + f"|{w}|{steps}|{seed}".encode()
        ).hexdigest()[:16]

        with session.lock:
            if key in session.results:
                return {"result_id": key, "cached": True}
            if session.generating:
                raise ServiceError(
                    409, "generation_in_flight", "a generation is already running"
                )
            session.generating = True
        try:
            result = _generate(studio.model, session, w, steps, seed)
        finally:
            with session.lock:
                session.generating = False
        with session.lock:
            session.results[key] = result
        studio.persist(
            session, f"results/{key}/video.wmt1", write_tensor_bytes(result["video"])
        )
        return {"result_id": key, "cached": False}

    @app.get("/sessions/{session_id}/results/{result_id}")
    def get_result(session_id: str, result_id: str, format: str = Query("json")):
        session = studio.get(session_id)
        result = session.results.get(result_id)
        if result is None:
            raise ServiceError(404, "result_not_found", f"no result {result_id}")
        if format in ("apng", "wmt1"):
            return _video_response(result["video"], format)
        if format != "json":
            raise ServiceError(422, "unknown_format", f"format {format!r} not supported")
        import base64

        return {
            "result_id": result_id,
            "report": result["report"],
            "video_wmt1_base64": base64.b64encode(
                write_tensor_bytes(result["video"])
            ).decode(),
        }

    return app


def _generate(model: ToyDenoiser, session: Session, w: float, steps: int, seed: int) -> dict:
    geom = session.geometry
    codec = MockCodec(geometry=geom)
    rng = np.random.default_rng(seed)
    if session.tracks is not None and len(session.tracks):
        cond = replicate_features(
            session.cond_base, quantized_tracks(session.tracks), rng
        ).astype(np.float64)
    else:
        cond = session.cond_base
    bundle = ConditionBundle(condition=cond, uncond_condition=session.cond_base)
    latent = sample(model, bundle, w=w, steps=steps, rng=rng)
    video = decode(codec, latent.astype(np.float32))
    report: dict = {"w": w, "steps": steps, "seed": seed}
    if session.tracks is not None and len(session.tracks):
        pred = retrack_video(video, session.frame, session.tracks)
        report["epe"] = epe(session.tracks, pred)
        report["per_track_epe"] = {
            str(tid): epe(
                TrajectorySet(geometry=geom, tracks={tid: session.tracks.tracks[tid]}),
                TrajectorySet(geometry=geom, tracks={tid: pred.tracks[tid]}),
            )
            for tid in session.tracks.ids()
        }
        report["tracks"] = {
            str(tid): {
                "points": pred.tracks[tid].positions[:, ::-1].tolist(),
                "visible": [bool(v) for v in pred.tracks[tid].visible],
            }
            for tid in pred.ids()
        }
    return {"video": video, "report": report}
