"""HTTP service wrapping the froxel pipelines.

The FastAPI app in `froxel.service.app` exposes one POST endpoint per
pipeline (gen-scene, add-noise, bin, fristogram, analyze, reduce,
synthesize, metrics) plus GET /health.  Requests and responses are the
pydantic models in `froxel.service.schemas`; the actual work, including
writing outputs and run manifests, lives in `froxel.service.pipeline`.
The CLI is a thin client of this service.
"""
