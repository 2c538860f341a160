"""HTTP JSON translation service backing the browser interface."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .checkpoint import LoadedModel
from .decode import translate_text


class TranslateRequest(BaseModel):
    text: str
    max_len: int | None = None


class TranslateResponse(BaseModel):
    source_tokens: list[str]
    target_tokens: list[str]
    translation: str
    attention: list[list[float]] | None
    log_prob: float
    truncated: bool
    model_id: str


def create_app(model: LoadedModel | None = None,
               static_dir: str | Path | None = None) -> FastAPI:
    """Build the service around a shared, read-only model."""
    app = FastAPI(title="snmt translation service")
    app.state.model = model
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"code": "malformed_request"})

    @app.get("/api/health")
    def health():
        m = app.state.model
        if m is None:
            raise HTTPException(status_code=503, detail={"code": "model_not_loaded"})
        return {"status": "ok", "model_id": m.model_id}

    @app.post("/api/translate", response_model=TranslateResponse)
    def translate(req: TranslateRequest):
        m = app.state.model
        if m is None:
            raise HTTPException(status_code=503, detail={"code": "model_not_loaded"})
        try:
            result = translate_text(m, req.text, req.max_len)
        except ValueError:
            raise HTTPException(
                status_code=422,
                detail={"code": "empty_input", "message": "enter a sentence"},
            )
        attention = None
        if result.attention is not None:
            attention = [[float(v) for v in row] for row in result.attention.rows]
        return TranslateResponse(
            source_tokens=result.source_tokens,
            target_tokens=result.target_tokens,
            translation=result.translation,
            attention=attention,
            log_prob=result.log_prob,
            truncated=result.truncated,
            model_id=m.model_id,
        )

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")
    return app
