"""FastAPI application exposing the package operations."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import (
    BudgetExceededError,
    InconsistentWeightsError,
    InvalidAngleError,
    InvalidModulusError,
    LatticeFormatError,
    NotFlippableError,
    SingularWeightError,
    StringRoutingError,
    TriplePointError,
)
from . import handlers
from .models import (
    EnumerateRequest,
    EnumerateResponse,
    LatticeBuildRequest,
    LatticeResponse,
    SolveRequest,
    SolveResponse,
    StarTriangleRequest,
    StarTriangleResponse,
    VerifyRequest,
    VerifyResponse,
    WeightsRequest,
    WeightsResponse,
)

_DOMAIN_ERRORS = (
    BudgetExceededError,
    InconsistentWeightsError,
    InvalidAngleError,
    InvalidModulusError,
    LatticeFormatError,
    NotFlippableError,
    SingularWeightError,
    StringRoutingError,
    TriplePointError,
    ValueError,
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="znpf",
        description="Discretely holomorphic parafermions for Z_N clock models "
        "on rhombically embedded lattices.",
        version="0.1.0",
    )

    @app.exception_handler(Exception)
    async def domain_error_handler(request: Request, exc: Exception):
        if isinstance(exc, _DOMAIN_ERRORS):
            return JSONResponse(status_code=400, content={"detail": str(exc)})
        raise exc

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/weights", response_model=WeightsResponse)
    def weights(req: WeightsRequest) -> WeightsResponse:
        return handlers.handle_weights(req)

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest) -> VerifyResponse:
        return handlers.handle_verify(req)

    @app.post("/solve", response_model=SolveResponse)
    def solve(req: SolveRequest) -> SolveResponse:
        return handlers.handle_solve(req)

    @app.post("/star-triangle", response_model=StarTriangleResponse)
    def star_triangle(req: StarTriangleRequest) -> StarTriangleResponse:
        return handlers.handle_star_triangle(req)

    @app.post("/lattice/build", response_model=LatticeResponse)
    def lattice_build(req: LatticeBuildRequest) -> LatticeResponse:
        return handlers.handle_lattice_build(req)

    @app.post("/enumerate", response_model=EnumerateResponse)
    def enumerate_(req: EnumerateRequest) -> EnumerateResponse:
        return handlers.handle_enumerate(req)

    return app


app = create_app()
