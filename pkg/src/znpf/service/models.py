"""Pydantic request/response models shared by the HTTP service and the CLI."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class WeightsRequest(BaseModel):
    n: int = Field(ge=2)
    alpha: float


class WeightsResponse(BaseModel):
    n: int
    alpha: float
    x: list[float]
    free: list[float]


class VerifyRequest(BaseModel):
    n: int = Field(ge=2)
    m: int = Field(ge=0)
    alpha: float
    weights: Optional[list[float]] = None  # free couplings x_1..x_{N//2}
    anti: bool = False
    tol: float = 1e-10


class VerifyResponse(BaseModel):
    n: int
    m: int
    alpha: float
    weights: list[float]
    residuals: list[list[float]]  # [re, im] per sigma
    max_abs: float
    tol: float
    passed: bool


class SolveRequest(BaseModel):
    n: int = Field(ge=2)
    m: int = Field(ge=1)
    alpha: float
    both_orientations: bool = True


class SolveResponse(BaseModel):
    n: int
    m: int
    alpha: float
    particular: list[float]
    nullspace: list[list[float]]
    nullspace_dim: int
    residual_of_fit: float
    solvable: bool
    closed_form: Optional[list[float]] = None  # permuted critical point, when defined
    matches_closed_form: Optional[bool] = None


class StarTriangleRequest(BaseModel):
    n: int = Field(ge=2)
    alphas: list[float] = Field(min_length=3, max_length=3)
    star: Optional[list[list[float]]] = None  # free couplings per leg
    triangle: Optional[list[list[float]]] = None
    perturb: float = 0.0  # shift applied to the first star coupling
    tol: float = 1e-10


class StarTriangleResponse(BaseModel):
    n: int
    alphas: list[float]
    ratio: float
    max_dev: float
    tol: float
    passed: bool


class LatticeBuildRequest(BaseModel):
    kind: Literal["square", "triangular", "honeycomb", "multigrid"]
    rows: int = 3
    cols: int = 3
    size: int = 2
    alpha: float = 1.5707963267948966
    alpha2: Optional[float] = None
    angles: Optional[list[float]] = None  # multigrid directions
    offsets: Optional[list[float]] = None
    extent: int = 2
    n: Optional[int] = None  # assign critical weights when given


class LatticeResponse(BaseModel):
    kind: str
    vertices: int
    primal_vertices: int
    faces: int
    alphas: list[float]
    boundary: int
    lattice: dict


class StringSpec(BaseModel):
    sector: int
    path: list[int]


class EnumerateRequest(BaseModel):
    lattice: dict
    check: Literal["partition", "correlator", "face-sum", "per-config", "path-independence"]
    n: Optional[int] = None  # modulus for critical weight assignment
    m: int = 1
    face: Optional[int] = None
    anchor: Optional[int] = None
    path_a: Optional[list[int]] = None
    path_b: Optional[list[int]] = None
    spectators: list[tuple[int, int]] = []
    strings: list[StringSpec] = []
    perturb_x1: float = 0.0
    tol: float = 1e-10
    cap: int = 10**7
    workers: int = 1


class EnumerateResponse(BaseModel):
    check: str
    n: int
    m: int
    face: Optional[int] = None
    z: Optional[float] = None
    config_count: Optional[int] = None
    value: Optional[list[float]] = None  # [re, im]
    neutral: Optional[bool] = None
    residual: Optional[float] = None
    scale: Optional[float] = None
    deviation: Optional[float] = None
    gauge_power: Optional[int] = None
    tol: float
    passed: bool
