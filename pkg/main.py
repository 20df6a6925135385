import tomllib
from pathlib import Path
from typing import Any

from fastapi import FastAPI
from fastapi.openapi.utils import get_openapi

from src.api.endpoints import distributions, iceberg, survival, transforms, verify
from src.core.errors import CouponCollectorError, domain_exception_handler
from src.core.logging import configure_logging
from src.core.settings import settings


def _get_project_version() -> str:
    """Read project version from pyproject.toml, fallback to default."""
    try:
        pyproject_path = Path(__file__).parent / "pyproject.toml"
        with pyproject_path.open("rb") as f:
            data = tomllib.load(f)
        return data.get("project", {}).get("version", "0.1.0")
    except Exception:
        return "0.1.0"


configure_logging(settings.log_level)

app = FastAPI(
    title="Coupon Timer API",
    description="""
## Waiting times of the generalized coupon collector

Draws follow a distribution `p` over `n` coupons plus a null coupon of mass
`p0 = 1 - sum(p)`. `T` is the number of draws until `c` distinct non-null
coupons have been seen.

### Key Features:
- **Exact survival** `Pr{T > k}` in rational or float arithmetic, with a certified truncation tail
- **Oracles**: absorbing Markov chain, brute-force enumeration and seeded Monte-Carlo
- **Stochastic order**: verdicts between curves and the uniform and extremal bounds
- **Transforms**: lambda-mixing, uniformization and maximization traces
- **Iceberg detection**: worst-case flush-timer dimensioning and a router/server simulator
    """,
    version=_get_project_version(),
    openapi_tags=[
        {
            "name": "distributions",
            "description": "Validation, majorization and reference vectors",
        },
        {
            "name": "transforms",
            "description": "Lambda-mixing and the step traces built on it",
        },
        {
            "name": "survival",
            "description": "Survival values, curves, moments and dominance verdicts",
        },
        {
            "name": "iceberg",
            "description": "Flush-timer dimensioning and detection simulation",
        },
        {
            "name": "verify",
            "description": "Randomized falsification suites",
        },
    ],
    docs_url="/docs",
    redoc_url="/redoc",
)

# Add exception handlers
app.add_exception_handler(
    CouponCollectorError, domain_exception_handler
)  # type: ignore[arg-type]

# Include routers
app.include_router(distributions.router)
app.include_router(transforms.router)
app.include_router(survival.router)
app.include_router(iceberg.router)
app.include_router(verify.router)


def custom_openapi() -> dict[str, Any]:
    """Customize OpenAPI schema: add servers block for tooling/codegen."""
    if app.openapi_schema:
        return app.openapi_schema

    schema = get_openapi(
        title=app.title,
        version=app.version,
        description=app.description,
        routes=app.routes,
        tags=app.openapi_tags,
    )

    server_url = f"http://{settings.api_host}:{settings.api_port}"
    schema["servers"] = [
        {"url": server_url, "description": "Default API server"},
    ]

    app.openapi_schema = schema
    return app.openapi_schema


app.openapi = custom_openapi  # type: ignore[method-assign]


@app.get("/")
async def root() -> dict[str, Any]:
    return {"message": "Coupon Timer API", "docs": "/docs"}


@app.get("/health")
async def health_check() -> dict[str, str]:
    return {"status": "healthy"}
