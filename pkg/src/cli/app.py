"""
Command-line front end ``cct``.

Every input comes from flags. Results go to stdout as CSV or JSON
(``--format``), diagnostics to stderr. Exit codes: 0 success, 1 domain error
(or a failed ``verify``), 2 usage error.
"""

import functools
import logging
import sys
from collections.abc import Callable, Sequence
from dataclasses import fields
from typing import Annotated, ParamSpec, TypeVar

import click
import typer
from pydantic import BaseModel, RootModel

from src.core.di import get_artifact_repository
from src.core.errors import CouponCollectorError
from src.core.logging import configure_logging
from src.core.settings import settings
from src.models.api import QuantileResponse, TimerResponse
from src.models.common import format_scalar
from src.models.distribution import CouponDistribution, ThetaFamily, TransformTrace
from src.models.enums import ArithmeticMode, OutputFormat, SurvivalMethod
from src.models.oracle import McEstimate
from src.models.ordering import DominanceVerdict, TheoremSuiteReport
from src.models.survival import ExpectationResult, SurvivalTable
from src.repositories.artifacts import STDOUT
from src.services.exact import ExactSurvivalService
from src.services.icebergsim import IcebergSimulationService
from src.services.oracle import OracleService
from src.services.ordering import OrderingService
from src.services.probmodel import ProbModelService
from src.services.survival import SurvivalEvaluationService
from src.services.verification import SuiteSizes, VerificationService

P = ParamSpec("P")
R = TypeVar("R")

app = typer.Typer(
    name="cct",
    help="Coupon collector waiting times and flush-timer dimensioning.",
    no_args_is_help=True,
    add_completion=False,
)
transform_app = typer.Typer(
    help="Lambda-mixing and the uniformize/maximize traces.", no_args_is_help=True
)
app.add_typer(transform_app, name="transform")

# Shared options
Entries = Annotated[
    str, typer.Option("--p", help="Entries p_1..p_n, e.g. 1/16,1/6,1/4 or 0.5,0.3")
]
NullMass = Annotated[
    str | None,
    typer.Option("--p0", help="Null mass; implied by the entries when omitted"),
]
CollectionSize = Annotated[
    int, typer.Option("--c", min=1, help="Distinct coupons to collect")
]
Mode = Annotated[
    ArithmeticMode | None,
    typer.Option("--mode", help="Force float or rational arithmetic"),
]
Format = Annotated[OutputFormat, typer.Option("--format", help="Output format")]
Seed = Annotated[
    str | None,
    typer.Option("--seed", help="Generator seed, decimal or 0x-prefixed hex"),
]
Replicates = Annotated[
    int, typer.Option("--replicates", min=1, help="Monte-Carlo replicates")
]


def _domain_errors(command: Callable[P, R]) -> Callable[P, R]:
    """Report domain errors on stderr and exit with status 1."""

    @functools.wraps(command)
    def run(*args: P.args, **kwargs: P.kwargs) -> R:
        try:
            return command(*args, **kwargs)
        except CouponCollectorError as exc:
            typer.echo(f"error [{exc.code}]: {exc.message}", err=True)
            raise typer.Exit(code=1) from exc

    return run


def _seed(value: str | None) -> int:
    if value is None:
        return 0
    try:
        seed = int(value, 0)
    except ValueError as exc:
        raise typer.BadParameter(
            f"{value!r} is not an integer", param_hint="--seed"
        ) from exc
    if seed < 0:
        raise typer.BadParameter("seeds are non-negative", param_hint="--seed")
    return seed


def _pairs(value: str | None) -> list[tuple[int, int]] | None:
    if not value:
        return None
    pairs = []
    for part in value.split(","):
        try:
            i, j = (int(x) for x in part.split(":"))
        except ValueError as exc:
            raise typer.BadParameter(
                f"{part!r} is not an i:j pair", param_hint="--pairs"
            ) from exc
        pairs.append((i, j))
    return pairs


def _distribution(
    p: str, p0: str | None, mode: ArithmeticMode | None
) -> CouponDistribution:
    distribution = ProbModelService.parse_distribution(p, mode)
    if p0 is not None:
        # raises NullMassMismatch when the flag disagrees with 1 - sum(p)
        CouponDistribution(entries=distribution.entries, null_mass=p0)
    return distribution


def _vector_row(p: CouponDistribution) -> dict[str, str]:
    row = {f"p_{k}": format_scalar(v) for k, v in enumerate(p.entries, start=1)}
    row["p0"] = format_scalar(p.null_mass)
    return row


def _trace_rows(trace: TransformTrace) -> list[dict[str, str]]:
    rows = [{"step": "0", "i": "", "j": "", "lambda": "", **_vector_row(trace.start)}]
    for number, step in enumerate(trace.steps, start=1):
        rows.append(
            {
                "step": str(number),
                "i": str(step.index_i),
                "j": str(step.index_j),
                "lambda": format_scalar(step.weight),
                **_vector_row(step.result),
            }
        )
    return rows


def _estimate_rows(estimates: Sequence[McEstimate]) -> list[dict[str, str]]:
    return [
        {
            "k": "" if e.k is None else str(e.k),
            "estimate": repr(e.estimate),
            "ci_low": repr(e.ci_low),
            "ci_high": repr(e.ci_high),
            "replicates": str(e.replicates),
            "seed": str(e.seed),
        }
        for e in estimates
    ]


def _emit(fmt: OutputFormat, model: BaseModel, rows: list[dict[str, str]]) -> None:
    repository = get_artifact_repository()
    if fmt is OutputFormat.JSON:
        repository.write_json(STDOUT, model)
    else:
        repository.write_csv(STDOUT, rows)


@app.callback()
def main_options(
    verbose: Annotated[
        bool, typer.Option("--verbose", "-v", help="Log debug output to stderr")
    ] = False,
) -> None:
    configure_logging(logging.DEBUG if verbose else settings.log_level)


@app.command("dist")
@_domain_errors
def dist(
    p: Entries,
    c: CollectionSize,
    p0: NullMass = None,
    kmax: Annotated[
        int | None, typer.Option("--kmax", min=0, help="Last k of the table")
    ] = None,
    delta: Annotated[
        float | None,
        typer.Option(
            "--delta", min=0, max=1, help="Truncate where the tail is below delta"
        ),
    ] = None,
    method: Annotated[SurvivalMethod, typer.Option("--method")] = SurvivalMethod.EXACT,
    replicates: Replicates = 1_000_000,
    seed: Seed = None,
    fmt: Format = OutputFormat.CSV,
    mode: Mode = None,
) -> None:
    """Survival table Pr{T > k}, or a certified curve when --kmax is omitted."""
    distribution = _distribution(p, p0, mode)
    if kmax is not None and delta is not None:
        raise typer.BadParameter("give either --kmax or --delta", param_hint="--kmax")

    if method is SurvivalMethod.MC:
        if kmax is None:
            raise typer.BadParameter("the mc method needs --kmax", param_hint="--kmax")
        estimates = SurvivalEvaluationService.estimates(
            distribution, c, kmax, replicates, _seed(seed)
        )
        _emit(fmt, RootModel[list[McEstimate]](estimates), _estimate_rows(estimates))
        return

    if kmax is None:
        if method is not SurvivalMethod.EXACT:
            raise typer.BadParameter(
                f"the {method} method needs --kmax", param_hint="--kmax"
            )
        curve = ExactSurvivalService.survival_curve(distribution, c, delta)
        _emit(fmt, curve, curve.csv_rows())
        return

    values = SurvivalEvaluationService.values(distribution, c, kmax, method)
    table = SurvivalTable(method=method, c=c, values=values)
    _emit(fmt, table, table.csv_rows())


@app.command("expect")
@_domain_errors
def expect(
    p: Entries,
    c: CollectionSize,
    p0: NullMass = None,
    method: Annotated[SurvivalMethod, typer.Option("--method")] = SurvivalMethod.EXACT,
    replicates: Replicates = 1_000_000,
    seed: Seed = None,
    fmt: Format = OutputFormat.CSV,
    mode: Mode = None,
) -> None:
    """Expected waiting time E[T]."""
    distribution = _distribution(p, p0, mode)
    if method is SurvivalMethod.MC:
        estimate = OracleService.mc_expectation(
            distribution, c, replicates, _seed(seed)
        )
        _emit(fmt, estimate, _estimate_rows([estimate]))
        return
    if method is SurvivalMethod.EXACT:
        value = ExactSurvivalService.expectation(distribution, c)
    elif method is SurvivalMethod.MARKOV:
        value = OracleService.expectation_markov(distribution, c)
    else:
        raise typer.BadParameter(
            "expectations use the exact, markov or mc method", param_hint="--method"
        )
    result = ExpectationResult(method=method, expectation=value)
    _emit(fmt, result, result.csv_rows())


@app.command("quantile")
@_domain_errors
def quantile(
    p: Entries,
    c: CollectionSize,
    delta: Annotated[float, typer.Option("--delta", help="Tail probability in (0, 1)")],
    p0: NullMass = None,
    fmt: Format = OutputFormat.CSV,
    mode: Mode = None,
) -> None:
    """Smallest k with Pr{T > k} <= delta."""
    k = ExactSurvivalService.quantile(_distribution(p, p0, mode), c, delta)
    if fmt is OutputFormat.JSON:
        get_artifact_repository().write_json(STDOUT, QuantileResponse(k=k))
    else:
        typer.echo(k)


@app.command("compare")
@_domain_errors
def compare(
    p: Entries,
    q: Annotated[
        str, typer.Option("--q", help="Entries of the right-hand distribution")
    ],
    c: CollectionSize,
    delta: Annotated[
        float | None, typer.Option("--delta", help="Truncation target of both curves")
    ] = None,
    tol: Annotated[float | None, typer.Option("--tol", min=0)] = None,
    strict: Annotated[
        bool,
        typer.Option("--strict/--no-strict", help="Fail on a long truncation tail"),
    ] = True,
    fmt: Format = OutputFormat.CSV,
    mode: Mode = None,
) -> None:
    """Compare T(p) and T(q) in the strong stochastic order."""
    left = ProbModelService.parse_distribution(p, mode)
    right = ProbModelService.parse_distribution(q, mode)
    verdict: DominanceVerdict = OrderingService.stochastic_compare(
        ExactSurvivalService.survival_curve(left, c, delta),
        ExactSurvivalService.survival_curve(right, c, delta),
        tol,
        strict=strict,
    )
    row = {
        "relation": str(verdict.relation),
        "witness_k": "" if verdict.witness_k is None else str(verdict.witness_k),
        "checked_up_to": str(verdict.checked_up_to),
        "residual_bound": format_scalar(verdict.residual_bound),
    }
    _emit(fmt, verdict, [row])


@transform_app.command("uniformize")
@_domain_errors
def uniformize(
    p: Entries,
    pairs: Annotated[
        str | None,
        typer.Option("--pairs", help="Explicit i:j steps replayed first, e.g. 4:5,2:5"),
    ] = None,
    fmt: Format = OutputFormat.CSV,
    mode: Mode = None,
) -> None:
    """Drive p to the almost-uniform vector."""
    trace = ProbModelService.uniformize_trace(
        ProbModelService.parse_distribution(p, mode), _pairs(pairs)
    )
    _emit(fmt, trace, _trace_rows(trace))


@transform_app.command("maximize")
@_domain_errors
def maximize(
    p: Entries,
    theta: Annotated[str, typer.Option("--theta", help="Entry floor of A_theta")],
    j: Annotated[int, typer.Option("--j", min=1, help="Position that receives gamma")],
    fmt: Format = OutputFormat.CSV,
    mode: Mode = None,
) -> None:
    """Drive p in A_theta to the B_theta member holding gamma at --j."""
    trace = ProbModelService.maximize_trace(
        ProbModelService.parse_distribution(p, mode), theta, j
    )
    _emit(fmt, trace, _trace_rows(trace))


@transform_app.command("mix")
@_domain_errors
def mix(
    p: Entries,
    i: Annotated[int, typer.Option("--i", min=1)],
    j: Annotated[int, typer.Option("--j", min=1)],
    weight: Annotated[str, typer.Option("--lambda", help="Mixing weight in [0, 1]")],
    fmt: Format = OutputFormat.CSV,
    mode: Mode = None,
) -> None:
    """Mix entries i and j with weight lambda."""
    result = ProbModelService.lambda_transform(
        ProbModelService.parse_distribution(p, mode), i, j, weight
    )
    _emit(fmt, result, [_vector_row(result)])


@app.command("extremal")
@_domain_errors
def extremal(
    n: Annotated[int, typer.Option("--n", min=1)],
    theta: Annotated[str, typer.Option("--theta")],
    p0: Annotated[str, typer.Option("--p0")] = "0",
    j: Annotated[
        int | None, typer.Option("--j", min=1, help="Only the member with gamma at j")
    ] = None,
    fmt: Format = OutputFormat.CSV,
) -> None:
    """Members of B_theta: every entry theta except one gamma."""
    family = ThetaFamily(n=n, null_mass=p0, theta=theta)
    members = family.members() if j is None else [family.member(j)]
    _emit(
        fmt,
        RootModel[list[CouponDistribution]](members),
        [_vector_row(member) for member in members],
    )


@app.command("timer")
@_domain_errors
def timer(
    n: Annotated[int, typer.Option("--n", min=1)],
    c: CollectionSize,
    theta: Annotated[str, typer.Option("--theta")],
    delta: Annotated[float, typer.Option("--delta")],
    p0: Annotated[str, typer.Option("--p0")] = "0",
    fmt: Format = OutputFormat.CSV,
) -> None:
    """Worst-case flush timer: the delta-quantile over B_theta."""
    timer_k = IcebergSimulationService.dimension_timer(n, c, theta, p0, delta)
    if fmt is OutputFormat.JSON:
        get_artifact_repository().write_json(STDOUT, TimerResponse(timer_k=timer_k))
    else:
        typer.echo(timer_k)


@app.command("simulate")
@_domain_errors
def simulate(
    config: Annotated[str, typer.Option("--config", help="Scenario JSON file")],
    out: Annotated[
        str | None, typer.Option("--out", help="Also write the JSON report here")
    ] = None,
    samples: Annotated[
        str | None,
        typer.Option("--samples", help="Also write inter-flush samples as CSV"),
    ] = None,
    seed: Seed = None,
    fmt: Format = OutputFormat.CSV,
) -> None:
    """Run a detection scenario; CSV output lists the inter-flush samples."""
    repository = get_artifact_repository()
    scenario = repository.load_sim_config(config)
    if seed is not None:
        scenario = scenario.model_copy(update={"seed": _seed(seed)})
    report = IcebergSimulationService.run_simulation(scenario)
    if out is not None:
        repository.write_json(out, report)
    if samples is not None:
        repository.write_csv(samples, report.csv_rows())
    _emit(fmt, report, report.csv_rows())


@app.command("verify")
@_domain_errors
def verify(
    seed: Seed = None,
    instances: Annotated[
        int | None,
        typer.Option(
            "--instances", min=1, help="Instances per suite; full sizes by default"
        ),
    ] = None,
    fmt: Format = OutputFormat.CSV,
) -> int:
    """Run the randomized dominance and identity suites; exit 1 on any counterexample."""
    sizes = None
    if instances is not None:
        sizes = SuiteSizes(**{field.name: instances for field in fields(SuiteSizes)})
    report: TheoremSuiteReport = VerificationService.run_theorem_suite(
        None if seed is None else _seed(seed), sizes
    )
    rows = [
        {
            "suite": suite.name,
            "instances": str(suite.instances),
            "failures": str(len(suite.failures)),
            "passed": str(suite.passed).lower(),
        }
        for suite in report.suites
    ]
    _emit(fmt, report, rows)
    for suite in report.suites:
        for failure in suite.failures:
            typer.echo(f"{suite.name} #{failure.instance}: {failure.detail}", err=True)
    if not report.passed:
        raise typer.Exit(code=1)
    return 0


def dispatch(argv: Sequence[str] | None = None) -> int:
    """Run one invocation and return its exit code instead of exiting."""
    command = typer.main.get_command(app)
    try:
        result = command.main(
            args=list(argv) if argv is not None else None,
            prog_name="cct",
            standalone_mode=False,
        )
    except click.UsageError as exc:
        exc.show()
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        typer.echo("Aborted.", err=True)
        return 1
    return result if isinstance(result, int) else 0


def main() -> None:
    sys.exit(dispatch())
