"""Experiment configuration, execution and CSV/SVG emission."""

from __future__ import annotations

import csv
import datetime as _dt
import io
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import __version__
from . import analysis
from .errors import ConfigurationError
from .evaluator import QuadratureSpec, apply_grid
from .functions import builtin
from .kernel import UnSequence
from .svg import line_chart

KINDS = ("figure1", "figure2", "korovkin", "voronovskaya", "gruss", "quantitative", "bounds", "custom")

TARGET_COLOUR = "blue"
PALETTES = {
    "figure1": ("green", "red", "black"),
    "figure2": ("pink", "red", "magenta", "black", "green"),
}
DEFAULT_PALETTE = ("green", "red", "black", "magenta", "orange", "purple", "brown", "teal",
                   "olive", "gray")

# kind -> (function, second function, n list, evaluation point, quadrature scheme)
_DEFAULTS = {
    "figure1": ("exp", None, (25, 50, 100), None, "gauss-laguerre"),
    "figure2": ("x2sin2pix", None, (50, 100, 150, 200, 300), None, "adaptive"),
    "custom": ("one", None, (25, 50, 100), None, "gauss-laguerre"),
    "korovkin": ("t^2", None, (10, 100, 1000), None, "gauss-laguerre"),
    "voronovskaya": ("exp_neg", None, tuple(analysis.dyadic(4, 12)), 1.0, "gauss-laguerre"),
    "gruss": ("exp_neg", "sin_plus_2", tuple(analysis.dyadic(4, 12)), 1.0, "gauss-laguerre"),
    "quantitative": ("exp", None, tuple(analysis.dyadic(4, 10)), 1.0, "gauss-laguerre"),
    "bounds": ("exp_neg", None, (10, 50, 100, 1000), 1.0, "gauss-laguerre"),
}


@dataclass(frozen=True)
class ExperimentSpec:
    kind: str
    function: Optional[str] = None
    function2: Optional[str] = None
    ns: Optional[Tuple[int, ...]] = None
    sequence: UnSequence = UnSequence()
    x_min: float = 0.0
    x_max: float = 4.0
    points: int = 401
    x0: Optional[float] = None
    quad: Optional[QuadratureSpec] = None
    csv_path: Optional[str] = None
    svg_path: Optional[str] = None

    def resolved(self) -> "ExperimentSpec":
        """Validate and fill kind-specific defaults."""
        if self.kind not in KINDS:
            raise ConfigurationError("kind", f"unknown experiment {self.kind!r}; choose from {KINDS}")
        fn, fn2, ns, x0, scheme = _DEFAULTS[self.kind]
        spec = replace(
            self,
            function=self.function or fn,
            function2=self.function2 or fn2,
            ns=tuple(self.ns) if self.ns else ns,
            x0=self.x0 if self.x0 is not None else x0,
            quad=self.quad or QuadratureSpec(scheme=scheme,
                                             series_tol=1e-10 if scheme == "adaptive" else 1e-14),
        )
        if not spec.ns or any(n < 1 for n in spec.ns):
            raise ConfigurationError("ns", "n list must be nonempty with entries >= 1")
        if any(b <= a for a, b in zip(spec.ns, spec.ns[1:])):
            raise ConfigurationError("ns", "n list must be strictly increasing")
        if not (0 <= spec.x_min < spec.x_max) or not math.isfinite(spec.x_max):
            raise ConfigurationError("x_range", "need 0 <= x_min < x_max < inf")
        if spec.points < 2:
            raise ConfigurationError("points", "need at least 2 grid points")
        if spec.x0 is not None and spec.x0 < 0:
            raise ConfigurationError("x0", "evaluation point must be nonnegative")
        builtin(spec.function)
        if spec.function2:
            builtin(spec.function2)
        return spec

    def echo(self) -> dict:
        d = asdict(self)
        d["sequence"] = self.sequence.describe()
        d["ns"] = list(self.ns) if self.ns else None
        return d


@dataclass
class ExperimentReport:
    spec: ExperimentSpec
    metadata: dict
    xs: np.ndarray
    target: np.ndarray
    values: Dict[int, np.ndarray]
    summary: Dict[int, Tuple[float, float]]
    series: Optional[analysis.ResidualSeries] = None
    checks: List[dict] = field(default_factory=list)

    @property
    def ns(self) -> List[int]:
        return list(self.values)

    def sup_errors(self) -> List[float]:
        return [self.summary[n][0] for n in self.ns]

    def rows(self):
        for i, x in enumerate(self.xs):
            yield [x, self.target[i]] + [self.values[n][i] for n in self.ns]


def _residual_part(spec: ExperimentSpec, g, u_values):
    kind, q = spec.kind, spec.quad
    if kind == "korovkin":
        xs = np.linspace(spec.x_min, spec.x_max, spec.points)
        errs = [analysis.korovkin_errors(u, xs) for u in u_values]
        # series tracks the t**2 sup error; all three are kept in extra
        return analysis.ResidualSeries(list(spec.ns), u_values, [e[2] for e in errs],
                                       extra={"sup_errors": [list(e) for e in errs]}), []
    if kind == "voronovskaya":
        return analysis.voronovskaya_series(g, spec.x0, spec.ns, spec.sequence, q), []
    if kind == "gruss":
        return analysis.gruss_series(g, builtin(spec.function2), spec.x0, spec.ns,
                                     spec.sequence, q), []
    if kind == "quantitative":
        return analysis.quantitative_voronovskaya_check(g, spec.x0, spec.ns, spec.sequence, q), []
    if kind == "bounds":
        checks = []
        grid = np.linspace(spec.x_min, spec.x_max, spec.points)
        for u in u_values:
            res = analysis.theorem1_check(g, 1.0, u, spec.x0, grid=grid, q=q)
            checks.append({"u_n": u, "x": spec.x0, "lhs": res.lhs, "rhs": res.rhs,
                           "kappa": res.constant, "certified": res.certified, "holds": res.holds})
        return None, checks
    return None, []


def run(spec: ExperimentSpec) -> ExperimentReport:
    """Evaluate the operator for every ``n`` on the x grid, plus any residual study."""
    spec = spec.resolved()
    g = builtin(spec.function)
    xs = np.linspace(spec.x_min, spec.x_max, spec.points)
    target = g(xs)
    u_values = spec.sequence.values(spec.ns)
    values, summary = {}, {}
    for n, u in zip(spec.ns, u_values):
        vals = np.array([e.value for e in apply_grid(g, u, xs, spec.quad)])
        err = np.abs(vals - target)
        values[n] = vals
        summary[n] = (float(err.max()), float(err.mean()))
    series, checks = _residual_part(spec, g, u_values)
    palette = PALETTES.get(spec.kind, DEFAULT_PALETTE)
    metadata = {
        "spec": spec.echo(),
        "u_n": dict(zip(spec.ns, u_values)),
        "tolerances": {"series_tol": spec.quad.series_tol, "quad_order": spec.quad.order},
        "colors": {"target": TARGET_COLOUR,
                   **{n: palette[i % len(palette)] for i, n in enumerate(spec.ns)}},
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "version": __version__,
    }
    return ExperimentReport(spec, metadata, xs, target, values, summary, series, checks)


def _num(v: float) -> str:
    return f"{v:.12g}"


def csv_text(report: ExperimentReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "g"] + [f"S_{n}" for n in report.ns])
    for row in report.rows():
        w.writerow([_num(v) for v in row])
    buf.write("# summary\n# n,u_n,sup_error,mean_error\n")
    for n in report.ns:
        sup, mean = report.summary[n]
        buf.write(f"# {n},{_num(report.metadata['u_n'][n])},{_num(sup)},{_num(mean)}\n")
    return buf.getvalue()


def emit_csv(report: ExperimentReport, path: str) -> None:
    """Write the grid table with a ``#``-prefixed error summary."""
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text(report))
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def read_csv(path: str):
    """Parse an emitted CSV into ``(header, rows, summary_lines)``."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    data = [ln for ln in lines if not ln.startswith("#")]
    comments = [ln[1:].strip() for ln in lines if ln.startswith("#")]
    header = data[0].split(",")
    rows = [[float(v) for v in ln.split(",")] for ln in data[1:] if ln]
    return header, rows, comments


def svg_text(report: ExperimentReport) -> str:
    if len(report.xs) < 2:
        raise ValueError("need at least two rows to draw a chart")
    colours = report.metadata["colors"]
    u = report.metadata["u_n"]
    series = [(f"g = {report.spec.function}", report.target, colours["target"])]
    series += [(f"S*_{n} (u_n={u[n]:g})", report.values[n], colours[n]) for n in report.ns]
    return line_chart(report.xs, series, title=f"{report.spec.kind}: operator vs {report.spec.function}",
                      x_label="x", y_label="value")


def emit_svg(report: ExperimentReport, path: str) -> None:
    """Write the chart; identical reports give byte-identical files."""
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(svg_text(report))
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc}") from exc
