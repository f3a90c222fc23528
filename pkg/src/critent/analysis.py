"""Sweep orchestration, finite-difference derivatives and scaling fits."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict
from itertools import product

import numpy as np

from . import density, dimer, ising2d, tfim

MI_IDENTITY_TOL = 1e-9

CSV_HEADER = "model,T,lambda,N,r,S_i,S_j,S_ij,MI,tag"

UNITS_COMMENTS = {
    "dimer": "# T in units of the Heisenberg coupling",
    "ising2d": "# T in units of Ising coupling; N in units of sqrt(2) lattice constant",
    "tfim": "# lambda: Ising coupling in units of the transverse field; r in lattice constants",
}


@dataclass(frozen=True)
class SweepRecord:
    """One sweep row; inapplicable fields are None (empty CSV columns)."""

    model: str
    T: float | None = None
    lam: float | None = None
    N: int | None = None
    r: int | None = None
    s_i: float | None = None
    s_j: float | None = None
    s_ij: float | None = None
    mi: float | None = None
    tag: str = ""

    def __post_init__(self):
        if self.mi is not None:
            gap = abs(self.mi - (self.s_i + self.s_j - self.s_ij))
            if gap > MI_IDENTITY_TOL or self.mi < 0:
                raise AssertionError(
                    f"MI identity violated by {gap:.3e} at {self}"
                )


@dataclass(frozen=True)
class FitResult:
    """kind: power_law (y = amplitude x^b), log_linear / log_cubic
    (y = a + b ln^d x).  coefficients = (exponent,) or (a, b);
    residual_norm is the rms residual in the fit's own space."""

    kind: str
    coefficients: tuple
    amplitude: float | None
    residual_norm: float
    n_points: int
    x_range: tuple

    def to_dict(self) -> dict:
        d = asdict(self)
        d["coefficients"] = list(self.coefficients)
        d["x_range"] = list(self.x_range)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "FitResult":
        return cls(
            kind=d["kind"],
            coefficients=tuple(d["coefficients"]),
            amplitude=d["amplitude"],
            residual_norm=d["residual_norm"],
            n_points=d["n_points"],
            x_range=tuple(d["x_range"]),
        )

    def predict(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "power_law":
            return self.amplitude * x ** self.coefficients[0]
        a, b = self.coefficients
        degree = {"log_linear": 1, "log_cubic": 3}[self.kind]
        return a + b * np.log(x) ** degree


def central_derivative(xs, ys) -> tuple[np.ndarray, np.ndarray]:
    """Central differences on a uniform grid; endpoints dropped."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape or len(xs) < 3:
        raise ValueError("need matching 1-d arrays with >= 3 points")
    steps = np.diff(xs)
    if np.any(steps <= 0):
        raise ValueError("x must be strictly increasing")
    if np.max(np.abs(steps - steps[0])) > 1e-12:
        raise ValueError("grid spacing must be uniform within 1e-12")
    deriv = (ys[2:] - ys[:-2]) / (xs[2:] - xs[:-2])
    return xs[1:-1], deriv


def derivative_at(f, x: float, step: float) -> float:
    """Two-point central difference of a scalar function."""
    return (f(x + step) - f(x - step)) / (2.0 * step)


def power_law_fit(xs, ys) -> FitResult:
    """Least squares of ln y on ln x: y = amplitude * x^exponent."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if len(xs) < 4:
        raise ValueError("power-law fit needs >= 4 points")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ValueError("power-law fit needs positive coordinates")
    lx, ly = np.log(xs), np.log(ys)
    design = np.column_stack([np.ones_like(lx), lx])
    (intercept, slope), *_ = np.linalg.lstsq(design, ly, rcond=None)
    resid = ly - design @ (intercept, slope)
    return FitResult(
        kind="power_law",
        coefficients=(float(slope),),
        amplitude=float(math.exp(intercept)),
        residual_norm=float(np.sqrt(np.mean(resid**2))),
        n_points=len(xs),
        x_range=(float(xs.min()), float(xs.max())),
    )


def log_poly_fit(xs, ys, degree: int, full: bool = False) -> FitResult:
    """Least squares of y = a + b (ln x)^degree, degree in {1, 3}.

    With full=True the design carries every power of ln x up to `degree`
    (diagnostic); the reported coefficients are still (a, b_leading).
    """
    if degree not in (1, 3):
        raise ValueError("degree must be 1 or 3")
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if len(xs) < degree + 2:
        raise ValueError(f"log fit of degree {degree} needs >= {degree + 2} points")
    if np.any(xs <= 0):
        raise ValueError("log fit needs positive x")
    lx = np.log(xs)
    if full:
        design = np.column_stack([lx**k for k in range(degree + 1)])
    else:
        design = np.column_stack([np.ones_like(lx), lx**degree])
    coeffs, *_ = np.linalg.lstsq(design, ys, rcond=None)
    resid = ys - design @ coeffs
    return FitResult(
        kind="log_linear" if degree == 1 else "log_cubic",
        coefficients=(float(coeffs[0]), float(coeffs[-1])),
        amplitude=None,
        residual_norm=float(np.sqrt(np.mean(resid**2))),
        n_points=len(xs),
        x_range=(float(xs.min()), float(xs.max())),
    )


def _entropies(rho_ij, rho_i):
    s_i = density.von_neumann_entropy(rho_i)
    s_ij = density.von_neumann_entropy(rho_ij)
    mi = density.mutual_information(rho_ij)
    return s_i, s_i, s_ij, mi


def _eval_dimer(point):
    rho = dimer.thermal_state(point["T"])
    rho_i = density.partial_trace(rho, {0})
    s_i, s_j, s_ij, mi = _entropies(rho, rho_i)
    return SweepRecord(model="dimer", T=point["T"], s_i=s_i, s_j=s_j,
                       s_ij=s_ij, mi=mi)


def _eval_ising2d(point):
    ensemble = point.get("ensemble", "symmetric")
    rho_ij = ising2d.two_site_state(point["T"], point["N"], ensemble)
    rho_i = ising2d.single_site_state(point["T"], ensemble)
    s_i, s_j, s_ij, mi = _entropies(rho_ij, rho_i)
    return SweepRecord(model="ising2d", T=point["T"], N=point["N"],
                       s_i=s_i, s_j=s_j, s_ij=s_ij, mi=mi, tag=ensemble)


def _eval_tfim(point):
    params = tfim.TfimParams(
        coupling=point["lam"],
        temperature=point["T"],
        sites=point["N"],
        separation=point["r"],
        sector=point.get("sector", "even"),
    )
    rho_ij = tfim.two_site_state(params)
    rho_i = tfim.single_site_state(params)
    s_i, s_j, s_ij, mi = _entropies(rho_ij, rho_i)
    return SweepRecord(model="tfim", T=point["T"], lam=point["lam"],
                       N=point["N"], r=point["r"],
                       s_i=s_i, s_j=s_j, s_ij=s_ij, mi=mi, tag=params.sector)


_EVALUATORS = {"dimer": _eval_dimer, "ising2d": _eval_ising2d, "tfim": _eval_tfim}

# canonical axis order for sweep grids, matching the CSV column order
_AXIS_ORDER = ("T", "lam", "N", "r")


def sweep(model: str, axes: dict, fixed: dict | None = None, workers: int = 1):
    """Evaluate `model` over the cartesian grid in `axes`.

    Rows come out in lexicographic order of the canonical axes
    (T, lambda, N, r) regardless of worker count.  A failing point becomes
    an error row (tag = "error: ...") instead of aborting the sweep.
    """
    if model not in _EVALUATORS:
        raise ValueError(f"unknown model {model!r}")
    fixed = dict(fixed or {})
    names = [n for n in _AXIS_ORDER if n in axes]
    extra = set(axes) - set(names)
    if extra:
        raise ValueError(f"unknown grid axes {sorted(extra)}")
    grids = [list(axes[n]) for n in names]
    points = [dict(zip(names, combo), **fixed) for combo in product(*grids)]
    evaluator = _EVALUATORS[model]

    def run_point(point):
        try:
            return evaluator(point)
        except Exception as exc:  # error rows must not abort the sweep
            return SweepRecord(
                model=model,
                T=point.get("T"),
                lam=point.get("lam"),
                N=point.get("N"),
                r=point.get("r"),
                tag=f"error: {exc}",
            )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run_point, points))
    return [run_point(p) for p in points]


# ---------------------------------------------------------------------------
# scaling drivers (declared fit policies; grids recorded in the results)
# ---------------------------------------------------------------------------

#: temperature offsets from T_c for the derivative-exponent fits
BELOW_TC_OFFSETS = tuple(np.geomspace(1e-3, 1e-1, 15))
#: the log law holds in the near-critical window; beyond ~1/(2.2 N) the
#: exponential collapse of the correlation bends the curve away from ln t
ABOVE_TC_OFFSETS = tuple(np.geomspace(1e-3, 3e-2, 12))
#: lambda-derivative step for the scaling fits; the default 1e-3 step
#: smears the critical window (~1/N) once N reaches a few thousand
SCALING_STEP = 1e-4
NN_SCALING_SITES = (64, 128, 256, 512, 1024, 2048, 4096)
FAR_SCALING_SITES = (32, 64, 128, 256, 512)


def _tc_step(offset: float) -> float:
    # keep the stencil clear of the singularity at T_c
    return min(1e-3, offset / 10.0)


def ising2d_derivative_exponent(side: str, separation: int = 30) -> dict:
    """dMI/dT critical laws at fixed separation (symmetric ensemble).

    side="below": power-law fit of |dMI/dT| against T_c - T.
    side="above": linear fit of dMI/dT against ln(T - T_c).
    Returns the FitResult plus the grids used.
    """
    tc = ising2d.critical_temperature()
    if side == "below":
        offsets = np.array(BELOW_TC_OFFSETS)
        sign = -1.0
    elif side == "above":
        offsets = np.array(ABOVE_TC_OFFSETS)
        sign = +1.0
    else:
        raise ValueError("side must be 'below' or 'above'")
    derivs = np.array([
        derivative_at(
            lambda T: ising2d.correlation_mi(T, separation),
            tc + sign * t,
            _tc_step(t),
        )
        for t in offsets
    ])
    if side == "below":
        fit = power_law_fit(offsets, np.abs(derivs))
    else:
        fit = log_poly_fit(offsets, derivs, degree=1)
    data_range = float(np.max(derivs) - np.min(derivs))
    return {
        "side": side,
        "separation": separation,
        "offsets": offsets.tolist(),
        "derivatives": derivs.tolist(),
        "fit": fit,
        "relative_residual": (
            fit.residual_norm / abs(data_range) if data_range else math.inf
        ),
    }


def _tfim_mi_at(coupling: float, sites: int, separation: int) -> float:
    return tfim.correlation_mi(tfim.TfimParams(
        coupling=coupling, temperature=0.0, sites=sites, separation=separation,
    ))


def tfim_nn_scaling(sites_list=NN_SCALING_SITES, step: float = SCALING_STEP) -> dict:
    """dMI(0,1)/dlambda at lambda = 1 against ln N (log-linear fit)."""
    derivs = [
        derivative_at(lambda lam: _tfim_mi_at(lam, n, 1), 1.0, step)
        for n in sites_list
    ]
    fit = log_poly_fit(np.array(sites_list, dtype=float), derivs, degree=1)
    rng = max(derivs) - min(derivs)
    return {
        "sites": list(sites_list),
        "derivatives": derivs,
        "fit": fit,
        "relative_residual": fit.residual_norm / rng if rng else math.inf,
    }


def tfim_peak_far_derivative(sites: int, step: float = SCALING_STEP) -> tuple[float, float]:
    """Max over lambda of dMI(0, N/2)/dlambda: coarse 0.005 grid on
    [0.9, 1.15], then one refinement by a factor of 5 around the peak."""
    r = sites // 2

    def deriv(lam):
        return derivative_at(lambda x: _tfim_mi_at(x, sites, r), lam, step)

    coarse = np.arange(0.9, 1.15 + 1e-12, 0.005)
    vals = [deriv(lam) for lam in coarse]
    best = int(np.argmax(vals))
    fine = coarse[best] + np.arange(-4, 5) * 0.001
    fvals = [deriv(lam) for lam in fine]
    fbest = int(np.argmax(fvals))
    return float(fine[fbest]), float(fvals[fbest])


def tfim_far_scaling(sites_list=FAR_SCALING_SITES, step: float = SCALING_STEP) -> dict:
    """Peak of dMI(0, N/2)/dlambda against ln^3 N, with the ln N fit as a
    comparison model."""
    peaks = []
    locations = []
    for n in sites_list:
        lam, val = tfim_peak_far_derivative(n, step)
        locations.append(lam)
        peaks.append(val)
    xs = np.array(sites_list, dtype=float)
    fit_cubic = log_poly_fit(xs, peaks, degree=3)
    fit_linear = log_poly_fit(xs, peaks, degree=1)
    rng = max(peaks) - min(peaks)
    return {
        "sites": list(sites_list),
        "peak_locations": locations,
        "peaks": peaks,
        "fit": fit_cubic,
        "fit_linear": fit_linear,
        "relative_residual": fit_cubic.residual_norm / rng if rng else math.inf,
        "relative_residual_linear": fit_linear.residual_norm / rng if rng else math.inf,
    }


def _format_number(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return f"{value:.12g}"


def records_to_csv(records, model: str | None = None) -> str:
    """Stable CSV: units comment, fixed header, 12 significant digits."""
    lines = []
    models = {r.model for r in records} if model is None else {model}
    for name in sorted(models):
        if name in UNITS_COMMENTS:
            lines.append(UNITS_COMMENTS[name])
    lines.append(CSV_HEADER)
    for rec in records:
        lines.append(",".join([
            rec.model,
            _format_number(rec.T),
            _format_number(rec.lam),
            _format_number(rec.N),
            _format_number(rec.r),
            _format_number(rec.s_i),
            _format_number(rec.s_j),
            _format_number(rec.s_ij),
            _format_number(rec.mi),
            rec.tag,
        ]))
    return "\n".join(lines) + "\n"


def records_to_json(records) -> dict:
    """JSON payload matching schemas/sweep.schema.json."""
    rows = []
    for rec in records:
        rows.append({
            "model": rec.model,
            "T": rec.T,
            "lambda": rec.lam,
            "N": rec.N,
            "r": rec.r,
            "S_i": rec.s_i,
            "S_j": rec.s_j,
            "S_ij": rec.s_ij,
            "MI": rec.mi,
            "tag": rec.tag,
        })
    return {"records": rows}
