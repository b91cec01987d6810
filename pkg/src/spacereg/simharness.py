"""Scenario generators, error metrics and the replication study driver.

A :class:`Scenario` bundles a design law, a target function, a noise model
and a sample size.  :func:`run_study` replays the full evaluation protocol
over seeded replications: per replication one data set is generated; the
maximum-error metric cross-validates the bandwidth on the whole sample and
scores the fit against the truth on a fixed metric grid, while the
holdout-MSE metric cross-validates on a seeded 80% training split and
scores noisy predictions on the remaining 20%.  Splits and folds are shared
by all estimators within a replication, and the whole report is a pure
function of (scenario, estimators, replications, base_seed).
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from . import streams
from .bandwidth import CvPlan, cross_validate, default_h_grid, default_span_grid, make_folds
from .design import RawSample, prepare_sample
from .estimators import FittedCurve, fit_loess1, fit_nw, fit_ulc, fit_ull
from .exceptions import InvalidArgumentError, UndefinedMetricError
from .kernels import Kernel, get_kernel

__all__ = [
    "Scenario",
    "ReplicationReport",
    "BUILTIN_SCENARIOS",
    "builtin_scenario",
    "target_value",
    "gen_design",
    "metric_grid_points",
    "max_error",
    "empirical_modulus",
    "mse_holdout",
    "run_study",
    "wilcoxon_signed_rank",
]

DESIGN_LAWS = (
    "uniform_mixture",
    "density_rejection",
    "trig_dependent",
    "trig_subsampled",
    "bernoulli_switch",
)


@dataclass(frozen=True)
class Scenario:
    """A named generative model for one simulation example."""

    id: str
    domain: tuple[float, float]
    n: int
    design_law: str
    target_id: str
    sigma: float
    design_params: dict = field(default_factory=dict)
    noise: str = "gaussian"
    metric_grid: str = "domain"  # or "design_range"

    def __post_init__(self):
        if self.n < 2:
            raise InvalidArgumentError("scenario needs n >= 2")
        if self.sigma < 0:
            raise InvalidArgumentError("noise level must be >= 0")
        if self.design_law not in DESIGN_LAWS:
            raise InvalidArgumentError(f"unknown design law {self.design_law!r}")
        if self.metric_grid not in ("domain", "design_range"):
            raise InvalidArgumentError(f"unknown metric grid {self.metric_grid!r}")
        object.__setattr__(self, "domain", (float(self.domain[0]), float(self.domain[1])))

    @classmethod
    def from_json(cls, path) -> "Scenario":
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        data["domain"] = tuple(data["domain"])
        return cls(**data)

    def to_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


# ---------------------------------------------------------------------------
# Target functions
# ---------------------------------------------------------------------------

_PIECEWISE_KNOTS_Z = np.array([0.0, 2.0, 3.0, 5.5, 7.0, 8.5, 10.0])
_PIECEWISE_KNOTS_F = np.array([14.0, 22.0, 16.0, 23.0, 15.0, 17.0, 9.0])


def _target_parabola(z):
    return (z - 5.0) ** 2 + 10.0


def _target_chirp(z):
    q = (z - 5.0) ** 2
    return 0.2 * ((q + 25.0) * np.cos(q / 2.0) + 60.0)


def _target_piecewise(z):
    return np.interp(z, _PIECEWISE_KNOTS_Z, _PIECEWISE_KNOTS_F)


def _target_affine(z):
    return 2.0 + 1.5 * np.asarray(z, dtype=float)


def _target_zero(z):
    return np.zeros_like(np.asarray(z, dtype=float))


TARGETS = {
    "parabola": _target_parabola,
    "piecewise_linear": _target_piecewise,
    "chirp": _target_chirp,
    # Plain targets used by oracle tests.
    "affine": _target_affine,
    "zero": _target_zero,
}


def target_value(target_id: str, z):
    """Evaluate a named target function (vectorized)."""
    try:
        fn = TARGETS[target_id]
    except KeyError:
        raise InvalidArgumentError(f"unknown target {target_id!r}") from None
    out = fn(np.asarray(z, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# Design laws
# ---------------------------------------------------------------------------

def _rng_of(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return streams.generator(int(seed), 0, streams.DESIGN)


def _gen_uniform_mixture(rng, n, domain, params):
    subintervals = params.get("subintervals")
    weights = np.asarray(params.get("weights", (0.9, 0.1)), dtype=float)
    if subintervals is None:
        a, b = domain
        mid = 0.5 * (a + b)
        subintervals = ((a, mid), (mid, b))
    counts = np.floor(weights / weights.sum() * n).astype(int)
    counts[0] += n - counts.sum()
    parts = [rng.uniform(lo, hi, size=c) for (lo, hi), c in zip(subintervals, counts)]
    return np.concatenate(parts)


def _gen_density_rejection(rng, n, domain, params):
    # Density proportional to (z - 5)^2 + 2 via rejection from the uniform
    # envelope; the shape maximum on [0, 10] sits at the left endpoint.
    a, b = domain

    def shape(z):
        return (z - 5.0) ** 2 + 2.0

    bound = max(shape(np.array([a]))[0], shape(np.array([b]))[0])
    out = np.empty(n)
    got = 0
    while got < n:
        m = max(64, int(1.8 * (n - got) * bound / (shape(np.array([a]))[0])) )
        m = min(m, 4 * n + 64)
        cand = rng.uniform(a, b, size=m)
        u = rng.uniform(0.0, 1.0, size=m)
        acc = cand[u * bound <= shape(cand)]
        take = min(acc.size, n - got)
        out[got : got + take] = acc[:take]
        got += take
    return out


def _trig_pool(rng, size, params):
    harmonics = int(params.get("num_harmonics", 100))
    step = float(params.get("amplitude_step", 0.0002))
    psi = rng.uniform(0.0, 1.0, size=harmonics)
    k = np.arange(1, harmonics + 1, dtype=float)
    wts = psi / k
    eta = wts / wts.sum()
    t = step * np.arange(1, size + 1, dtype=float)
    return 10.0 * np.abs(np.cos(np.outer(t, k)) @ eta)


def _gen_trig_dependent(rng, n, domain, params):
    return _trig_pool(rng, n, params)


def _gen_trig_subsampled(rng, n, domain, params):
    pool_size = int(params.get("pool_size", 50_000))
    if pool_size < n:
        raise InvalidArgumentError(f"pool size {pool_size} below sample size {n}")
    pool = _trig_pool(rng, pool_size, params)
    keep = rng.choice(pool_size, size=n, replace=False)
    return pool[keep]


def _switch_pattern(n, variant, nu1):
    nu = np.empty(n, dtype=np.int64)
    if variant == "alternating":
        nu[0::2] = nu1
        nu[1::2] = 1 - nu1
        return nu
    if variant == "blocks":
        # Blocks of lengths 1, 2, 4, 8, ... with alternating labels.
        pos = 0
        size = 1
        label = nu1
        while pos < n:
            end = min(n, pos + size)
            nu[pos:end] = label
            pos = end
            size *= 2
            label = 1 - label
        return nu
    raise InvalidArgumentError(f"unknown switch variant {variant!r}")


def _gen_bernoulli_switch(rng, n, domain, params):
    variant = params.get("variant", "blocks")
    nu1 = int(rng.integers(0, 2))
    nu = _switch_pattern(n, variant, nu1)
    u_left = rng.uniform(0.0, 0.5, size=n)
    u_right = rng.uniform(0.5, 1.0, size=n)
    return nu * u_left + (1 - nu) * u_right


_DESIGN_GENERATORS = {
    "uniform_mixture": _gen_uniform_mixture,
    "density_rejection": _gen_density_rejection,
    "trig_dependent": _gen_trig_dependent,
    "trig_subsampled": _gen_trig_subsampled,
    "bernoulli_switch": _gen_bernoulli_switch,
}


def gen_design(scenario: Scenario, seed) -> np.ndarray:
    """Draw the design points of one replication.

    ``seed`` is either an integer (a fresh design stream is derived from
    it) or a Generator to draw from directly.
    """
    rng = _rng_of(seed)
    gen = _DESIGN_GENERATORS[scenario.design_law]
    z = gen(rng, scenario.n, scenario.domain, scenario.design_params)
    return np.clip(z, scenario.domain[0], scenario.domain[1])


def _draw_noise(scenario: Scenario, rng: np.random.Generator, n: int) -> np.ndarray:
    s = scenario.sigma
    if scenario.noise == "gaussian":
        return rng.normal(0.0, s, size=n)
    if scenario.noise == "uniform":
        half = s * math.sqrt(3.0)
        return rng.uniform(-half, half, size=n)
    if scenario.noise == "scaled_t":
        df = 5.0
        return rng.standard_t(df, size=n) * s * math.sqrt((df - 2.0) / df)
    raise InvalidArgumentError(f"unknown noise model {scenario.noise!r}")


def gen_observations(scenario: Scenario, base_seed: int, replication: int = 0):
    """Design and noisy responses for one replication (seeded streams)."""
    z = gen_design(scenario, streams.generator(base_seed, replication, streams.DESIGN))
    eps = _draw_noise(scenario, streams.generator(base_seed, replication, streams.NOISE), z.size)
    x = target_value(scenario.target_id, z) + eps
    return z, x


# ---------------------------------------------------------------------------
# Error metrics
# ---------------------------------------------------------------------------

def metric_grid_points(scenario: Scenario, z: np.ndarray, size: int = 1001) -> np.ndarray:
    """Uniform metric grid over the domain, or over the design range for
    scenarios whose target is only identified where the design lives."""
    if scenario.metric_grid == "design_range":
        return np.linspace(float(z.min()), float(z.max()), size)
    return np.linspace(scenario.domain[0], scenario.domain[1], size)


def max_error(curve: FittedCurve, target_id: str) -> float:
    """Maximum absolute deviation from the target over valid grid points."""
    if not np.any(curve.valid):
        raise UndefinedMetricError("curve has no valid points to score")
    truth = target_value(target_id, curve.grid)
    diffs = np.abs(curve.values[curve.valid] - truth[curve.valid])
    return float(diffs.max())


def empirical_modulus(target_id: str, h: float, grid) -> float:
    """Largest |f(u) - f(v)| over grid pairs with |u - v| <= h."""
    if not h > 0:
        raise InvalidArgumentError(f"window must be positive, got {h}")
    grid = np.asarray(grid, dtype=float)
    vals = np.asarray(target_value(target_id, grid), dtype=float)
    out = 0.0
    hi = 0
    for i in range(grid.size):
        hi = max(hi, i + 1)
        while hi < grid.size and grid[hi] - grid[i] <= h:
            hi += 1
        window = vals[i:hi]
        out = max(out, float(window.max() - window.min()))
    return out


# ---------------------------------------------------------------------------
# Wilcoxon signed-rank test
# ---------------------------------------------------------------------------

def _rank_abs(d: np.ndarray) -> np.ndarray:
    """Average ranks of |d| (ties share the mean rank)."""
    a = np.abs(d)
    order = np.argsort(a, kind="stable")
    ranks = np.empty(a.size)
    sorted_a = a[order]
    i = 0
    while i < a.size:
        j = i + 1
        while j < a.size and sorted_a[j] == sorted_a[i]:
            j += 1
        ranks[order[i:j]] = 0.5 * (i + 1 + j)  # mean of ranks i+1 .. j
        i = j
    return ranks


def wilcoxon_signed_rank(x, y):
    """Paired two-sided Wilcoxon signed-rank test; returns (W+, p).

    Zero differences are dropped; tied absolute differences get average
    ranks.  For fewer than 10 nonzero differences the p-value comes from
    exact enumeration of all sign patterns (conditional on the observed
    ranks); otherwise from the normal approximation with tie-corrected
    variance and a continuity correction.  All-zero differences give p = 1.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size < 1:
        raise InvalidArgumentError("need two equal-length 1-d samples")
    d = x - y
    d = d[d != 0.0]
    m = d.size
    if m == 0:
        return 0.0, 1.0
    ranks = _rank_abs(d)
    w_plus = float(ranks[d > 0].sum())
    if m < 10:
        # Exact null distribution of W+ over all 2^m sign assignments.
        totals = np.zeros(1)
        for r in ranks:
            totals = np.concatenate([totals, totals + r])
        p_low = np.count_nonzero(totals <= w_plus + 1e-12) / totals.size
        p_high = np.count_nonzero(totals >= w_plus - 1e-12) / totals.size
        p = min(1.0, 2.0 * min(p_low, p_high))
        return w_plus, p
    mean = m * (m + 1) / 4.0
    var = m * (m + 1) * (2 * m + 1) / 24.0
    # Tie correction: subtract sum(t^3 - t) / 48 over tie groups.
    _, counts = np.unique(np.abs(d), return_counts=True)
    var -= float(np.sum(counts.astype(float) ** 3 - counts)) / 48.0
    if var <= 0:
        return w_plus, 1.0
    diff = w_plus - mean
    cc = 0.5 * np.sign(diff)
    zstat = (diff - cc) / math.sqrt(var)
    p = min(1.0, math.erfc(abs(zstat) / math.sqrt(2.0)))
    return w_plus, p


# ---------------------------------------------------------------------------
# Study driver
# ---------------------------------------------------------------------------

@dataclass
class ReplicationReport:
    """Per-replication metric values plus summaries and a paired test."""

    scenario_id: str
    estimators: tuple[str, ...]
    metrics: dict  # metric -> estimator -> ndarray of per-replication values
    wilcoxon: dict  # metric -> {"pair": (a, b), "statistic": W, "p_value": p}
    incomplete_coverage: dict  # estimator -> replications with invalid grid points
    base_seed: int

    def summary(self) -> dict:
        out = {}
        for metric, per_est in self.metrics.items():
            out[metric] = {}
            for est, vals in per_est.items():
                q1, med, q3 = np.percentile(vals, [25.0, 50.0, 75.0])
                out[metric][est] = {"median": float(med), "q1": float(q1), "q3": float(q3)}
        return out

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("replication,estimator,metric,value\n")
            for metric in sorted(self.metrics):
                per_est = self.metrics[metric]
                for est in self.estimators:
                    if est not in per_est:
                        continue
                    for r, v in enumerate(per_est[est]):
                        fh.write(f"{r},{est},{metric},{v!r}\n")

    def summary_json(self) -> str:
        payload = {
            "scenario": self.scenario_id,
            "base_seed": self.base_seed,
            "estimators": list(self.estimators),
            "summary": self.summary(),
            "wilcoxon": {
                metric: {
                    "pair": list(info["pair"]),
                    "statistic": info["statistic"],
                    "p_value": info["p_value"],
                }
                for metric, info in self.wilcoxon.items()
            },
            "incomplete_coverage": dict(sorted(self.incomplete_coverage.items())),
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def _fit_kind(sample, kernel, kind, value, grid, spacing):
    if kind == "ull":
        return fit_ull(sample, kernel, value, grid, spacing=spacing)
    if kind == "ulc":
        return fit_ulc(sample, kernel, value, grid, spacing=spacing)
    if kind == "nw":
        return fit_nw(sample, kernel, value, grid)
    if kind == "loess1":
        return fit_loess1(sample, kernel, grid, span=value)
    raise InvalidArgumentError(f"unknown estimator kind {kind!r}")


def _candidate_grid(kind, sample):
    return default_span_grid() if kind == "loess1" else default_h_grid(sample)


def _select_and_fit(sample, kernel, kind, folds_assign, grid_pts, spacing):
    plan = CvPlan(grid=_candidate_grid(kind, sample), folds=int(folds_assign.max()) + 1,
                  fold_assignment=folds_assign)
    best, _ = cross_validate(sample, kernel, kind, plan, spacing=spacing)
    return best, _fit_kind(sample, kernel, kind, best, grid_pts, spacing)


def _one_replication(scenario, estimators, base_seed, r, kernel, folds, metrics, spacing):
    z, x = gen_observations(scenario, base_seed, r)
    raw = RawSample(z, x, scenario.domain)
    out = {}
    coverage = {}
    if "max_error" in metrics:
        sample = prepare_sample(raw)
        grid_pts = metric_grid_points(scenario, z)
        assign = make_folds(sample.n, folds,
                            streams.generator(base_seed, r, streams.FOLDS_FULL))
        for est in estimators:
            _, curve = _select_and_fit(sample, kernel, est, assign, grid_pts, spacing)
            out[("max_error", est)] = max_error(curve, scenario.target_id)
            coverage[est] = coverage.get(est, 0) + (1 if curve.n_invalid else 0)
    if "mse" in metrics:
        n = z.size
        perm = streams.generator(base_seed, r, streams.SPLIT).permutation(n)
        m_val = n // 5
        val_idx, tr_idx = perm[:m_val], perm[m_val:]
        train = prepare_sample(RawSample(z[tr_idx], x[tr_idx], scenario.domain))
        order = np.argsort(z[val_idx], kind="stable")
        z_val = z[val_idx][order]
        x_val = x[val_idx][order]
        x_bar = float(np.mean(train.x))
        assign = make_folds(train.n, folds,
                            streams.generator(base_seed, r, streams.FOLDS_TRAIN))
        for est in estimators:
            _, curve = _select_and_fit(train, kernel, est, assign, z_val, spacing)
            pred = np.where(curve.valid, curve.values, x_bar)
            out[("mse", est)] = float(np.mean((pred - x_val) ** 2))
    return out, coverage


def mse_holdout(scenario: Scenario, estimator_kind: str, seed: int,
                kernel: Kernel | str = "tricube", folds: int = 10,
                spacing: str = "voronoi") -> float:
    """Holdout mean squared error of one seeded replication."""
    kernel = get_kernel(kernel) if isinstance(kernel, str) else kernel
    out, _ = _one_replication(scenario, (estimator_kind,), seed, 0, kernel,
                              folds, ("mse",), spacing)
    return out[("mse", estimator_kind)]


def run_study(scenario: Scenario, estimators, replications: int, base_seed: int,
              kernel: Kernel | str = "tricube", folds: int = 10,
              metrics=("max_error", "mse"), spacing: str = "voronoi",
              wilcoxon_pair: tuple[str, str] = ("ull", "loess1"),
              threads: int = 1) -> ReplicationReport:
    """Run seeded replications of the full evaluation protocol.

    Replication r derives all its randomness from ``(base_seed, r)``, so
    the report is reproducible and independent of the thread count.  The
    paired Wilcoxon test compares ``wilcoxon_pair`` whenever both of its
    estimators were run.
    """
    if replications < 1:
        raise InvalidArgumentError("need at least one replication")
    estimators = tuple(estimators)
    kernel = get_kernel(kernel) if isinstance(kernel, str) else kernel

    def work(r):
        return _one_replication(scenario, estimators, base_seed, r, kernel,
                                folds, metrics, spacing)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, range(replications)))
    else:
        results = [work(r) for r in range(replications)]

    metric_values = {
        m: {est: np.array([res[(m, est)] for res, _ in results]) for est in estimators}
        for m in metrics
    }
    coverage = {est: 0 for est in estimators}
    for _, cov in results:
        for est, c in cov.items():
            coverage[est] += c

    wilcoxon = {}
    a, b = wilcoxon_pair
    if a in estimators and b in estimators:
        for m in metrics:
            stat, p = wilcoxon_signed_rank(metric_values[m][a], metric_values[m][b])
            wilcoxon[m] = {"pair": (a, b), "statistic": stat, "p_value": p}

    return ReplicationReport(
        scenario_id=scenario.id,
        estimators=estimators,
        metrics=metric_values,
        wilcoxon=wilcoxon,
        incomplete_coverage=coverage,
        base_seed=base_seed,
    )


# ---------------------------------------------------------------------------
# Built-in scenarios
# ---------------------------------------------------------------------------

BUILTIN_SCENARIOS = {
    "parabola-split-uniform": Scenario(
        id="parabola-split-uniform",
        domain=(0.0, 10.0),
        n=5000,
        design_law="uniform_mixture",
        design_params={"subintervals": ((0.0, 5.0), (5.0, 10.0)), "weights": (0.9, 0.1)},
        target_id="parabola",
        sigma=2.0,
    ),
    "piecewise-parabolic-density": Scenario(
        id="piecewise-parabolic-density",
        domain=(0.0, 10.0),
        n=5000,
        design_law="density_rejection",
        target_id="piecewise_linear",
        sigma=2.0,
        metric_grid="design_range",
    ),
    "chirp-trig-dependent": Scenario(
        id="chirp-trig-dependent",
        domain=(0.0, 10.0),
        n=5000,
        design_law="trig_dependent",
        design_params={"amplitude_step": 0.0002, "num_harmonics": 100},
        target_id="chirp",
        sigma=2.0,
    ),
    "chirp-trig-subsampled": Scenario(
        id="chirp-trig-subsampled",
        domain=(0.0, 10.0),
        n=5000,
        design_law="trig_subsampled",
        design_params={"amplitude_step": 0.0002, "num_harmonics": 100, "pool_size": 50000},
        target_id="chirp",
        sigma=2.0,
    ),
    "switch-mixture": Scenario(
        id="switch-mixture",
        domain=(0.0, 1.0),
        n=2000,
        design_law="bernoulli_switch",
        design_params={"variant": "blocks"},
        target_id="parabola",
        sigma=1.0,
    ),
}


def builtin_scenario(name: str) -> Scenario:
    try:
        return BUILTIN_SCENARIOS[name]
    except KeyError:
        raise InvalidArgumentError(
            f"unknown scenario {name!r}; built-ins: {', '.join(sorted(BUILTIN_SCENARIOS))}"
        ) from None
