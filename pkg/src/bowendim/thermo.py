"""Partition functions, pressure estimates, dimension bisection, diagnostics.

The partition function at inverse-dimension parameter t sums the t-th powers
of composed derivative norms over admissible words.  Its per-level growth
rate stands in for the pressure; the dimension estimate is the bracketed
zero-crossing of that rate in t, reported together with a hypothesis report
saying which structural theorem (if any) promotes the Bowen-style upper
bound into an equality for the Hausdorff dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _frontier, geometry
from .errors import (
    BracketingError,
    BudgetError,
    ConfigurationError,
    InputError,
    UnsupportedError,
)
from .maps import Similarity
from .symbolic import (
    PrimitivityCertificate,
    find_primitivity,
    growth_stats,
    subexp_diagnostic,
)
from .trend import EXPONENTIAL, SUBEXPONENTIAL, fit_line

STRATEGIES = ("auto", "enumerate-exact", "matrix-exact", "bdp-bracket")


# ---------------------------------------------------------------------------
# partition functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartitionValue:
    """Certified bracket on Z_{m,n}(t)."""

    m: int
    n: int
    t: float
    lo: float
    hi: float
    strategy: str
    words: Optional[int] = None

    @property
    def value(self) -> float:
        return 0.5 * (self.lo + self.hi)


def _check_t(system, t):
    if not (0.0 <= t <= system.dim):
        raise InputError(f"t must lie in [0, {system.dim}], got {t}")


def _resolve_strategy(system, m, n, strategy):
    if strategy not in STRATEGIES:
        raise InputError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    fam = _frontier._family(system, m, n)
    if strategy == "auto":
        return "matrix-exact" if fam == "similarity" else "enumerate-exact"
    if strategy == "matrix-exact" and fam != "similarity":
        raise UnsupportedError(
            "matrix-exact needs multiplicative (similarity) norms; use"
            " enumerate-exact or bdp-bracket here"
        )
    return strategy


def _sweep_enumerate(system, m, n, t, budget, collect):
    """Exact per-level sums via the vectorized frontier (or generic fallback)."""
    fam = _frontier._family(system, m, n)
    if fam == "similarity":
        impl = _frontier.SimilarityState(system)
    elif fam == "moebius" and _frontier._moebius_float_safe(system, m, n):
        impl = _frontier.MoebiusState(system)
    else:
        impl = None
    if impl is not None:

        def on_level(j, letters, state, words):
            lo, hi = impl.norm_bounds(state)
            z_lo = math.fsum(lo**t)
            z_hi = z_lo if lo is hi else math.fsum(hi**t)
            collect(j, z_lo, z_hi, letters.size)

        _frontier.sweep(system, m, n, impl, on_level, budget)
        return
    sums_lo = {j: [] for j in range(m, n + 1)}
    sums_hi = {j: [] for j in range(m, n + 1)}

    def on_word(j, word, bracket):
        sums_lo[j].append(bracket.lo**t)
        sums_hi[j].append(bracket.hi**t)

    _frontier.generic_norm_walk(system, m, n, on_word, budget)
    for j in range(m, n + 1):
        collect(j, math.fsum(sums_lo[j]), math.fsum(sums_hi[j]), len(sums_lo[j]))


def _sweep_transfer(system, m, n, t, weights, collect):
    """Per-level sums of products of single-letter weights along admissible words.

    `weights(j)` returns the per-letter weight array at time j (zero outside
    the pruned alphabet).  Exact for similarity families, the upper part of
    the bounded-distortion bracket otherwise.
    """
    sched = system.schedule
    u = np.where(sched.kept[m], weights(m) ** t, 0.0)
    collect(m, float(u.sum()))
    for j in range(m, n):
        u = sched.incidence[j].transfer(u, weights(j + 1) ** t, sched.kept[j + 1])
        collect(j + 1, float(u.sum()))


def _letter_weights(system, which):
    def weights(j):
        lo, hi = system.letter_brackets[j]
        return lo if which == "lo" else hi

    return weights


def partition(
    system,
    m: int,
    n: int,
    t: float,
    strategy: str = "auto",
    budget: int = _frontier.DEFAULT_BUDGET,
) -> PartitionValue:
    """Certified bracket on the weighted word sum Z_{m,n}(t)."""
    _check_t(system, t)
    if not (1 <= m <= n <= system.horizon):
        raise ConfigurationError(
            f"need 1 <= m <= n <= horizon={system.horizon}, got ({m}, {n})"
        )
    strat = _resolve_strategy(system, m, n, strategy)
    out = {}

    if strat == "enumerate-exact":

        def collect(j, z_lo, z_hi, count):
            out[j] = (z_lo, z_hi, count)

        _sweep_enumerate(system, m, n, t, budget, collect)
        z_lo, z_hi, count = out[n]
        return PartitionValue(m, n, t, z_lo, z_hi, strat, count)

    if strat == "matrix-exact":
        _sweep_transfer(
            system, m, n, t, _letter_weights(system, "hi"),
            lambda j, z: out.__setitem__(j, z),
        )
        z = out[n]
        return PartitionValue(m, n, t, z, z, strat, None)

    # bdp-bracket: single-letter products with distortion correction
    hi_out, lo_out = {}, {}
    _sweep_transfer(
        system, m, n, t, _letter_weights(system, "hi"),
        lambda j, z: hi_out.__setitem__(j, z),
    )
    _sweep_transfer(
        system, m, n, t, _letter_weights(system, "lo"),
        lambda j, z: lo_out.__setitem__(j, z),
    )
    k = system.distortion
    length = n - m + 1
    corr = k ** (-2.0 * (length - 1) * t)
    return PartitionValue(m, n, t, corr * lo_out[n], hi_out[n], strat, None)


def partition_by_root(system, n: int, t: float, budget=_frontier.DEFAULT_BUDGET):
    """Optional vertex-resolved breakdown: root initial vertex -> Z bracket."""
    _check_t(system, t)
    sums = {}

    def on_word(j, word, bracket):
        if j != n:
            return
        v = system.schedule.letters(word.start)[
            system.schedule.letter_index(word.start, word.letters[0])
        ].src
        lo, hi = sums.setdefault(v, ([], []))
        lo.append(bracket.lo**t)
        hi.append(bracket.hi**t)

    _frontier.generic_norm_walk(system, 1, n, on_word, budget)
    return {
        v: (math.fsum(lo), math.fsum(hi)) for v, (lo, hi) in sorted(sums.items())
    }


def _level_sweep(system, t, n_max, strategy, budget=_frontier.DEFAULT_BUDGET):
    """Brackets on Z_n(t) for every n in 1..n_max in one pass."""
    strat = _resolve_strategy(system, 1, n_max, strategy)
    levels = {}
    if strat == "enumerate-exact":

        def collect(j, z_lo, z_hi, count):
            levels[j] = (z_lo, z_hi)

        _sweep_enumerate(system, 1, n_max, t, budget, collect)
    elif strat == "matrix-exact":
        _sweep_transfer(
            system, 1, n_max, t, _letter_weights(system, "hi"),
            lambda j, z: levels.__setitem__(j, (z, z)),
        )
    else:
        hi_out, lo_out = {}, {}
        _sweep_transfer(
            system, 1, n_max, t, _letter_weights(system, "hi"),
            lambda j, z: hi_out.__setitem__(j, z),
        )
        _sweep_transfer(
            system, 1, n_max, t, _letter_weights(system, "lo"),
            lambda j, z: lo_out.__setitem__(j, z),
        )
        k = system.distortion
        for j in range(1, n_max + 1):
            levels[j] = (k ** (-2.0 * (j - 1) * t) * lo_out[j], hi_out[j])
    return levels, strat


# ---------------------------------------------------------------------------
# pressure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PressureEstimate:
    """Finite-horizon pressure data at one t.

    s_n = (1/n) log Z_n(t) with brackets; `lower_proxy`/`upper_proxy` are the
    min/max of s_n over the tail half of the window (liminf/limsup stand-ins);
    `growth_rate` is the mean increment of log Z_n over an even-length tail
    window, the bisection signal (constant offsets and period-2 oscillation
    cancel there).
    """

    t: float
    window: tuple
    ns: tuple
    z_lo: tuple
    z_hi: tuple
    s_lo: tuple
    s_hi: tuple
    lower_proxy: tuple
    upper_proxy: tuple
    growth_rate: tuple
    oscillation: float
    strategy: str

    @property
    def flagged_oscillation(self) -> bool:
        return self.oscillation > 0.05

    def rows(self):
        """CSV rows (n, t, z_lo, z_hi, s_n_lo, s_n_hi)."""
        for i, n in enumerate(self.ns):
            yield (n, self.t, self.z_lo[i], self.z_hi[i], self.s_lo[i], self.s_hi[i])


def _tail_start(window):
    n_lo, n_hi = window
    return n_lo + (n_hi - n_lo) // 2


def pressure_estimate(
    system, t: float, window, strategy: str = "auto",
    budget: int = _frontier.DEFAULT_BUDGET,
) -> PressureEstimate:
    _check_t(system, t)
    n_lo, n_hi = window
    if not (1 <= n_lo < n_hi <= system.horizon):
        raise ConfigurationError(
            f"window {window} must sit inside [1, horizon={system.horizon}]"
        )
    levels, strat = _level_sweep(system, t, n_hi, strategy, budget)
    ns = tuple(range(n_lo, n_hi + 1))
    z_lo = tuple(levels[n][0] for n in ns)
    z_hi = tuple(levels[n][1] for n in ns)
    s_lo = tuple(math.log(z) / n if z > 0 else -math.inf for n, z in zip(ns, z_lo))
    s_hi = tuple(math.log(z) / n if z > 0 else -math.inf for n, z in zip(ns, z_hi))

    tail = [i for i, n in enumerate(ns) if n >= _tail_start(window)]
    low = (min(s_lo[i] for i in tail), min(s_hi[i] for i in tail))
    up = (max(s_lo[i] for i in tail), max(s_hi[i] for i in tail))

    m = ns[tail[0]]
    if (n_hi - m) % 2 == 1 and len(tail) > 2:
        m += 1
    i_m, i_n = ns.index(m), ns.index(n_hi)
    span = n_hi - m
    if span <= 0:
        chord = (low[0], up[1])
    else:
        chord = (
            (math.log(z_lo[i_n]) - math.log(z_hi[i_m])) / span,
            (math.log(z_hi[i_n]) - math.log(z_lo[i_m])) / span,
        )
    return PressureEstimate(
        t=t,
        window=(n_lo, n_hi),
        ns=ns,
        z_lo=z_lo,
        z_hi=z_hi,
        s_lo=s_lo,
        s_hi=s_hi,
        lower_proxy=low,
        upper_proxy=up,
        growth_rate=chord,
        oscillation=up[1] - low[0],
        strategy=strat,
    )


# ---------------------------------------------------------------------------
# Bowen dimension
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DimensionResult:
    bracket: tuple
    horizon: int
    window: tuple
    tol: float
    trace: tuple  # (t, rate_lo, rate_hi) per evaluation
    hypothesis: "HypothesisReport"
    strategy: str
    uncertainty: tuple = ()

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.bracket[0] + self.bracket[1])

    @property
    def width(self) -> float:
        return self.bracket[1] - self.bracket[0]


def bowen_dimension(
    system,
    t_bracket,
    n_max: int,
    tol: float = 1e-4,
    window=None,
    strategy: str = "auto",
    budget: int = _frontier.DEFAULT_BUDGET,
    hypothesis: Optional["HypothesisReport"] = None,
) -> DimensionResult:
    """Bracket the zero-crossing of the windowed pressure rate in t.

    Maintains rate >= 0 at the left endpoint and <= 0 at the right one; when
    norm-bracket uncertainty straddles zero the bisection stops early and the
    reported interval keeps the full remaining width.
    """
    if n_max > system.horizon:
        raise ConfigurationError(
            f"n_max={n_max} beyond materialized horizon {system.horizon}"
        )
    window = window or (1, n_max)
    t_lo, t_hi = float(t_bracket[0]), float(t_bracket[1])
    if not (0.0 <= t_lo < t_hi <= system.dim):
        raise InputError(f"invalid t bracket {t_bracket}")
    trace = []
    notes = []

    def rate(t):
        est = pressure_estimate(system, t, window, strategy, budget)
        trace.append((t, est.growth_rate[0], est.growth_rate[1]))
        return est.growth_rate

    r_lo = rate(t_lo)
    r_hi = rate(t_hi)
    if r_lo[1] < 0:
        raise BracketingError(
            f"pressure rate at t={t_lo} is {r_lo}, not nonnegative; no"
            " zero-crossing inside the bracket"
        )
    if r_hi[0] >= 0:
        if t_hi >= system.dim:
            notes.append(
                f"pressure rate still nonnegative at t = d = {t_hi};"
                " dimension estimate clamps to the ambient dimension"
            )
            hyp = hypothesis or hypothesis_report(system)
            return DimensionResult(
                (max(t_lo, t_hi - tol), t_hi), n_max, window, tol,
                tuple(trace), hyp, _resolve_strategy(system, 1, n_max, strategy),
                tuple(notes),
            )
        raise BracketingError(
            f"pressure rate at t={t_hi} is {r_hi}, not negative; widen the"
            " bracket"
        )
    while t_hi - t_lo > tol:
        mid = 0.5 * (t_lo + t_hi)
        r = rate(mid)
        if r[0] >= 0:
            t_lo = mid
        elif r[1] < 0:
            t_hi = mid
        else:
            notes.append(
                f"norm-bracket uncertainty straddles zero at t={mid:.6g};"
                f" stopping with width {t_hi - t_lo:.3g}"
            )
            break
    hyp = hypothesis or hypothesis_report(system)
    return DimensionResult(
        (t_lo, t_hi), n_max, window, tol, tuple(trace), hyp,
        _resolve_strategy(system, 1, n_max, strategy), tuple(notes),
    )


# ---------------------------------------------------------------------------
# theta bounds
# ---------------------------------------------------------------------------


class PSeriesTail:
    """Single-time sums comparable to sum_k |k|^(-c t) over a D-dimensional
    lattice: converges iff c*t > D."""

    def __init__(self, coefficient: float, lattice_dim: int = 1):
        if coefficient <= 0:
            raise InputError("coefficient must be positive")
        self.coefficient = float(coefficient)
        self.lattice_dim = int(lattice_dim)

    def converges(self, t: float) -> bool:
        return self.coefficient * t > self.lattice_dim

    @property
    def threshold(self) -> float:
        return self.lattice_dim / self.coefficient


@dataclass(frozen=True)
class ThetaBounds:
    theta_n: float
    theta_phi_lower: float
    method: str


def theta_bounds(family_rule, tol: float = 1e-9, t_cap: float = 8.0) -> ThetaBounds:
    """Finiteness threshold of the single-time sums, by bisection on the
    convergence test; finite alphabets sit at zero."""
    if family_rule is None:
        return ThetaBounds(0.0, 0.0, "finite-alphabet")
    if not hasattr(family_rule, "converges"):
        raise ConfigurationError(
            "infinite parametric alphabets need a tail rule with a"
            " converges(t) test"
        )
    lo, hi = 0.0, t_cap
    if family_rule.converges(lo):
        return ThetaBounds(0.0, 0.0, "tail-rule")
    if not family_rule.converges(hi):
        raise ConfigurationError(f"tail sums diverge for every t <= {t_cap}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if family_rule.converges(mid):
            hi = mid
        else:
            lo = mid
    return ThetaBounds(0.5 * (lo + hi), 0.5 * (lo + hi), "tail-rule")


def system_theta(system, tol: float = 1e-9) -> ThetaBounds:
    return theta_bounds(system.tail_rule, tol, t_cap=float(max(8, 4 * system.dim)))


# ---------------------------------------------------------------------------
# general lower-bound diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LowerBoundDiagnostics:
    """Finite-horizon proxies for the mass-distribution lower bound.

    For each n in the window: the single-letter norm extremes c_lo/c_hi, their
    ratio rho, the least follower count, space-diameter extremes, the damped
    partition value Ztilde_n(t) = Z_{n-1}(t) * G_lo^{t/d} * c_lo^t * d_lo^t
    and the rate kappa_n of Ztilde against its oscillation denominator.  The
    verdict compares the fitted follower growth delta against
    kappa/(p^2 + p + 1).
    """

    t: float
    window: tuple
    ns: tuple
    rho: tuple
    c_lo: tuple
    c_hi: tuple
    g_lo: tuple
    d_lo: tuple
    d_hi: tuple
    z_tilde: tuple
    kappa_seq: tuple
    kappa_proxy: float
    delta_proxy: float
    p: int
    certified: bool
    margin: float

    def as_dict(self):
        return {
            "t": self.t,
            "kappa_proxy": self.kappa_proxy,
            "delta_proxy": self.delta_proxy,
            "p": self.p,
            "threshold": self.kappa_proxy / (self.p**2 + self.p + 1),
            "certified_above_t": self.certified,
        }


def lower_bound_diagnostics(
    system, t: float, window, cert: Optional[PrimitivityCertificate] = None,
    margin: float = 0.0, strategy: str = "auto",
) -> LowerBoundDiagnostics:
    _check_t(system, t)
    if cert is None:
        cert = find_primitivity(system.schedule, p_max=4)
    if cert is None:
        raise ConfigurationError(
            "lower-bound diagnostics need a primitivity certificate"
        )
    n_lo, n_hi = window
    if not (2 <= n_lo < n_hi <= system.horizon):
        raise ConfigurationError(f"window {window} outside [2, horizon]")
    levels, _ = _level_sweep(system, t, n_hi, strategy)
    stats = growth_stats(system.schedule)
    d = float(system.dim)

    ns, rho, c_lo_seq, c_hi_seq, g_lo_seq, d_lo_seq, d_hi_seq = (
        [], [], [], [], [], [], [],
    )
    z_tilde, kappa_seq = [], []
    rho_all = [system.rho(j) for j in range(1, n_hi + 1)]
    diam_all = [system.diam_bounds(j) for j in range(0, n_hi + 1)]
    for n in range(n_lo, n_hi + 1):
        c_lo, c_hi = system.c_bounds(n)
        g_lo = stats.g_lo[n - 2]  # G_lo at time n-1
        d_lo_n, d_hi_n = diam_all[n]
        z_prev = 0.5 * (levels[n - 1][0] + levels[n - 1][1])
        zt = z_prev * g_lo ** (t / d) * c_lo**t * d_lo_n**t
        # oscillation denominator: 1 + log max rho + sup_k log(d_hi[n+k]/d_lo[n])
        max_rho = max(rho_all[: min(n + 1, len(rho_all))])
        sup_ratio = max(
            math.log(diam_all[k][1] / d_lo_n) for k in range(n, n_hi + 1)
        )
        denom = 1.0 + math.log(max_rho) + max(sup_ratio, 0.0)
        kappa_n = math.log(zt / denom) / n if zt > 0 else -math.inf
        ns.append(n)
        rho.append(system.rho(n))
        c_lo_seq.append(c_lo)
        c_hi_seq.append(c_hi)
        g_lo_seq.append(g_lo)
        d_lo_seq.append(d_lo_n)
        d_hi_seq.append(d_hi_n)
        z_tilde.append(zt)
        kappa_seq.append(kappa_n)

    tail = [i for i, n in enumerate(ns) if n >= _tail_start(window)]
    kappa_proxy = min(kappa_seq[i] for i in tail)
    ghi_ns = stats.times[: len(stats.g_hi)]
    tail_g = [i for i, n in enumerate(ghi_ns) if n >= _tail_start((1, len(ghi_ns)))]
    delta_proxy, _, _ = fit_line(
        [ghi_ns[i] for i in tail_g],
        [math.log(stats.g_hi[i]) for i in tail_g],
    )
    delta_proxy = max(delta_proxy, 0.0)
    p = cert.p
    certified = delta_proxy * (p**2 + p + 1) < kappa_proxy - margin
    return LowerBoundDiagnostics(
        t=t, window=(n_lo, n_hi), ns=tuple(ns), rho=tuple(rho),
        c_lo=tuple(c_lo_seq), c_hi=tuple(c_hi_seq), g_lo=tuple(g_lo_seq),
        d_lo=tuple(d_lo_seq), d_hi=tuple(d_hi_seq), z_tilde=tuple(z_tilde),
        kappa_seq=tuple(kappa_seq), kappa_proxy=kappa_proxy,
        delta_proxy=delta_proxy, p=p, certified=certified, margin=margin,
    )


# ---------------------------------------------------------------------------
# balancing classes
# ---------------------------------------------------------------------------

BALANCING_ORDER = ("perfectly", "balanced", "weakly", "barely", "unclassified")


@dataclass(frozen=True)
class BalancingReport:
    """Classification of the per-time norm-ratio sequence rho_n.

    Stronger classes imply the weaker flags; `verdict` is the strongest class
    whose finite-horizon test passes.
    """

    rho: tuple
    flags: dict
    verdict: str
    thresholds: dict

    def at_least(self, cls: str) -> bool:
        return self.flags.get(cls, False)


def classify_rho(
    rho_seq: Sequence[float],
    all_similarity: bool = False,
    balanced_slope_tol: float = 1e-3,
    rate_tol: float = 0.05,
) -> BalancingReport:
    """Finite-horizon balancing verdict from the rho_n sequence alone."""
    rho_seq = [float(r) for r in rho_seq]
    if any(r < 1.0 - 1e-9 for r in rho_seq):
        raise InputError("rho values must be >= 1")
    h = len(rho_seq)
    ns = list(range(1, h + 1))
    perfectly = all_similarity and all(abs(r - 1.0) <= 1e-12 for r in rho_seq)
    log_rho = [math.log(max(r, 1.0)) for r in rho_seq]
    tail = [i for i in range(h) if ns[i] >= 1 + (h - 1) // 2]
    slope, _, _ = fit_line([ns[i] for i in tail], [log_rho[i] for i in tail])
    balanced = perfectly or abs(slope) <= balanced_slope_tol
    weakly = balanced or (log_rho[-1] / ns[-1]) <= rate_tol
    barely = weakly or (math.log(1.0 + log_rho[-1]) / ns[-1]) <= rate_tol
    flags = {
        "perfectly": perfectly,
        "balanced": balanced,
        "weakly": weakly,
        "barely": barely,
    }
    verdict = next(
        (c for c in BALANCING_ORDER[:-1] if flags[c]), "unclassified"
    )
    return BalancingReport(
        rho=tuple(rho_seq),
        flags=flags,
        verdict=verdict,
        thresholds={
            "balanced_slope_tol": balanced_slope_tol,
            "rate_tol": rate_tol,
        },
    )


def balancing_class(system, horizon: Optional[int] = None, **thresholds) -> BalancingReport:
    h = horizon or system.horizon
    rho_seq = [system.rho(n) for n in range(1, h + 1)]
    all_sim = all(
        isinstance(system.maps[n][idx], Similarity)
        for n in range(1, h + 1)
        for idx in system.schedule.kept_indices(n)
    )
    return classify_rho(rho_seq, all_similarity=all_sim, **thresholds)


# ---------------------------------------------------------------------------
# growth-rate dimension bounds (a/b)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ABDimensionBounds:
    applicable: bool
    lo: Optional[float]
    hi: Optional[float]
    point: Optional[float]
    rates: dict
    reason: str = ""


def ab_dimension_bounds(
    system, horizon: Optional[int] = None, min_rate: float = 0.05,
    match_tol: float = 0.05,
) -> ABDimensionBounds:
    """Dimension bounds [a0/b1, a1/b0] from fitted exponential rates of the
    follower counts (a) and reciprocal norm extremes (b)."""
    h = horizon or system.horizon
    stats = growth_stats(system.schedule)
    ns = list(range(1, h))
    tail = [i for i in range(len(ns)) if ns[i] >= 1 + (len(ns) - 1) // 2]
    txs = [ns[i] for i in tail]
    a0, _, _ = fit_line(txs, [math.log(stats.g_lo[i]) for i in tail])
    a1, _, _ = fit_line(txs, [math.log(stats.g_hi[i]) for i in tail])
    cb = [system.c_bounds(n) for n in range(1, h + 1)]
    tail_c = [i for i in range(h) if i + 1 >= 1 + (h - 1) // 2]
    txc = [i + 1 for i in tail_c]
    b0, _, _ = fit_line(txc, [-math.log(cb[i][1]) for i in tail_c])
    b1, _, _ = fit_line(txc, [-math.log(cb[i][0]) for i in tail_c])
    rates = {"a0": a0, "a1": a1, "b0": b0, "b1": b1}
    if min(a0, a1) <= min_rate:
        return ABDimensionBounds(
            False, None, None, None, rates,
            "follower growth rate not positive-exponential",
        )
    if min(b0, b1) <= min_rate or not all(map(math.isfinite, (b0, b1))):
        return ABDimensionBounds(
            False, None, None, None, rates,
            "norm decay rate not positive-exponential",
        )
    lo, hi = a0 / b1, a1 / b0
    point = None
    if abs(a0 - a1) <= match_tol * max(a0, a1) and abs(b0 - b1) <= match_tol * max(
        b0, b1
    ):
        point = (0.5 * (a0 + a1)) / (0.5 * (b0 + b1))
    return ABDimensionBounds(True, lo, hi, point, rates)


# ---------------------------------------------------------------------------
# Hausdorff-measure trend
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MeasureTrendReport:
    verdict: str  # zero | finite-positive | infinite | inconclusive | inapplicable
    h: float
    window: tuple
    z_values: tuple
    preconditions: dict
    reason: str = ""


def hausdorff_measure_trend(
    system, h: float, window, strategy: str = "auto",
    slope_tol: float = 0.02, value_range=(1e-8, 1e8), diam_cap: float = 1e6,
) -> MeasureTrendReport:
    """Advisory classifier for the h-dimensional measure via the tail of Z_n(h).

    Applies only to balanced, uniformly finite systems whose space diameters
    stay within a bounded band; otherwise reports inapplicable.
    """
    _check_t(system, h)
    n_lo, n_hi = window
    bal = balancing_class(system)
    counts = [system.schedule.kept_count(n) for n in range(n_lo, n_hi + 1)]
    diam = [system.diam_bounds(n) for n in range(0, n_hi + 1)]
    band = max(d[1] for d in diam) / min(d[0] for d in diam)
    pre = {
        "balanced": bal.at_least("balanced"),
        "uniformly_finite": max(counts) == min(counts),
        "diameter_band": band <= diam_cap,
    }
    if not all(pre.values()):
        missing = [k for k, v in pre.items() if not v]
        return MeasureTrendReport(
            "inapplicable", h, tuple(window), (), pre,
            f"hypotheses not met: {', '.join(missing)}",
        )
    levels, _ = _level_sweep(system, h, n_hi, strategy)
    ns = list(range(n_lo, n_hi + 1))
    zs = [0.5 * (levels[n][0] + levels[n][1]) for n in ns]
    tail = [i for i, n in enumerate(ns) if n >= _tail_start(window)]
    slope, _, _ = fit_line([ns[i] for i in tail], [math.log(zs[i]) for i in tail])
    tail_vals = [zs[i] for i in tail]
    if slope < -slope_tol:
        verdict = "zero"
    elif slope > slope_tol:
        verdict = "infinite"
    elif all(value_range[0] <= z <= value_range[1] for z in tail_vals):
        verdict = "finite-positive"
    else:
        verdict = "inconclusive"
    return MeasureTrendReport(verdict, h, tuple(window), tuple(zs), pre)


# ---------------------------------------------------------------------------
# evenly varying
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EvenlyVaryingReport:
    ok: bool
    c: float
    eta: dict
    cap: float


def evenly_varying_check(system, horizon: Optional[int] = None, cap: float = 100.0):
    """Per-letter geometric-mean norms eta_i and the smallest sandwich constant
    c with eta_i/c <= |D phi_i^(n)| <= c eta_i; fails beyond the cap."""
    h = horizon or system.horizon
    label_sets = [
        frozenset(
            system.schedule.letters(n)[i].label
            for i in system.schedule.kept_indices(n)
        )
        for n in range(1, h + 1)
    ]
    if len(set(label_sets)) != 1:
        raise InputError(
            "evenly-varying check needs comparable letter sets across times"
        )
    norms = {lbl: [] for lbl in label_sets[0]}
    for n in range(1, h + 1):
        lo, hi = system.letter_brackets[n]
        for i in system.schedule.kept_indices(n):
            lbl = system.schedule.letters(n)[i].label
            norms[lbl].append(math.sqrt(lo[i] * hi[i]))
    eta = {
        lbl: math.exp(math.fsum(math.log(v) for v in vs) / len(vs))
        for lbl, vs in norms.items()
    }
    c = 1.0
    for lbl, vs in norms.items():
        for v in vs:
            c = max(c, v / eta[lbl], eta[lbl] / v)
    return EvenlyVaryingReport(c <= cap, c, eta, cap)


# ---------------------------------------------------------------------------
# hypothesis report
# ---------------------------------------------------------------------------

JUSTIFICATIONS = {
    "autonomous-system": "time-independent system: the dimension identity"
    " holds classically",
    "ascending-finitely-primitive": "finite ascending, finitely primitive"
    " system: the dimension identity holds with no growth or balancing"
    " assumptions",
    "subexponential-ncifs": "finite iterated-function schedule with"
    " subexponentially growing alphabets: the dimension identity holds",
    "weakly-balanced-finitely-primitive": "weakly balanced, finitely"
    " primitive system with subexponential follower growth: the dimension"
    " identity holds",
    "shrinking-norms-exponential-growth": "finitely primitive with"
    " exponentially bounded follower growth, bounded norm-ratio growth and"
    " vanishing largest norms: the dimension identity holds",
    "evenly-varying": "evenly varying infinite iterated-function schedule:"
    " the dimension identity holds",
    "upper-bound-only": "no supporting hypotheses verified: the estimate is"
    " an upper bound for the Hausdorff dimension only",
}


@dataclass(frozen=True)
class HypothesisReport:
    primitivity: Optional[PrimitivityCertificate]
    balancing: BalancingReport
    subexp_verdict: str
    follower_verdict: str
    diameter_ok: bool
    ncifs: bool
    stationary: bool
    autonomous: bool
    ascending: bool
    evenly_varying: Optional[EvenlyVaryingReport]
    justification: str
    detail: str

    @property
    def bowen_supported(self) -> bool:
        return self.justification != "upper-bound-only"

    def as_dict(self):
        return {
            "justification": self.justification,
            "detail": self.detail,
            "bowen_formula_supported": self.bowen_supported,
            "primitivity_p": None if self.primitivity is None else self.primitivity.p,
            "balancing": self.balancing.verdict,
            "alphabet_growth": self.subexp_verdict,
            "follower_growth": self.follower_verdict,
            "diameter_condition": self.diameter_ok,
            "ncifs": self.ncifs,
            "stationary": self.stationary,
            "autonomous": self.autonomous,
            "ascending": self.ascending,
            "class_M": "unchecked (evenly-varying sufficient condition only)",
        }


def hypothesis_report(system, p_max: int = 4) -> HypothesisReport:
    """Collect every structural check and name the justifying theorem, if any."""
    sched = system.schedule
    try:
        cert = find_primitivity(sched, min(p_max, max(0, sched.horizon - 2)))
    except (ConfigurationError, BudgetError):
        cert = None
    stats = growth_stats(sched)
    try:
        sub = subexp_diagnostic(stats)
        sub_verdict = sub.count_trend.verdict
        fol_verdict = sub.follower_trend.verdict
        fol_label = sub.follower_trend.label
        sub_label = sub.count_trend.label
    except ConfigurationError:
        sub_verdict = fol_verdict = "inconclusive"
        sub_label = fol_label = "inconclusive (horizon too short)"
    bal = balancing_class(system)
    diam = geometry.diameter_diagnostics(system)
    diameter_ok = diam.satisfied
    ascending = "ascending" in system.flags
    ev = None
    try:
        ev = evenly_varying_check(system)
    except InputError:
        ev = None

    c_hi_last = [system.c_bounds(n)[1] for n in range(1, system.horizon + 1)]
    shrinking = c_hi_last[-1] < 0.5 * max(c_hi_last) and c_hi_last[-1] < 0.1

    if system.is_autonomous and cert is not None:
        # time-independence alone is not enough: the classical identity needs
        # letters to be joinable (finite irreducibility)
        justification = "autonomous-system"
    elif ascending and cert is not None:
        justification = "ascending-finitely-primitive"
    elif system.is_ncifs and sub_verdict == SUBEXPONENTIAL:
        justification = "subexponential-ncifs"
    elif (
        cert is not None
        and bal.at_least("weakly")
        and fol_verdict == SUBEXPONENTIAL
    ):
        justification = "weakly-balanced-finitely-primitive"
    elif cert is not None and fol_verdict == EXPONENTIAL and shrinking:
        justification = "shrinking-norms-exponential-growth"
    elif ev is not None and ev.ok and system.is_ncifs and system.tail_rule is not None:
        justification = "evenly-varying"
    else:
        justification = "upper-bound-only"
    return HypothesisReport(
        primitivity=cert,
        balancing=bal,
        subexp_verdict=sub_label,
        follower_verdict=fol_label,
        diameter_ok=diameter_ok,
        ncifs=system.is_ncifs,
        stationary=system.is_stationary,
        autonomous=system.is_autonomous,
        ascending=ascending,
        evenly_varying=ev,
        justification=justification,
        detail=JUSTIFICATIONS[justification],
    )
