"""Limit-set sampling, level covers, box-counting oracle, geometric checks.

Points are sampled through finite word prefixes: the nested image of a
prefix's domain space encloses the true limit point, so every sample carries
a certified radius.  The box-counting slope is the package's independent
oracle; a sampled point occupies every box its enclosure meets, making the
count conservative for upper-consistency checks against the pressure-based
dimension estimate.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _frontier
from .errors import BudgetError, ConfigurationError, InputError
from .maps import image_region
from .symbolic import Word
from .trend import TrendReport, trend_report


@dataclass(frozen=True)
class LimitPoint:
    point: tuple
    radius: float
    word: Word


@dataclass(frozen=True)
class PointCloud:
    """Column layout: coords is (N, d); words align with rows."""

    coords: np.ndarray
    radii: np.ndarray
    words: tuple
    depth: int
    seed: Optional[int] = None

    def __len__(self):
        return self.coords.shape[0]

    def rows(self):
        """CSV rows (x[, y], radius, word)."""
        for i in range(len(self)):
            yield tuple(self.coords[i]) + (float(self.radii[i]), self.words[i])


def project_point(word_prefix: Word, system) -> LimitPoint:
    """Midpoint of the prefix's nested image with certified enclosure radius."""
    if len(word_prefix) < 1:
        raise InputError("need a nonempty prefix")
    region = image_region(word_prefix, system)
    if region.kind == "interval":
        lo, hi = region.bounds
        return LimitPoint((0.5 * (lo + hi),), 0.5 * (hi - lo), word_prefix)
    cx, cy, r = region.bounds
    return LimitPoint((cx, cy), r, word_prefix)


def _threads():
    try:
        return max(1, int(os.environ.get("BOWENDIM_THREADS", "1")))
    except ValueError:
        return 1


def sample_limit_set(
    system,
    depth: int,
    max_points: int,
    strategy: str = "exhaustive",
    seed: int = 0,
    with_words: bool = True,
) -> PointCloud:
    """Point cloud of depth-`depth` prefix projections.

    exhaustive: one point per admissible word (budget error past max_points);
    random-admissible: `max_points` uniform random admissible extensions with
    per-index seed streams, so any thread count reproduces the same cloud.
    `with_words=False` skips the per-point word labels (large clouds feeding
    the box-counting oracle don't need them).
    """
    if depth < 1:
        raise InputError("depth must be >= 1")
    if depth > system.horizon:
        raise ConfigurationError(
            f"depth {depth} beyond materialized horizon {system.horizon}"
        )
    if strategy == "exhaustive":
        return _sample_exhaustive(system, depth, max_points, with_words)
    if strategy == "random-admissible":
        return _sample_random(system, depth, max_points, seed)
    raise InputError(f"unknown sampling strategy {strategy!r}")


def _join_words(raw, count):
    if raw is None:
        return ("",) * count
    return tuple(".".join(w) for w in raw)


def _sample_exhaustive(system, depth, max_points, with_words=True):
    fam = _frontier._family(system, 1, depth)
    sched = system.schedule
    if fam == "similarity":
        impl = _frontier.SimilarityPointState(system)
    elif fam == "moebius" and _frontier._moebius_float_safe(system, 1, depth):
        impl = _frontier.MoebiusPointState(system)
    else:
        impl = None
    if impl is not None:
        holder = {}

        def on_level(j, letters, state, words):
            if j == depth:
                holder["letters"] = letters
                holder["state"] = state
                holder["words"] = words

        on_level.needs_words = with_words
        _frontier.sweep(system, 1, depth, impl, on_level, budget=max_points)
        letters = holder["letters"]
        doms = [system.domain_space_idx(depth, int(i)) for i in letters]
        if len({d.bounds for d in doms}) == 1:
            centers, radii = impl.region(holder["state"], doms[0])
        else:
            # per-word domain spaces; group by domain
            coords_parts = [None] * letters.size
            radii_arr = np.zeros(letters.size)
            state = holder["state"]
            for bounds in {d.bounds for d in doms}:
                mask = np.array([d.bounds == bounds for d in doms])
                sub = tuple(arr[mask] for arr in state)
                c, r = impl.region(sub, doms[int(np.flatnonzero(mask)[0])])
                for k, i in enumerate(np.flatnonzero(mask)):
                    coords_parts[i] = tuple(col[k] for col in c)
                    radii_arr[i] = r[k]
            coords = np.array(coords_parts)
            words = _join_words(holder["words"], letters.size)
            return PointCloud(coords, radii_arr, words, depth)
        coords = np.stack([np.asarray(c, dtype=float) for c in centers], axis=1)
        words = _join_words(holder["words"], letters.size)
        return PointCloud(coords, np.asarray(radii, dtype=float), words, depth)

    # generic fallback: region per word
    pts, radii, words = [], [], []
    count = [0]

    def rec(j, prev, labels):
        cand = sched.kept_indices(1) if j == 1 else sched.followers(j - 1, prev)
        for a in cand:
            lbl = sched.letters(j)[a].label
            if j == depth:
                count[0] += 1
                if count[0] > max_points:
                    raise BudgetError(
                        f"exhaustive sampling exceeds {max_points} points at"
                        f" depth {depth}; lower the depth or raise the budget"
                    )
                w = Word(1, tuple(labels) + (lbl,))
                lp = project_point(w, system)
                pts.append(lp.point)
                radii.append(lp.radius)
                words.append(w.label())
            else:
                rec(j + 1, a, labels + [lbl])

    rec(1, -1, [])
    return PointCloud(np.array(pts), np.array(radii), tuple(words), depth)


def _one_random_word(system, depth, seed, index):
    rng = np.random.default_rng(np.random.SeedSequence((seed, index)))
    sched = system.schedule
    labels = []
    prev = None
    for j in range(1, depth + 1):
        cand = sched.kept_indices(1) if j == 1 else sched.followers(j - 1, prev)
        prev = int(cand[rng.integers(cand.size)])
        labels.append(sched.letters(j)[prev].label)
    return Word(1, tuple(labels))


def _sample_random(system, depth, max_points, seed):
    def build(i):
        w = _one_random_word(system, depth, seed, i)
        lp = project_point(w, system)
        return lp.point, lp.radius, w.label()

    n_threads = _threads()
    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            results = list(pool.map(build, range(max_points)))
    else:
        results = [build(i) for i in range(max_points)]
    pts = np.array([r[0] for r in results])
    radii = np.array([r[1] for r in results])
    words = tuple(r[2] for r in results)
    return PointCloud(pts, radii, words, depth, seed)


# ---------------------------------------------------------------------------
# box counting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoxCountFit:
    slope: float
    stderr: float
    scales: tuple
    counts: tuple

    def as_dict(self):
        return {
            "slope": self.slope,
            "stderr": self.stderr,
            "scales": list(self.scales),
            "counts": list(self.counts),
        }


def _flat_codes(idx):
    """Collision-free int64 codes for integer box coordinates."""
    if idx.shape[1] == 1:
        return idx[:, 0]
    shift = np.int64(1) << 31
    return idx[:, 0] * shift + idx[:, 1]


def _boxes_at_scale(coords, radii, eps, budget=20_000_000):
    """Distinct grid boxes (anchored at 0) met by the enclosures."""
    d = coords.shape[1]
    lo_idx = np.floor((coords - radii[:, None]) / eps).astype(np.int64)
    hi_idx = np.floor((coords + radii[:, None]) / eps).astype(np.int64)
    span = hi_idx - lo_idx
    if span.max(initial=0) <= 1:
        # enclosures meet at most 2 boxes per axis: corner enumeration suffices
        corners = []
        for mask in range(2**d):
            pick = np.array([(mask >> k) & 1 for k in range(d)], dtype=bool)
            corners.append(np.where(pick[None, :], hi_idx, lo_idx))
        allc = np.concatenate(corners, axis=0)
    else:
        cells = (span + 1).prod(axis=1)
        if cells.sum() > budget:
            raise BudgetError(
                f"box enumeration at scale {eps} needs {cells.sum()} cells"
            )
        rows = []
        for i in range(coords.shape[0]):
            axes = [np.arange(lo_idx[i, k], hi_idx[i, k] + 1) for k in range(d)]
            grid = np.meshgrid(*axes, indexing="ij")
            rows.append(np.stack([g.ravel() for g in grid], axis=1))
        allc = np.concatenate(rows, axis=0)
    return int(np.unique(_flat_codes(allc)).size)


def box_counting_dim(points, radii, scale_window=(2.0**-14, 2.0**-4)) -> BoxCountFit:
    """Least-squares slope of log N(eps) against log(1/eps) over dyadic scales.

    Each point's enclosure (center +- radius) counts toward every box it
    meets, so the slope over-counts rather than misses mass.
    """
    coords = np.asarray(points, dtype=float)
    if coords.ndim == 1:
        coords = coords[:, None]
    radii = np.asarray(radii, dtype=float)
    if radii.ndim == 0:
        radii = np.full(coords.shape[0], float(radii))
    eps_min, eps_max = scale_window
    if not (0 < eps_min < eps_max):
        raise InputError(f"degenerate scale window {scale_window}")
    k_lo = int(math.ceil(-math.log2(eps_max)))
    k_hi = int(math.floor(-math.log2(eps_min)))
    if k_hi <= k_lo:
        raise InputError(
            f"scale window {scale_window} holds fewer than two dyadic scales"
        )
    scales, counts = [], []
    for k in range(k_lo, k_hi + 1):
        eps = 2.0**-k
        scales.append(eps)
        counts.append(_boxes_at_scale(coords, radii, eps))
    xs = [math.log(1.0 / e) for e in scales]
    ys = [math.log(c) for c in counts]
    xbar = sum(xs) / len(xs)
    ybar = sum(ys) / len(ys)
    sxx = sum((x - xbar) ** 2 for x in xs)
    slope = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) / sxx
    resid = [y - (ybar + slope * (x - xbar)) for x, y in zip(xs, ys)]
    dof = max(len(xs) - 2, 1)
    stderr = math.sqrt(sum(r * r for r in resid) / dof / sxx)
    return BoxCountFit(slope, stderr, tuple(scales), tuple(counts))


# ---------------------------------------------------------------------------
# level covers and the open-set check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LevelCover:
    level: int
    cells: tuple  # (word_label, root_vertex, Space)

    def rows(self):
        """CSV rows (word, root, lo/hi or cx/cy/r..., diam)."""
        for lbl, root, region in self.cells:
            yield (lbl, root) + tuple(region.bounds) + (region.diam,)


def level_cover(system, n: int, budget: int = 200_000) -> LevelCover:
    """All depth-n cells: the images of the admissible word prefixes."""
    if n > system.horizon:
        raise ConfigurationError(f"level {n} beyond horizon {system.horizon}")
    sched = system.schedule
    cells = []
    count = [0]

    def rec(j, prev, labels):
        cand = sched.kept_indices(1) if j == 1 else sched.followers(j - 1, prev)
        for a in cand:
            lbl = sched.letters(j)[a].label
            if j == n:
                count[0] += 1
                if count[0] > budget:
                    raise BudgetError(
                        f"level cover at depth {n} exceeds {budget} cells"
                    )
                w = Word(1, tuple(labels) + (lbl,))
                region = image_region(w, system, check=False)
                root = sched.letters(1)[
                    sched.letter_index(1, w.letters[0])
                ].src
                cells.append((w.label(), root, region))
            else:
                rec(j + 1, a, labels + [lbl])

    rec(1, -1, [])
    return LevelCover(n, tuple(cells))


@dataclass(frozen=True)
class OscReport:
    level: int
    checked: int
    violations: tuple
    tol: float

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_osc(system, n: int, tol: float = 1e-12, budget: int = 200_000) -> OscReport:
    """Pairwise interior-overlap check of the level-n cells sharing a root vertex."""
    cover = level_cover(system, n, budget)
    groups = {}
    for lbl, root, region in cover.cells:
        groups.setdefault(root, []).append((lbl, region))
    violations = []
    for root, cells in groups.items():
        if cells[0][1].kind == "interval":
            cells = sorted(cells, key=lambda c: c[1].bounds[0])
            for (la, ra), (lb, rb) in zip(cells, cells[1:]):
                overlap = ra.interior_overlap(rb)
                if overlap > tol:
                    violations.append((la, lb, overlap))
        else:
            for i in range(len(cells)):
                for j in range(i + 1, len(cells)):
                    overlap = cells[i][1].interior_overlap(cells[j][1])
                    if overlap > tol:
                        violations.append((cells[i][0], cells[j][0], overlap))
    return OscReport(n, len(cover.cells), tuple(violations), tol)


# ---------------------------------------------------------------------------
# diameter diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiameterReport:
    d_lo: tuple
    d_hi: tuple
    upper_trend: TrendReport
    ratio_trend: TrendReport
    vertex_trend: TrendReport

    @property
    def satisfied(self) -> bool:
        """Horizon-bounded verdict on both diameter limits and vertex growth."""
        from .trend import SUBEXPONENTIAL

        return all(
            t.verdict == SUBEXPONENTIAL
            for t in (self.upper_trend, self.ratio_trend, self.vertex_trend)
        )

    def as_dict(self):
        return {
            "d_lo": list(self.d_lo),
            "d_hi": list(self.d_hi),
            "upper": self.upper_trend.as_dict(),
            "ratio": self.ratio_trend.as_dict(),
            "vertices": self.vertex_trend.as_dict(),
            "satisfied": self.satisfied,
        }


def diameter_diagnostics(system, horizon: Optional[int] = None) -> DiameterReport:
    """Space-diameter sequences with fitted rates for both diameter limits
    and for the vertex-count growth."""
    h = horizon or system.horizon
    d_lo, d_hi = [], []
    for n in range(0, h + 1):
        lo, hi = system.diam_bounds(n)
        d_lo.append(lo)
        d_hi.append(hi)
    ns = list(range(1, h + 1))
    upper = trend_report("diam_hi", ns, values=d_hi[1:])
    # second limit: y_n = (1/n) sup_{k >= 0} log(d_hi[k+n] / d_lo[k])
    ratio_vals = []
    for n in ns:
        sup = max(
            math.log(d_hi[k + n] / d_lo[k]) for k in range(0, h - n + 1)
        )
        ratio_vals.append(sup)
    ratio = trend_report("diam_ratio", ns, log_values=ratio_vals)
    nverts = [len(system.schedule.vertex_sets[n]) for n in ns]
    verts = trend_report("#V", ns, values=nverts)
    return DiameterReport(tuple(d_lo), tuple(d_hi), upper, ratio, verts)
