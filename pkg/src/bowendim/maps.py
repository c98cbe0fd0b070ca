"""Conformal map families with certified derivative-norm brackets.

Three families cover the bundled systems: affine similarities (exact norms),
reciprocal shifts x -> 1/(digit + x) on [0, 1] (exact norms through the
continuant recursion of the composed Moebius transform), and tabulated
monotone interval maps carrying user-certified derivative bounds per cell.
Brackets are exact expressions evaluated in float64; no outward rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import CertificationError, InputError, UnsupportedError
from .symbolic import Word, is_admissible


@dataclass(frozen=True)
class NormBracket:
    """Certified lo <= sup |D phi| <= hi over the word's domain."""

    lo: float
    hi: float
    method: str  # exact | continuant | interval | bdp-bracket

    def __post_init__(self):
        if not (0.0 <= self.lo <= self.hi):
            raise InputError(f"invalid bracket [{self.lo}, {self.hi}]")

    @property
    def exact(self) -> bool:
        return self.lo == self.hi


@dataclass(frozen=True)
class Space:
    """Compact space attached to a (vertex, time) pair.

    kind "interval": bounds = (lo, hi); kind "disk": bounds = (cx, cy, r).
    The enlarged conformality domain W is the concentric `enlargement`-times
    blow-up (1.5 keeps diam(W) <= 2 diam(X)).  `declared` may carry
    user-asserted cone/covering constants for planar model systems; nothing
    numeric consumes them, and intervals satisfy those conditions trivially.
    """

    kind: str
    bounds: tuple
    enlargement: float = 1.5
    declared: tuple = ()

    def __post_init__(self):
        if self.kind == "interval":
            lo, hi = self.bounds
            if not lo < hi:
                raise InputError(f"degenerate interval {self.bounds}")
        elif self.kind == "disk":
            if self.bounds[2] <= 0:
                raise InputError(f"degenerate disk {self.bounds}")
        else:
            raise InputError(f"unknown space kind {self.kind!r}")

    @property
    def diam(self) -> float:
        if self.kind == "interval":
            return self.bounds[1] - self.bounds[0]
        return 2.0 * self.bounds[2]

    @property
    def center(self):
        if self.kind == "interval":
            return 0.5 * (self.bounds[0] + self.bounds[1])
        return self.bounds[:2]

    def enlarged(self) -> "Space":
        if self.kind == "interval":
            c = 0.5 * (self.bounds[0] + self.bounds[1])
            h = 0.5 * self.enlargement * (self.bounds[1] - self.bounds[0])
            return Space("interval", (c - h, c + h), self.enlargement)
        cx, cy, r = self.bounds
        return Space("disk", (cx, cy, self.enlargement * r), self.enlargement)

    def contains(self, other: "Space", tol=1e-12) -> bool:
        if self.kind != other.kind:
            return False
        if self.kind == "interval":
            return (
                other.bounds[0] >= self.bounds[0] - tol
                and other.bounds[1] <= self.bounds[1] + tol
            )
        cx, cy, r = self.bounds
        ox, oy, orr = other.bounds
        return math.hypot(ox - cx, oy - cy) + orr <= r + tol

    def interior_overlap(self, other: "Space") -> float:
        """Positive overlap measure of interiors (length / radial excess)."""
        if self.kind == "interval":
            return min(self.bounds[1], other.bounds[1]) - max(
                self.bounds[0], other.bounds[0]
            )
        cx, cy, r = self.bounds
        ox, oy, orr = other.bounds
        return (r + orr) - math.hypot(ox - cx, oy - cy)


def interval(lo, hi) -> Space:
    return Space("interval", (float(lo), float(hi)))


def disk(cx, cy, r) -> Space:
    return Space("disk", (float(cx), float(cy), float(r)))


# ---------------------------------------------------------------------------
# map families
# ---------------------------------------------------------------------------


class ConformalMap:
    dim = 1

    def __call__(self, x):
        raise NotImplementedError

    def deriv_abs(self, x) -> float:
        raise NotImplementedError

    def image(self, dom: Space) -> Space:
        raise NotImplementedError

    def deriv_range_on(self, dom: Space):
        """(inf, sup) bounds of |D phi| over dom."""
        raise NotImplementedError

    def norm_on(self, dom: Space) -> NormBracket:
        lo, hi = self.deriv_range_on(dom)
        return NormBracket(hi, hi, "exact")


@dataclass(frozen=True)
class Similarity(ConformalMap):
    """x -> ratio*x + offset (1D) or z -> ratio*z + offset (2D model systems)."""

    ratio: float
    offset: tuple
    dim: int = 1

    def __post_init__(self):
        off = self.offset if isinstance(self.offset, tuple) else (float(self.offset),)
        object.__setattr__(self, "offset", tuple(float(o) for o in off))
        if len(self.offset) != self.dim:
            raise InputError(f"offset {self.offset} does not match dim {self.dim}")

    def __call__(self, x):
        if self.dim == 1:
            return self.ratio * x + self.offset[0]
        return (self.ratio * x[0] + self.offset[0], self.ratio * x[1] + self.offset[1])

    def deriv_abs(self, x) -> float:
        return abs(self.ratio)

    def image(self, dom: Space) -> Space:
        if dom.kind == "interval":
            a = self(dom.bounds[0])
            b = self(dom.bounds[1])
            return interval(min(a, b), max(a, b))
        cx, cy, r = dom.bounds
        nx, ny = self((cx, cy))
        return disk(nx, ny, abs(self.ratio) * r)

    def deriv_range_on(self, dom):
        r = abs(self.ratio)
        return (r, r)


@dataclass(frozen=True)
class MoebiusInverse(ConformalMap):
    """x -> 1/(digit + x) on [0, 1]; the continued-fraction branch map."""

    digit: float

    def __post_init__(self):
        if self.digit < 1:
            raise InputError(f"digit must be >= 1, got {self.digit}")

    @property
    def integral(self) -> bool:
        return float(self.digit) == int(self.digit)

    def __call__(self, x):
        return 1.0 / (self.digit + x)

    def deriv_abs(self, x) -> float:
        return 1.0 / (self.digit + x) ** 2

    def image(self, dom: Space) -> Space:
        a = self(dom.bounds[1])  # decreasing map: endpoints swap
        b = self(dom.bounds[0])
        return interval(a, b)

    def deriv_range_on(self, dom):
        lo, hi = dom.bounds
        return (self.deriv_abs(hi), self.deriv_abs(lo))


@dataclass(frozen=True)
class TabulatedInterval(ConformalMap):
    """Monotone C^1 interval map given by node values plus certified
    per-cell derivative bounds; evaluation returns enclosure midpoints."""

    nodes: tuple
    values: tuple
    deriv_lo: tuple
    deriv_hi: tuple
    distortion: Optional[float] = None

    def __post_init__(self):
        n = len(self.nodes)
        if n < 2 or len(self.values) != n:
            raise InputError("need matching nodes/values with >= 2 nodes")
        if len(self.deriv_lo) != n - 1 or len(self.deriv_hi) != n - 1:
            raise InputError("derivative bounds must cover each cell")
        dx = [self.nodes[i + 1] - self.nodes[i] for i in range(n - 1)]
        if any(d <= 0 for d in dx):
            raise InputError("nodes must be strictly increasing")
        inc = self.values[-1] > self.values[0]
        for i in range(n - 1):
            dv = self.values[i + 1] - self.values[i]
            if inc and dv <= 0 or not inc and dv >= 0:
                raise InputError("values must be strictly monotone")
            if not (0 <= self.deriv_lo[i] <= self.deriv_hi[i]):
                raise InputError("invalid derivative bounds")
            mean = abs(dv) / dx[i]
            if not (self.deriv_lo[i] - 1e-12 <= mean <= self.deriv_hi[i] + 1e-12):
                raise InputError(
                    f"cell {i}: mean slope {mean} escapes "
                    f"[{self.deriv_lo[i]}, {self.deriv_hi[i]}]"
                )

    @property
    def increasing(self) -> bool:
        return self.values[-1] > self.values[0]

    def _cell(self, x) -> int:
        for i in range(len(self.nodes) - 2, -1, -1):
            if x >= self.nodes[i]:
                return i
        return 0

    def enclosure(self, x):
        """Certified (lo, hi) interval containing phi(x)."""
        i = self._cell(x)
        x0, x1 = self.nodes[i], self.nodes[i + 1]
        y0, y1 = self.values[i], self.values[i + 1]
        dlo, dhi = self.deriv_lo[i], self.deriv_hi[i]
        if self.increasing:
            lo = max(y0 + dlo * (x - x0), y1 - dhi * (x1 - x))
            hi = min(y0 + dhi * (x - x0), y1 - dlo * (x1 - x))
        else:
            lo = max(y0 - dhi * (x - x0), y1 + dlo * (x1 - x))
            hi = min(y0 - dlo * (x - x0), y1 + dhi * (x1 - x))
        return (min(lo, hi), max(lo, hi))

    def __call__(self, x):
        lo, hi = self.enclosure(x)
        return 0.5 * (lo + hi)

    def deriv_abs(self, x) -> float:
        i = self._cell(x)
        return 0.5 * (self.deriv_lo[i] + self.deriv_hi[i])

    def image(self, dom: Space) -> Space:
        lo_enc = self.enclosure(dom.bounds[0])
        hi_enc = self.enclosure(dom.bounds[1])
        a = min(lo_enc[0], hi_enc[0])
        b = max(lo_enc[1], hi_enc[1])
        return interval(a, b)

    def deriv_range_on(self, dom):
        lo, hi = dom.bounds
        dlo, dhi = math.inf, 0.0
        for i in range(len(self.nodes) - 1):
            if self.nodes[i + 1] <= lo or self.nodes[i] >= hi:
                continue
            dlo = min(dlo, self.deriv_lo[i])
            dhi = max(dhi, self.deriv_hi[i])
        if dhi == 0.0:
            raise InputError(f"domain {dom.bounds} outside tabulated range")
        return (dlo, dhi)

    def norm_on(self, dom: Space) -> NormBracket:
        lo, hi = self.deriv_range_on(dom)
        return NormBracket(lo, hi, "interval")


@dataclass(frozen=True)
class ComposedMap(ConformalMap):
    """Frozen composition used as a single letter after re-blocking."""

    parts: tuple  # applied right to left: parts[0] is the outermost map

    def __post_init__(self):
        flat = []
        for p in self.parts:
            if isinstance(p, ComposedMap):
                flat.extend(p.parts)
            else:
                flat.append(p)
        object.__setattr__(self, "parts", tuple(flat))
        dims = {getattr(p, "dim", 1) for p in self.parts}
        if len(dims) != 1:
            raise InputError("mixed dimensions in composition")
        object.__setattr__(self, "dim", dims.pop())

    def __call__(self, x):
        for p in reversed(self.parts):
            x = p(x)
        return x

    def deriv_abs(self, x) -> float:
        acc = 1.0
        for p in reversed(self.parts):
            acc *= p.deriv_abs(x)
            x = p(x)
        return acc

    def image(self, dom: Space) -> Space:
        for p in reversed(self.parts):
            dom = p.image(dom)
        return dom

    def deriv_range_on(self, dom):
        br = _compose_bracket(self.parts, dom)
        return (br.lo, br.hi)

    def norm_on(self, dom: Space) -> NormBracket:
        return _compose_bracket(self.parts, dom)


# ---------------------------------------------------------------------------
# composition norms
# ---------------------------------------------------------------------------


def continuants(digits):
    """(q_prev, q_cur) for the composed Moebius map of a digit string.

    phi maps x to (p_prev*x + p_cur) / (q_prev*x + q_cur); the sup of |D phi|
    on [0, 1] is 1/q_cur^2, the inf 1/(q_prev + q_cur)^2.  Integer digits run
    in exact arithmetic.
    """
    exact = all(float(d) == int(d) for d in digits)
    qp, qc = (0, 1) if exact else (0.0, 1.0)
    for d in digits:
        d = int(d) if exact else float(d)
        qp, qc = qc, d * qc + qp
    return qp, qc


def _flatten_maps(maps_seq):
    flat = []
    for p in maps_seq:
        if isinstance(p, ComposedMap):
            flat.extend(p.parts)
        else:
            flat.append(p)
    return flat


def _compose_bracket(maps_seq, dom: Space) -> NormBracket:
    """Certified bracket for a composition, dispatching on family."""
    maps_seq = _flatten_maps(maps_seq)
    if all(isinstance(p, Similarity) for p in maps_seq):
        v = 1.0
        for p in maps_seq:
            v *= abs(p.ratio)
        return NormBracket(v, v, "exact")
    if all(isinstance(p, MoebiusInverse) for p in maps_seq):
        qp, qc = continuants([p.digit for p in maps_seq])
        sup = 1.0 / float(qc) ** 2
        return NormBracket(sup, sup, "continuant")
    # generic chain: accumulate pointwise bounds right to left; the product of
    # infima lower-bounds the sup as well
    lo = hi = 1.0
    region = dom
    for p in reversed(list(maps_seq)):
        dlo, dhi = p.deriv_range_on(region)
        lo *= dlo
        hi *= dhi
        region = p.image(region)
    return NormBracket(lo, hi, "interval")


def _word_maps(word: Word, system):
    return [
        system.map_for(word.start + k, lbl) for k, lbl in enumerate(word.letters)
    ]


def compose_norm(word: Word, system, check: bool = True) -> NormBracket:
    """Certified bracket on the sup derivative norm of phi_word."""
    if check and not is_admissible(word, system.schedule):
        raise InputError(f"word {word} is not admissible")
    key = (word.start, word.letters)
    memo = system.norm_memo
    hit = memo.get(key)
    if hit is not None:
        return hit
    dom = system.domain_space(word.end, word.letters[-1])
    out = _compose_bracket(_word_maps(word, system), dom)
    memo[key] = out  # concurrent last-writer-wins on identical values
    return out


def image_region(word: Word, system, check: bool = True) -> Space:
    """Image of the word's domain space: exact endpoints for monotone 1D maps,
    certified enclosure for tabulated ones."""
    if check and not is_admissible(word, system.schedule):
        raise InputError(f"word {word} is not admissible")
    region = system.domain_space(word.end, word.letters[-1])
    for p in reversed(_word_maps(word, system)):
        region = p.image(region)
    return region


def _map_distortion(p) -> float:
    if isinstance(p, Similarity):
        return 1.0
    if isinstance(p, MoebiusInverse):
        # sup/inf ratio of any composed branch is ((q_prev+q_cur)/q_cur)^2 <= 4
        return 4.0
    if isinstance(p, TabulatedInterval):
        if p.distortion is not None:
            return p.distortion
        raise CertificationError(
            "tabulated map without a declared distortion constant"
        )
    if isinstance(p, ComposedMap):
        return max(_map_distortion(q) for q in p.parts)
    raise UnsupportedError(f"no distortion rule for {type(p).__name__}")


def distortion_constant(system) -> float:
    """Certified bound K with |D phi_w(x)| <= K |D phi_w(y)| along any branch."""
    if system.declared_distortion is not None:
        return float(system.declared_distortion)
    k = 1.0
    for n in range(1, system.schedule.horizon + 1):
        for idx in system.schedule.kept_indices(n):
            k = max(k, _map_distortion(system.maps[n][idx]))
    return k


@dataclass(frozen=True)
class Contraction:
    """Uniform contraction certificate: every admissible `block` — letter
    window has sup norm <= eta_block < 1; eta_step is the per-step rate."""

    block: int
    eta_block: float
    eta_step: float
    singles_max: float


def contraction_eta(system, m_max: int = 8, budget: int = 200_000) -> Contraction:
    """Smallest block length m <= m_max whose admissible m-windows all contract.

    Rejects the system (CertificationError) when even length-m_max blocks
    reach norm >= 1.
    """
    sched = system.schedule
    singles = []
    for n in range(1, sched.horizon + 1):
        for idx in sched.kept_indices(n):
            dom = system.domain_space_idx(n, idx)
            singles.append(system.maps[n][idx].norm_on(dom).hi)
    singles_max = max(singles)
    if singles_max < 1.0:
        return Contraction(1, singles_max, singles_max, singles_max)

    counter = [0]
    for m in range(2, m_max + 1):
        if sched.horizon < m:
            break  # no window of length m exists; nothing to certify
        worst = 0.0
        for j in range(1, sched.horizon - m + 2):
            worst = max(worst, _worst_window(system, j, m, budget, counter))
        if worst < 1.0:
            return Contraction(m, worst, worst ** (1.0 / m), singles_max)
    raise CertificationError(
        f"no contracting block length <= {m_max}; system rejected"
    )


def _worst_window(system, j, m, budget, counter):
    """Max sup-norm bracket hi over admissible m-letter windows starting at j."""
    sched = system.schedule
    worst = 0.0

    def rec(t, prev, labels):
        nonlocal worst
        cand = sched.kept_indices(j) if t == j else sched.followers(t - 1, prev)
        for a in cand:
            lbl = sched.letters(t)[a].label
            if t == j + m - 1:
                counter[0] += 1
                if counter[0] > budget:
                    raise CertificationError(
                        f"contraction search exceeded {budget} windows"
                    )
                word = Word(j, tuple(labels) + (lbl,))
                worst = max(worst, compose_norm(word, system, check=False).hi)
            else:
                rec(t + 1, a, labels + [lbl])

    rec(j, -1, [])
    return worst
