"""Vectorized breadth-first sweep over admissible words of a system.

One frontier pass serves both the partition functions (norm states) and the
limit-set samplers (point states).  States are family-specific numpy array
bundles; expansion groups the frontier by last letter so the per-step Python
cost is O(#letters), not O(#words).  Exact families (similarities via
log-free products, reciprocal shifts via float continuants while they stay
below 2^53) keep lo == hi; anything else falls back to a word-at-a-time walk
with interval brackets.
"""

from __future__ import annotations

import numpy as np

from .errors import BudgetError, UnsupportedError
from .maps import MoebiusInverse, Similarity, compose_norm
from .symbolic import Word

DEFAULT_BUDGET = 2_000_000


def _family(system, m, n):
    kinds = set()
    for j in range(m, n + 1):
        for idx in system.schedule.kept_indices(j):
            kinds.add(type(system.maps[j][idx]))
    if kinds <= {Similarity}:
        return "similarity"
    if kinds <= {MoebiusInverse}:
        return "moebius"
    return "generic"


def _moebius_float_safe(system, m, n) -> bool:
    """Continuants stay exactly representable in float64 on this range."""
    bound = 1.0
    for j in range(m, n + 1):
        digits = [
            system.maps[j][idx].digit for idx in system.schedule.kept_indices(j)
        ]
        bound *= max(digits) + 1.0
        if bound > 2.0**52:
            return False
    return True


class SimilarityState:
    """norms[i] = exact |D phi_w| of frontier word i (product of |ratio|)."""

    def __init__(self, system):
        self.system = system

    def init(self, j, letters):
        ratios = self._ratios(j)
        return (ratios[letters],)

    def extend(self, j, state, src, new_letters):
        (norms,) = state
        return (norms[src] * self._ratios(j)[new_letters],)

    def _ratios(self, j):
        return np.array(
            [abs(p.ratio) for p in self.system.maps[j]], dtype=float
        )

    def norm_bounds(self, state):
        (norms,) = state
        return norms, norms


class MoebiusState:
    """(q_prev, q_cur) continuants; sup norm = q_cur^-2 exactly."""

    def __init__(self, system):
        self.system = system

    def _digits(self, j):
        return np.array(
            [getattr(p, "digit", 1.0) for p in self.system.maps[j]], dtype=float
        )

    def init(self, j, letters):
        d = self._digits(j)[letters]
        return (np.ones_like(d), d)

    def extend(self, j, state, src, new_letters):
        qp, qc = state
        d = self._digits(j)[new_letters]
        return (qc[src], d * qc[src] + qp[src])

    def norm_bounds(self, state):
        qp, qc = state
        v = qc**-2.0
        return v, v


class SimilarityPointState(SimilarityState):
    """Affine composition (scale, offset / offset2d) for point sampling."""

    def init(self, j, letters):
        scale = np.array([p.ratio for p in self.system.maps[j]], dtype=float)[letters]
        offs = self._offsets(j)
        return (scale,) + tuple(o[letters] for o in offs)

    def extend(self, j, state, src, new_letters):
        scale, *off = state
        nscale = np.array(
            [p.ratio for p in self.system.maps[j]], dtype=float
        )[new_letters]
        noffs = [o[new_letters] for o in self._offsets(j)]
        out_scale = scale[src] * nscale
        out_offs = [scale[src] * no + o[src] for o, no in zip(off, noffs)]
        return (out_scale, *out_offs)

    def _offsets(self, j):
        dim = self.system.dim
        return [
            np.array([p.offset[k] for p in self.system.maps[j]], dtype=float)
            for k in range(dim)
        ]

    def region(self, state, dom):
        """Per-word (center..., radius) of the image of the domain space."""
        scale, *off = state
        if self.system.dim == 1:
            lo, hi = dom.bounds
            a = scale * lo + off[0]
            b = scale * hi + off[0]
            return (0.5 * (a + b),), 0.5 * np.abs(b - a)
        cx, cy, r = dom.bounds
        return (
            (scale * cx + off[0], scale * cy + off[1]),
            np.abs(scale) * r,
        )


class MoebiusPointState(MoebiusState):
    """Full continuant quadruple: phi_w(x) = (pp*x + pc) / (qp*x + qc)."""

    def init(self, j, letters):
        d = self._digits(j)[letters]
        return (np.zeros_like(d), np.ones_like(d), np.ones_like(d), d)

    def extend(self, j, state, src, new_letters):
        pp, pc, qp, qc = state
        d = self._digits(j)[new_letters]
        return (pc[src], d * pc[src] + pp[src], qc[src], d * qc[src] + qp[src])

    def region(self, state, dom):
        pp, pc, qp, qc = state
        lo, hi = dom.bounds
        a = (pp * lo + pc) / (qp * lo + qc)
        b = (pp * hi + pc) / (qp * hi + qc)
        left = np.minimum(a, b)
        right = np.maximum(a, b)
        return (0.5 * (left + right),), 0.5 * (right - left)


def sweep(system, m, n, state_impl, on_level, budget=DEFAULT_BUDGET):
    """Expand the pruned frontier from time m to n, reporting every level.

    `on_level(j, letters, state, words)` runs once per time j in [m, n];
    `words` carries per-word label tuples only when tracking is enabled via
    on_level's `needs_words` attribute (used by the samplers).
    """
    sched = system.schedule
    needs_words = getattr(on_level, "needs_words", False)
    letters = sched.kept_indices(m)
    state = state_impl.init(m, letters)
    words = None
    if needs_words:
        labels = [e.label for e in sched.letters(m)]
        words = [(labels[a],) for a in letters]
    on_level(m, letters, state, words)
    for j in range(m, n):
        follower_lists = {
            int(a): sched.followers(j, int(a)) for a in np.unique(letters)
        }
        groups = []
        total = 0
        for a, fl in follower_lists.items():
            pos = np.flatnonzero(letters == a)
            if pos.size == 0 or fl.size == 0:
                continue
            groups.append((pos, fl))
            total += pos.size * fl.size
        if not groups:
            raise UnsupportedError(
                f"frontier died at time {j}; pruning should prevent this"
            )
        if total > budget:
            raise BudgetError(
                f"frontier would hold {total} words at time {j + 1},"
                f" over the budget of {budget}; try the matrix-exact strategy"
            )
        src = np.concatenate([np.repeat(pos, fl.size) for pos, fl in groups])
        new_letters = np.concatenate([np.tile(fl, pos.size) for pos, fl in groups])
        state = state_impl.extend(j + 1, state, src, new_letters)
        letters = new_letters
        if needs_words:
            labels = [e.label for e in sched.letters(j + 1)]
            words = [words[s] + (labels[b],) for s, b in zip(src, new_letters)]
        on_level(j + 1, letters, state, words)


def generic_norm_walk(system, m, n, on_word, budget=DEFAULT_BUDGET):
    """Word-at-a-time fallback: on_word(j, word, bracket) per admissible word.

    Used for tabulated/mixed families and for reciprocal-shift ranges whose
    continuants would overflow float64 (exact integer path).
    """
    sched = system.schedule
    counter = [0]

    def rec(j, prev, labels):
        cand = sched.kept_indices(m) if j == m else sched.followers(j - 1, prev)
        for a in cand:
            lbl = sched.letters(j)[a].label
            counter[0] += 1
            if counter[0] > budget:
                raise BudgetError(
                    f"enumeration exceeded budget of {budget} word extensions"
                )
            word = Word(m, tuple(labels) + (lbl,))
            on_word(j, word, compose_norm(word, system, check=False))
            if j < n:
                rec(j + 1, a, labels + [lbl])

    rec(m, -1, [])
