"""Builders for the bundled system families and subsystem constructions.

Covers plain similarity schedules (single- or multi-vertex), continued
fraction digit schedules, ascending families with their autonomous closures,
the two re-blocking constructions (uniform blocks from a primitivity
certificate, and blocks cut at single-vertex pinch times), the block
subsystem selected by partition-maximizing endpoint pairs, and the planar
model family whose letter norms follow the inverse-branch decay law near
poles of a doubly periodic map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from . import thermo
from .errors import (
    BuildError,
    CertificationError,
    ConfigurationError,
    InputError,
    UnsupportedError,
)
from .maps import (
    ComposedMap,
    ConformalMap,
    MoebiusInverse,
    Similarity,
    Space,
    compose_norm,
    disk,
    interval,
)
from .symbolic import (
    FullIncidence,
    DenseIncidence,
    GraphSchedule,
    Letter,
    PrimitivityCertificate,
    Word,
    certify_primitivity,
    find_primitivity,
    identity_incidence,
    ncifs_schedule,
)
from .system import SystemSpec, validate_system
from .thermo import PSeriesTail


def _norm_fn(system):
    def fn(word):
        return compose_norm(word, system, check=False).lo

    return fn


def system_primitivity(system, p_max: int = 4) -> Optional[PrimitivityCertificate]:
    """Minimal-p certificate with connector norms taken from the system maps."""
    return find_primitivity(system.schedule, p_max, norm_fn=_norm_fn(system))


def system_certify(system, p: int) -> Optional[PrimitivityCertificate]:
    """Direct certificate at a chosen p (connector definition, not minimality)."""
    return certify_primitivity(system.schedule, p, norm_fn=_norm_fn(system))


# ---------------------------------------------------------------------------
# similarity and continued-fraction builders
# ---------------------------------------------------------------------------


def _incidence_from_spec(spec, cur_labels, nxt_labels):
    if isinstance(spec, str):
        if spec == "full":
            return FullIncidence()
        if spec == "identity":
            return identity_incidence(cur_labels, nxt_labels)
        raise BuildError(f"unknown incidence rule {spec!r}")
    return DenseIncidence(np.asarray(spec, dtype=bool))


def build_similarity_system(
    ratios_schedule: Sequence[Sequence[float]],
    offsets: Sequence[Sequence],
    matrices="full",
    space: Space = None,
    dim: int = 1,
    provenance: str = "similarity schedule",
) -> SystemSpec:
    """Single-vertex system of affine contractions, one list per time step.

    `matrices` is "full", "identity", a per-step list of those/0-1 arrays, or
    a single explicit array reused at every step.
    """
    horizon = len(ratios_schedule)
    if len(offsets) != horizon:
        raise BuildError("ratios and offsets schedules differ in length")
    space = space or (interval(0.0, 1.0) if dim == 1 else disk(0.0, 0.0, 1.0))
    labels = [
        [f"m{k}" for k in range(len(ratios_schedule[n]))] for n in range(horizon)
    ]
    sched_labels = labels
    schedule = ncifs_schedule(sched_labels)
    if not (isinstance(matrices, str) and matrices == "full"):
        per_step = (
            list(matrices)
            if isinstance(matrices, (list, tuple))
            else [matrices] * (horizon - 1)
        )
        if len(per_step) != horizon - 1:
            raise BuildError(
                f"need {horizon - 1} incidence steps, got {len(per_step)}"
            )
        inc = [
            _incidence_from_spec(per_step[n - 1], labels[n - 1], labels[n])
            for n in range(1, horizon)
        ]
        schedule = GraphSchedule(
            schedule.vertex_sets, schedule.alphabets, inc
        )
    maps = [()]
    for n in range(horizon):
        row = []
        for r, o in zip(ratios_schedule[n], offsets[n]):
            off = o if isinstance(o, tuple) else (float(o),) * 1
            if dim == 2 and not isinstance(o, tuple):
                raise BuildError("dim=2 needs (x, y) offsets")
            row.append(Similarity(float(r), off if dim == 1 else tuple(o), dim=dim))
        maps.append(tuple(row))
    spaces = tuple((space,) for _ in range(horizon + 1))
    system = SystemSpec(
        schedule=schedule,
        spaces=spaces,
        maps=tuple(maps),
        dim=dim,
        provenance=provenance,
    )
    return validate_system(system)


def build_cf_system(
    digit_schedule: Sequence[Sequence[float]],
    matrix_rule="full",
    provenance: str = "continued-fraction digits",
    tail_rule=None,
) -> SystemSpec:
    """Reciprocal-shift maps x -> 1/(b + x) on [0, 1], one digit set per time."""
    horizon = len(digit_schedule)
    for n, digits in enumerate(digit_schedule, start=1):
        if any(b < 1 for b in digits):
            raise BuildError(f"digit < 1 at time {n}; branches would expand")
    labels = [[str(b) for b in digits] for digits in digit_schedule]
    schedule = ncifs_schedule(labels)
    if not (isinstance(matrix_rule, str) and matrix_rule == "full"):
        per_step = (
            list(matrix_rule)
            if isinstance(matrix_rule, (list, tuple))
            else [matrix_rule] * (horizon - 1)
        )
        inc = [
            _incidence_from_spec(per_step[n - 1], labels[n - 1], labels[n])
            for n in range(1, horizon)
        ]
        schedule = GraphSchedule(schedule.vertex_sets, schedule.alphabets, inc)
    maps = [()] + [
        tuple(MoebiusInverse(float(b)) for b in digits)
        for digits in digit_schedule
    ]
    spaces = tuple((interval(0.0, 1.0),) for _ in range(horizon + 1))
    system = SystemSpec(
        schedule=schedule,
        spaces=spaces,
        maps=tuple(maps),
        dim=1,
        tail_rule=tail_rule,
        provenance=provenance,
    )
    return validate_system(system)


@dataclass(frozen=True)
class EdgeSpec:
    label: str
    src: str
    dst: str
    map: ConformalMap


def build_gdms(
    vertex_schedule: Sequence[Sequence[str]],
    edge_schedule: Sequence[Sequence[EdgeSpec]],
    spaces: Mapping,
    matrices="full",
    provenance: str = "graph directed schedule",
    dim: int = 1,
) -> SystemSpec:
    """General multi-vertex builder.

    `vertex_schedule[n]` lists V_n for n = 0..horizon; `edge_schedule[n-1]`
    the letters of time n; `spaces[(n, v)]` the compact space of vertex v at
    time n; "full" incidence means every composable pair.
    """
    horizon = len(edge_schedule)
    if len(vertex_schedule) != horizon + 1:
        raise BuildError("vertex schedule must cover times 0..horizon")
    alphabets = [()]
    for edges in edge_schedule:
        alphabets.append(tuple(Letter(e.label, e.src, e.dst) for e in edges))
    if isinstance(matrices, str) and matrices == "full":
        inc = [FullIncidence() for _ in range(horizon - 1)]
    else:
        per_step = (
            list(matrices)
            if isinstance(matrices, (list, tuple))
            else [matrices] * (horizon - 1)
        )
        inc = []
        for n in range(1, horizon):
            spec = per_step[n - 1]
            if isinstance(spec, str):
                inc.append(
                    _incidence_from_spec(
                        spec,
                        [e.label for e in edge_schedule[n - 1]],
                        [e.label for e in edge_schedule[n]],
                    )
                )
            else:
                inc.append(DenseIncidence(np.asarray(spec, dtype=bool)))
    schedule = GraphSchedule(vertex_schedule, alphabets, inc)
    space_rows = []
    for n in range(horizon + 1):
        row = []
        for v in vertex_schedule[n]:
            s = spaces.get((n, v)) or spaces.get(v)
            if s is None:
                raise BuildError(f"no space declared for vertex {v!r} at time {n}")
            row.append(s)
        space_rows.append(tuple(row))
    maps = [()] + [tuple(e.map for e in edges) for edges in edge_schedule]
    system = SystemSpec(
        schedule=schedule,
        spaces=tuple(space_rows),
        maps=tuple(maps),
        dim=dim,
        provenance=provenance,
    )
    return validate_system(system)


# ---------------------------------------------------------------------------
# ascending systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AscendingSpec:
    """Nested alphabets over one master map family on a fixed space.

    include[n-1] lists the labels active at time n; nesting, map agreement
    and incidence agreement across times then hold by construction.
    `infinite_family` marks truncations of an unbounded family.
    """

    base_maps: Mapping
    include: Sequence[Sequence[str]]
    space: Space = None
    incidence: str = "full"
    dim: int = 1
    infinite_family: bool = False
    tail_rule: object = None

    def validate(self):
        prev = None
        for n, labels in enumerate(self.include, start=1):
            cur = list(labels)
            if len(set(cur)) != len(cur):
                raise BuildError(f"duplicate labels at time {n}")
            for lbl in cur:
                if lbl not in self.base_maps:
                    raise BuildError(f"label {lbl!r} at time {n} not in base family")
            if prev is not None and not set(prev) <= set(cur):
                raise BuildError(
                    f"alphabet at time {n} does not contain time {n - 1};"
                    " nesting violated"
                )
            prev = cur
        if self.incidence != "full":
            raise UnsupportedError(
                "ascending builder currently materializes complete incidence"
            )


def build_ascending(spec: AscendingSpec) -> SystemSpec:
    spec.validate()
    space = spec.space or interval(0.0, 1.0)
    horizon = len(spec.include)
    labels = [list(lbls) for lbls in spec.include]
    schedule = ncifs_schedule(labels)
    maps = [()] + [
        tuple(spec.base_maps[lbl] for lbl in lbls) for lbls in labels
    ]
    spaces = tuple((space,) for _ in range(horizon + 1))
    system = SystemSpec(
        schedule=schedule,
        spaces=spaces,
        maps=tuple(maps),
        dim=spec.dim,
        tail_rule=spec.tail_rule,
        flags=frozenset({"ascending"}),
        provenance="ascending family",
    )
    return validate_system(system)


def autonomous_closure(spec: AscendingSpec, horizon: Optional[int] = None) -> SystemSpec:
    """The time-independent system on the union alphabet.

    Materialized alphabets are nested, so the union is the last include list;
    truncations of unbounded families carry an explicit tail note.
    """
    spec.validate()
    if spec.incidence != "full":
        raise UnsupportedError(
            "closure is defined for iterated-function schedules only"
        )
    union = list(spec.include[-1])
    h = horizon or len(spec.include)
    space = spec.space or interval(0.0, 1.0)
    labels = [union for _ in range(h)]
    schedule = ncifs_schedule(labels)
    maps = [()] + [tuple(spec.base_maps[lbl] for lbl in union)] * h
    system = SystemSpec(
        schedule=schedule,
        spaces=tuple((space,) for _ in range(h + 1)),
        maps=tuple(maps),
        dim=spec.dim,
        tail_rule=spec.tail_rule,
        flags=frozenset({"closure"}),
        provenance="autonomous closure of ascending family",
        notes=(
            ("union alphabet truncated; dimension approaches the closure from"
             " below as the truncation grows",)
            if spec.infinite_family
            else ()
        ),
    )
    return validate_system(system)


# ---------------------------------------------------------------------------
# re-blocking constructions
# ---------------------------------------------------------------------------


def _compose_letter(maps_seq):
    """Single map for a block word; similarity blocks stay similarities."""
    if all(isinstance(p, Similarity) for p in maps_seq):
        dim = maps_seq[0].dim
        ratio = 1.0
        for p in maps_seq:
            ratio *= p.ratio
        # offset of the affine fold phi_1 o ... o phi_k, outermost first
        off = list(maps_seq[-1].offset)
        for p in reversed(maps_seq[:-1]):
            off = [p.ratio * o + po for o, po in zip(off, p.offset)]
        return Similarity(ratio, tuple(off) if dim > 1 else (off[0],), dim=dim)
    return ComposedMap(tuple(maps_seq))


def _block_words(system, start, length):
    """Admissible words covering times start..start+length-1, with maps."""
    sched = system.schedule
    out = []

    def rec(j, prev, labels, parts):
        cand = (
            sched.kept_indices(start) if j == start else sched.followers(j - 1, prev)
        )
        for a in cand:
            lbl = sched.letters(j)[a].label
            mp = system.maps[j][a]
            if j == start + length - 1:
                out.append((tuple(labels) + (lbl,), parts + [mp], a))
            else:
                rec(j + 1, a, labels + [lbl], parts + [mp])

    rec(start, -1, [], [])
    return out


def reblock_one_primitive(system: SystemSpec, cert: PrimitivityCertificate) -> SystemSpec:
    """Uniform blocks of length p: alphabets become block words, incidence the
    final original step; primitivity collapses to connector length one.

    The horizon truncates to the largest whole number of blocks (recorded in
    the result notes).
    """
    if cert.p < 1:
        raise InputError("re-blocking needs a certificate with p >= 1")
    p = cert.p
    sched = system.schedule
    blocks = sched.horizon // p
    if blocks < 2:
        raise ConfigurationError(
            f"horizon {sched.horizon} holds fewer than two blocks of length {p}"
        )
    dropped = sched.horizon - blocks * p
    vertex_sets = [sched.vertex_sets[n * p] for n in range(0, blocks + 1)]
    alphabets = [()]
    maps = [()]
    block_letters = []
    for n in range(1, blocks + 1):
        words = _block_words(system, (n - 1) * p + 1, p)
        letters = []
        row = []
        for labels, parts, last_idx in words:
            word = Word((n - 1) * p + 1, labels)
            first_idx = sched.letter_index(word.start, labels[0])
            letters.append(
                Letter(
                    ".".join(labels),
                    sched.letters(word.start)[first_idx].src,
                    sched.letters(word.end)[last_idx].dst,
                )
            )
            row.append(_compose_letter(parts))
        alphabets.append(tuple(letters))
        maps.append(tuple(row))
        block_letters.append(words)
    incidence = []
    for n in range(1, blocks):
        cur = block_letters[n - 1]
        nxt = block_letters[n]
        step = sched.incidence[n * p]
        keep_all = np.ones(len(sched.letters(n * p + 1)), dtype=bool)
        mat = np.zeros((len(cur), len(nxt)), dtype=bool)
        for i, (_, _, last_idx) in enumerate(cur):
            allowed = step.followers(last_idx, keep_all)
            firsts = np.array(
                [sched.letter_index(n * p + 1, w[0][0]) for w in nxt]
            )
            mat[i] = np.isin(firsts, allowed)
        incidence.append(DenseIncidence(mat))
    schedule = GraphSchedule(vertex_sets, alphabets, incidence)
    spaces = tuple(system.spaces[n * p] for n in range(0, blocks + 1))
    out = SystemSpec(
        schedule=schedule,
        spaces=spaces,
        maps=tuple(maps),
        dim=system.dim,
        declared_distortion=system.declared_distortion,
        tail_rule=system.tail_rule,
        flags=system.flags | frozenset({"reblocked"}),
        provenance=f"{system.provenance} [blocks of {p}]",
        notes=system.notes
        + ((f"dropped {dropped} trailing times short of a full block",) if dropped else ()),
    )
    out = validate_system(out)
    if certify_primitivity(out.schedule, 1) is None and out.schedule.horizon >= 3:
        raise CertificationError(
            "re-blocked system failed the connector check at length one"
        )
    return out


def reblock_pinched(
    system: SystemSpec,
    pinch_times: Sequence[int],
    growth_slope_cap: float = 0.5,
    check_identity: bool = True,
) -> SystemSpec:
    """Blocks cut at pinch times: each pinch must be a single-vertex time with
    complete incidence into the next alphabet; emits an iterated-function
    schedule whose level-n partition equals the original at time pinch_n."""
    sched = system.schedule
    ells = [int(x) for x in pinch_times]
    if any(b <= a for a, b in zip(ells, ells[1:])) or not ells:
        raise InputError("pinch times must be strictly increasing and nonempty")
    if ells[-1] > sched.horizon:
        raise ConfigurationError(
            f"pinch time {ells[-1]} beyond horizon {sched.horizon}"
        )
    for j in ells:
        if len(sched.vertex_sets[j]) != 1:
            raise BuildError(
                f"pinch time {j} has {len(sched.vertex_sets[j])} vertices;"
                " the construction needs a singleton"
            )
        if j < sched.horizon and not sched.step_complete(j):
            raise BuildError(
                f"incidence out of pinch time {j} is not complete; every"
                " letter must follow every letter there"
            )
    vals = []
    prev = 0
    for n, ell in enumerate(ells, start=1):
        vals.append((ell**2 - prev**2) / n)
        prev = ell
    if len(vals) >= 3:
        from .trend import fit_line

        tail = vals[len(vals) // 2 :]
        slope, _, _ = fit_line(range(len(tail)), tail)
        if slope > growth_slope_cap:
            raise BuildError(
                "pinch spacing grows too fast: fitted slope of"
                f" (l_n^2 - l_(n-1)^2)/n is {slope:.3g} > {growth_slope_cap};"
                " the subexponential re-blocking hypothesis fails"
            )
    vertex_sets = [sched.vertex_sets[0]] + [sched.vertex_sets[j] for j in ells]
    alphabets = [()]
    maps = [()]
    prev = 0
    for ell in ells:
        words = _block_words(system, prev + 1, ell - prev)
        letters = []
        row = []
        for labels, parts, last_idx in words:
            word = Word(prev + 1, labels)
            first_idx = sched.letter_index(word.start, labels[0])
            letters.append(
                Letter(
                    ".".join(labels),
                    sched.letters(word.start)[first_idx].src,
                    sched.letters(word.end)[last_idx].dst,
                )
            )
            row.append(_compose_letter(parts))
        alphabets.append(tuple(letters))
        maps.append(tuple(row))
        prev = ell
    incidence = [FullIncidence() for _ in range(len(ells) - 1)]
    schedule = GraphSchedule(vertex_sets, alphabets, incidence)
    spaces = tuple([system.spaces[0]] + [system.spaces[j] for j in ells])
    out = SystemSpec(
        schedule=schedule,
        spaces=spaces,
        maps=tuple(maps),
        dim=system.dim,
        declared_distortion=system.declared_distortion,
        flags=system.flags | frozenset({"pinched"}),
        provenance=f"{system.provenance} [pinched at {ells}]",
    )
    out = validate_system(out)
    if check_identity:
        upto = min(len(ells), 4)
        for n in range(1, upto + 1):
            orig = thermo.partition(system, 1, ells[n - 1], 0.5, "enumerate-exact")
            blocked = thermo.partition(out, 1, n, 0.5, "enumerate-exact")
            if not math.isclose(orig.hi, blocked.hi, rel_tol=1e-12):
                raise BuildError(
                    f"partition identity failed at block {n}:"
                    f" {orig.hi} != {blocked.hi}"
                )
    return out


# ---------------------------------------------------------------------------
# block subsystem with maximizing endpoint pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockSubsystem:
    system: SystemSpec
    ell: int
    p: int
    t: float
    pairs: tuple  # ((a*, b*) labels per block)
    connectors: tuple
    sandwich_constant: float
    blocks: int


def extract_subsystem_g_bounded(
    system: SystemSpec,
    cert: PrimitivityCertificate,
    ell: int,
    t: float,
    provenance: str = "",
) -> BlockSubsystem:
    """Iterated-function subsystem from partition-maximizing block endpoints.

    Per block, keeps the words with the (first, last)-letter pair maximizing
    the restricted partition sum at exponent t, joined by a certificate
    connector; ties break to the lexicographically smallest pair.  Records
    the pressure-sandwich constant K^2 M^p / Q^t.
    """
    p = cert.p
    if ell <= p:
        raise InputError(f"block length must exceed p (got ell={ell}, p={p})")
    sched = system.schedule
    span = ell + p
    if p >= 1:
        blocks = (sched.horizon - 1) // span
    else:
        blocks = sched.horizon // span
    if blocks < 1:
        raise ConfigurationError(
            f"horizon {sched.horizon} too short for one block of span {span}"
        )
    if p >= 1 and cert.Q is None:
        raise CertificationError("certificate lacks connector norms (Q)")

    pairs = []
    chosen_words = []
    for n in range(1, blocks + 1):
        start = (n - 1) * span + 1
        words = _block_words(system, start, ell)
        sums = {}
        for labels, parts, last_idx in words:
            word = Word(start, labels)
            key = (labels[0], labels[-1])
            sums.setdefault(key, []).append(
                compose_norm(word, system, check=False).hi ** t
            )
        best_key = None
        best_val = -1.0
        for key in sorted(sums):
            val = math.fsum(sums[key])
            if val > best_val + 1e-15:
                best_key, best_val = key, val
        pairs.append(best_key)
        chosen_words.append(
            [
                (labels, parts, last_idx)
                for labels, parts, last_idx in words
                if (labels[0], labels[-1]) == best_key
            ]
        )

    # connectors: block n ends with letter b*_n at time n*ell + (n-1)*p
    connectors = []
    for n in range(1, blocks + 1):
        if p == 0:
            connectors.append(None)
            continue
        m = n * ell + (n - 1) * p
        lam_table = cert.connectors.get(m)
        if lam_table is None:
            raise CertificationError(
                f"certificate holds no connectors at time {m}"
            )
        b_star = pairs[n - 1][1]
        if n < blocks:
            target = pairs[n][0]
        else:
            # final block: connect to the smallest kept letter one step past
            nxt = sorted(
                sched.letters(m + p + 1)[i].label
                for i in sched.kept_indices(m + p + 1)
            )
            target = nxt[0]
        lam = lam_table.get((b_star, target))
        if lam is None:
            raise CertificationError(
                f"no connector for pair ({b_star}, {target}) at time {m}"
            )
        connectors.append(lam)

    # assemble the single-vertex block system
    alphabets = [()]
    maps = [()]
    boundary_spaces = []
    vertex_labels = []
    for n in range(1, blocks + 1):
        row_letters = []
        row_maps = []
        lam = connectors[n - 1]
        lam_parts = []
        lam_labels = ()
        if lam is not None:
            lam_labels = lam.letters
            lam_parts = [
                system.map_for(lam.start + k, lbl)
                for k, lbl in enumerate(lam.letters)
            ]
        for labels, parts, last_idx in chosen_words[n - 1]:
            full_labels = labels + tuple(lam_labels)
            row_letters.append(full_labels)
            row_maps.append(_compose_letter(list(parts) + lam_parts))
        alphabets.append((row_letters, row_maps))
        # domain of block n = space at time n*(ell+p) of the terminal vertex
        end_time = n * span
        if lam is not None:
            last_lbl = lam.letters[-1]
            last_idx2 = sched.letter_index(end_time, last_lbl)
        else:
            last_idx2 = sched.letter_index(end_time, chosen_words[n - 1][0][0][-1])
        v = sched.letters(end_time)[last_idx2].dst
        boundary_spaces.append(system.space_for(end_time, v))
        vertex_labels.append(v)

    root_v = None
    first_letter = chosen_words[0][0][0][0]
    root_v = sched.letters(1)[sched.letter_index(1, first_letter)].src
    vertex_sets = [(f"{root_v}@0",)] + [
        (f"{vertex_labels[n - 1]}@{n}",) for n in range(1, blocks + 1)
    ]
    sub_alphabets = [()]
    sub_maps = [()]
    for n in range(1, blocks + 1):
        row_letters, row_maps = alphabets[n]
        sub_alphabets.append(
            tuple(
                Letter(".".join(lbls), vertex_sets[n - 1][0], vertex_sets[n][0])
                for lbls in row_letters
            )
        )
        sub_maps.append(tuple(row_maps))
    incidence = [FullIncidence() for _ in range(blocks - 1)]
    schedule = GraphSchedule(vertex_sets, sub_alphabets, incidence)
    spaces = tuple(
        [(system.space_for(0, root_v),)]
        + [(boundary_spaces[n - 1],) for n in range(1, blocks + 1)]
    )
    sub = SystemSpec(
        schedule=schedule,
        spaces=spaces,
        maps=tuple(sub_maps),
        dim=system.dim,
        declared_distortion=system.declared_distortion,
        flags=frozenset({"block-subsystem"}),
        provenance=provenance or f"{system.provenance} [blocks ell={ell}, p={p}]",
    )
    sub = validate_system(sub)

    k = system.distortion
    m_const = 0.0
    for j in range(1, sched.horizon + 1):
        lo, hi = system.letter_brackets[j]
        m_const = max(m_const, math.fsum(hi[sched.kept[j]] ** t))
    q = cert.Q if cert.Q is not None else 1.0
    sandwich = (k**2) * (m_const**p) / (q**t)
    return BlockSubsystem(
        system=sub,
        ell=ell,
        p=p,
        t=t,
        pairs=tuple(pairs),
        connectors=tuple(c for c in connectors if c is not None),
        sandwich_constant=sandwich,
        blocks=blocks,
    )


# ---------------------------------------------------------------------------
# planar pole-decay model (inverse branches near poles)
# ---------------------------------------------------------------------------


def gaussian_lattice_poles(r_min: float = 3.0, r_max: float = 10.0):
    """Moduli |b| of unit-lattice points in the annulus r_min <= |b| <= r_max."""
    cap = int(math.ceil(r_max)) + 1
    mods = []
    for a in range(-cap, cap + 1):
        for b in range(-cap, cap + 1):
            m = math.hypot(a, b)
            if r_min <= m <= r_max and (a, b) != (0, 0):
                mods.append(m)
    mods.sort()
    return np.array(mods)


@dataclass(frozen=True)
class PoleSelection:
    t: float
    feasible: bool
    n_t: Optional[int]
    partial_sum: float
    target: float
    reason: str = ""


@dataclass(frozen=True)
class EllipticModelReport:
    q: int
    threshold: float
    comparability: float
    norm_const: float
    selections: tuple
    growth_checks: tuple  # (t, ((n, Z_n, 2**n), ...), ok)
    system: Optional[SystemSpec]


def _pack_disks(radii, space_radius=1.0):
    """Greedy centers for disjoint disks inside the unit-radius space."""
    order = np.argsort(-np.asarray(radii))
    placed = []
    centers = [None] * len(radii)
    step = max(min(radii) / 2.0, 1e-3)
    for idx in order:
        r = radii[idx]
        done = False
        rad = 0.0
        while rad + r <= space_radius + 1e-12 and not done:
            k_max = max(1, int(math.ceil(2 * math.pi * max(rad, step) / step)))
            for k in range(k_max):
                ang = 2 * math.pi * k / k_max
                cx, cy = rad * math.cos(ang), rad * math.sin(ang)
                if math.hypot(cx, cy) + r > space_radius:
                    continue
                if all(
                    math.hypot(cx - px, cy - py) >= r + pr
                    for (px, py, pr) in placed
                ):
                    placed.append((cx, cy, r))
                    centers[idx] = (cx, cy)
                    done = True
                    break
            rad += step
        if not done:
            raise BuildError(
                "could not pack the model images disjointly; shrink the norm"
                " constant or the pole set"
            )
    return centers


def elliptic_lower_bound(
    q: int,
    pole_norm_samples=None,
    comparability_K: float = 1.0,
    Q_const: float = 1.0,
    t_grid: Sequence[float] = (1.0, 1.2),
    n_check: int = 5,
    horizon: int = 6,
    build: bool = True,
) -> EllipticModelReport:
    """Dimension lower-bound machinery for affine perturbations near poles.

    The decay law |D phi_b| ~ Q_const * |b|^-((q+1)/q) makes the single-time
    sums comparable to sum |b|^(-t (q+1)/q) over a planar lattice, which
    converges exactly when t exceeds 2q/(q+1).  For each sub-threshold t the
    smallest pole set whose partial sum reaches 2 K^2 is recorded (N_t), and
    the instantiated model's partition values are checked against 2^n.
    """
    if q < 1:
        raise InputError("pole multiplicity q must be >= 1")
    threshold = 2 * q / (q + 1)
    if pole_norm_samples is None:
        pole_norm_samples = gaussian_lattice_poles()
    mods = np.sort(np.asarray(pole_norm_samples, dtype=float))
    if mods.size and mods[0] <= 0:
        raise InputError("pole moduli must be positive")
    expo = (q + 1) / q
    target = 2.0 * comparability_K**2

    selections = []
    growth_checks = []
    model = None
    for t in t_grid:
        if t >= threshold:
            selections.append(
                PoleSelection(
                    t, False, None, 0.0, target,
                    f"t >= divergence threshold {threshold:.6g}; the lattice"
                    " sum diverges there and no finite certificate is needed",
                )
            )
            continue
        terms = mods ** (-t * expo)
        csum = np.cumsum(terms)
        hit = np.flatnonzero(csum >= target)
        if hit.size == 0:
            selections.append(
                PoleSelection(
                    t, False, None, float(csum[-1]) if csum.size else 0.0,
                    target, "declared lattice region too small",
                )
            )
            continue
        n_t = int(hit[0]) + 1
        selections.append(PoleSelection(t, True, n_t, float(csum[n_t - 1]), target))
        if not build:
            continue
        chosen = mods[:n_t]
        ratios = Q_const * chosen ** (-expo)
        if ratios.max() >= 1.0:
            raise BuildError(
                f"norm constant {Q_const} breaks contraction at |b|={chosen[0]}"
            )
        centers = _pack_disks(list(ratios))
        labels = [f"b{k}" for k in range(n_t)]
        sched = ncifs_schedule([labels] * horizon)
        row = tuple(
            Similarity(float(r), (cx, cy), dim=2)
            for r, (cx, cy) in zip(ratios, centers)
        )
        maps = [()] + [row] * horizon
        spaces = tuple((disk(0.0, 0.0, 1.0),) for _ in range(horizon + 1))
        model = SystemSpec(
            schedule=sched,
            spaces=spaces,
            maps=tuple(maps),
            dim=2,
            declared_distortion=comparability_K,
            tail_rule=PSeriesTail(expo, lattice_dim=2),
            provenance=f"pole-decay model q={q}, t={t}",
        )
        model = validate_system(model)
        checks = []
        ok = True
        for n in range(1, n_check + 1):
            z = thermo.partition(model, 1, n, t, "matrix-exact").value
            good = z >= 2.0**n
            ok = ok and good
            checks.append((n, z, 2.0**n))
        growth_checks.append((t, tuple(checks), ok))
    return EllipticModelReport(
        q=q,
        threshold=threshold,
        comparability=comparability_K,
        norm_const=Q_const,
        selections=tuple(selections),
        growth_checks=tuple(growth_checks),
        system=model,
    )
