"""JSON config schema (versioned) and its translation into systems.

Schedules are diffable data: matrices appear as explicit 0/1 arrays, as
"full"/"identity", or as a named rule with parameters; per-time rows accept
an explicit list-per-time, a {"cycle": [...]} pattern, or the generator
forms documented in the README.  Validation errors carry the offending
field path for the CLI's parse exit code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bundled import BUNDLED, bundled_system
from .errors import SchemaError
from .maps import MoebiusInverse, Similarity, interval
from .systems import (
    AscendingSpec,
    EdgeSpec,
    build_ascending,
    build_cf_system,
    build_gdms,
    build_similarity_system,
    elliptic_lower_bound,
)

SCHEMA_VERSION = 1

_PARAM_DEFAULTS = {
    "t": 0.5,
    "t_bracket": [0.0, None],  # None -> ambient dimension
    "n_max": None,  # None -> horizon
    "tol": 1e-4,
    "window": None,
    "depth": 10,
    "max_points": 4096,
    "seed": 0,
    "strategy": "auto",
    "budget": 2_000_000,
    "scale_window": [2.0**-14, 2.0**-4],
    "t_grid": 21,
    "ell": 3,
    "pinch_times": None,
    "p_max": 4,
    "mode": "blocks",
    "sample_strategy": "exhaustive",
}


@dataclass(frozen=True)
class RunConfig:
    system_spec: dict
    params: dict
    output_dir: str
    source: str

    def param(self, name):
        return self.params.get(name, _PARAM_DEFAULTS.get(name))


def _fail(path, msg):
    raise SchemaError(path, msg)


def _expect(cond, path, msg):
    if not cond:
        _fail(path, msg)


def _rows(spec, horizon, path, kind="number"):
    """Per-time rows from an explicit list, a cycle, or a generator form."""
    if isinstance(spec, list):
        _expect(len(spec) == horizon, path, f"need {horizon} rows, got {len(spec)}")
        return [list(r) for r in spec]
    if isinstance(spec, dict) and "cycle" in spec:
        cyc = spec["cycle"]
        _expect(
            isinstance(cyc, list) and cyc, f"{path}.cycle", "nonempty list required"
        )
        return [list(cyc[(n - 1) % len(cyc)]) for n in range(1, horizon + 1)]
    if isinstance(spec, dict) and "powers" in spec:
        pw = spec["powers"]
        rb = pw.get("ratio_base")
        cb = pw.get("count_base")
        _expect(
            isinstance(rb, (int, float)) and 0 < rb < 1,
            f"{path}.powers.ratio_base",
            "ratio_base in (0, 1) required",
        )
        _expect(
            isinstance(cb, int) and cb >= 1,
            f"{path}.powers.count_base",
            "integer count_base >= 1 required",
        )
        _expect(
            cb**horizon <= 2**22,
            f"{path}.powers",
            f"count_base**horizon = {cb}**{horizon} letters would not fit in"
            " memory; lower the horizon",
        )
        return [[float(rb) ** n] * (cb**n) for n in range(1, horizon + 1)]
    if isinstance(spec, dict) and spec.get("packed"):
        return "packed"
    _fail(path, "expected a list of rows, {'cycle': ...}, {'powers': ...} or {'packed': true}")


def _matrices(spec, horizon, path):
    if spec in ("full", "identity"):
        return spec
    if isinstance(spec, dict) and "rule" in spec:
        _expect(spec["rule"] == "banded", f"{path}.rule", "known rules: banded")
        offs = spec.get("offsets")
        _expect(
            isinstance(offs, list) and all(isinstance(o, int) for o in offs),
            f"{path}.offsets",
            "list of integer offsets required",
        )
        return ("banded", tuple(offs))
    if isinstance(spec, list):
        if spec and isinstance(spec[0], list) and spec[0] and isinstance(spec[0][0], list):
            _expect(
                len(spec) == horizon - 1,
                path,
                f"need {horizon - 1} per-step matrices, got {len(spec)}",
            )
            return [np.asarray(m, dtype=bool) for m in spec]
        return np.asarray(spec, dtype=bool)  # one matrix reused per step
    _fail(path, "expected 'full', 'identity', a 0/1 array, arrays per step, or a rule")


def _expand_matrices(mat, counts, horizon):
    """Translate the parsed matrix spec into the builder's per-step form."""
    from .symbolic import banded_incidence

    if isinstance(mat, str):
        return mat  # "full" | "identity"
    if isinstance(mat, tuple) and mat[0] == "banded":
        return [
            banded_incidence(counts[n - 1], counts[n], mat[1])._mat
            for n in range(1, horizon)
        ]
    if isinstance(mat, np.ndarray):
        return [mat] * (horizon - 1)
    return mat


def _build_similarity(spec, path):
    horizon = spec.get("horizon")
    _expect(isinstance(horizon, int) and horizon >= 2, f"{path}.horizon", "integer horizon >= 2 required")
    ratios = _rows(spec.get("ratios"), horizon, f"{path}.ratios")
    _expect(ratios != "packed", f"{path}.ratios", "ratios cannot be 'packed'")
    offsets_spec = spec.get("offsets", {"packed": True})
    offsets = _rows(offsets_spec, horizon, f"{path}.offsets")
    if offsets == "packed":
        offsets = []
        for row in ratios:
            k = len(row)
            offsets.append([j / k for j in range(k)])
    for n, (rr, oo) in enumerate(zip(ratios, offsets), start=1):
        _expect(
            len(rr) == len(oo),
            f"{path}.offsets[{n - 1}]",
            f"row length {len(oo)} != ratios row length {len(rr)}",
        )
    counts = [len(r) for r in ratios]
    mat = _expand_matrices(
        _matrices(spec.get("matrices", "full"), horizon, f"{path}.matrices"),
        counts,
        horizon,
    )
    return build_similarity_system(ratios, offsets, mat)


def _build_cf(spec, path):
    horizon = spec.get("horizon")
    _expect(isinstance(horizon, int) and horizon >= 2, f"{path}.horizon", "integer horizon >= 2 required")
    digits = spec.get("digits")
    if isinstance(digits, dict) and "prefix" in digits:
        prefix = digits.get("prefix", [])
        then = digits.get("then")
        _expect(isinstance(then, list), f"{path}.digits.then", "constant tail list required")
        rows = [list(r) for r in prefix] + [list(then)] * (horizon - len(prefix))
    elif isinstance(digits, list) and digits and not isinstance(digits[0], list):
        rows = [list(digits)] * horizon
    else:
        rows = _rows(digits, horizon, f"{path}.digits")
        _expect(rows != "packed", f"{path}.digits", "digit rows required")
    counts = [len(r) for r in rows]
    mat = _expand_matrices(
        _matrices(spec.get("matrices", "full"), horizon, f"{path}.matrices"),
        counts,
        horizon,
    )
    return build_cf_system(rows, mat)


def _build_gdms_cfg(spec, path):
    horizon = spec.get("horizon")
    _expect(isinstance(horizon, int) and horizon >= 2, f"{path}.horizon", "integer horizon >= 2 required")
    verts = spec.get("vertices")
    if isinstance(verts, dict) and "cycle" in verts:
        cyc = verts["cycle"]
        vertex_schedule = [list(cyc[n % len(cyc)]) for n in range(horizon + 1)]
    else:
        _expect(
            isinstance(verts, list) and len(verts) == horizon + 1,
            f"{path}.vertices",
            f"need {horizon + 1} vertex rows or a cycle",
        )
        vertex_schedule = [list(v) for v in verts]
    spaces_spec = spec.get("spaces")
    _expect(isinstance(spaces_spec, dict), f"{path}.spaces", "vertex -> [lo, hi] table required")
    spaces = {}
    for v, pair in spaces_spec.items():
        _expect(
            isinstance(pair, list) and len(pair) == 2 and pair[0] < pair[1],
            f"{path}.spaces.{v}",
            "[lo, hi] with lo < hi required",
        )
        spaces[v] = interval(*pair)
    edges_spec = spec.get("edges")
    if isinstance(edges_spec, dict) and "cycle" in edges_spec:
        cyc = edges_spec["cycle"]
        edge_rows = [cyc[(n - 1) % len(cyc)] for n in range(1, horizon + 1)]
    else:
        _expect(
            isinstance(edges_spec, list) and len(edges_spec) == horizon,
            f"{path}.edges",
            f"need {horizon} edge rows or a cycle",
        )
        edge_rows = edges_spec
    edge_schedule = []
    for n, row in enumerate(edge_rows, start=1):
        parsed = []
        for k, e in enumerate(row):
            epath = f"{path}.edges[{n - 1}][{k}]"
            for fld in ("label", "src", "dst", "ratio", "offset"):
                _expect(fld in e, epath, f"missing field {fld!r}")
            parsed.append(
                EdgeSpec(
                    str(e["label"]), str(e["src"]), str(e["dst"]),
                    Similarity(float(e["ratio"]), (float(e["offset"]),)),
                )
            )
        edge_schedule.append(parsed)
    mats = spec.get("matrices", "full")
    if mats != "full":
        mats = _matrices(mats, horizon, f"{path}.matrices")
        counts = [len(r) for r in edge_schedule]
        mats = _expand_matrices(mats, counts, horizon)
    return build_gdms(vertex_schedule, edge_schedule, spaces, mats)


def _build_ascending(spec, path):
    horizon = spec.get("horizon")
    _expect(isinstance(horizon, int) and horizon >= 2, f"{path}.horizon", "integer horizon >= 2 required")
    family = spec.get("family")
    _expect(family in ("cf", "similarity"), f"{path}.family", "family must be cf or similarity")
    base_spec = spec.get("base")
    _expect(isinstance(base_spec, dict) and base_spec, f"{path}.base", "label -> map table required")
    base = {}
    for lbl, v in base_spec.items():
        if family == "cf":
            base[lbl] = MoebiusInverse(float(v))
        else:
            _expect(
                isinstance(v, dict) and "ratio" in v and "offset" in v,
                f"{path}.base.{lbl}",
                "need ratio and offset",
            )
            base[lbl] = Similarity(float(v["ratio"]), (float(v["offset"]),))
    inc = spec.get("include")
    if isinstance(inc, dict) and "prefix" in inc:
        prefix = [list(r) for r in inc.get("prefix", [])]
        then = inc.get("then")
        _expect(isinstance(then, list), f"{path}.include.then", "constant tail required")
        include = prefix + [list(then)] * (horizon - len(prefix))
    else:
        _expect(
            isinstance(inc, list) and len(inc) == horizon,
            f"{path}.include",
            f"need {horizon} include rows or prefix/then",
        )
        include = [list(r) for r in inc]
    return build_ascending(
        AscendingSpec(
            base_maps=base,
            include=include,
            infinite_family=bool(spec.get("infinite_family", False)),
        )
    )


def _build_elliptic(spec, path):
    q = spec.get("q")
    _expect(isinstance(q, int) and q >= 1, f"{path}.q", "integer q >= 1 required")
    lat = spec.get("lattice", {})
    r_min = float(lat.get("r_min", 3.0))
    r_max = float(lat.get("r_max", 10.0))
    _expect(0 < r_min < r_max, f"{path}.lattice", "need 0 < r_min < r_max")
    from .systems import gaussian_lattice_poles

    report = elliptic_lower_bound(
        q,
        pole_norm_samples=gaussian_lattice_poles(r_min, r_max),
        comparability_K=float(spec.get("comparability", 1.0)),
        Q_const=float(spec.get("norm_const", 1.0)),
        t_grid=(float(spec.get("t_star", 1.2)),),
        horizon=int(spec.get("horizon", 6)),
        build=True,
    )
    _expect(report.system is not None, path, "model instantiation found no feasible pole set")
    return report.system


_BUILDERS = {
    "similarity": _build_similarity,
    "cf": _build_cf,
    "gdms": _build_gdms_cfg,
    "ascending": _build_ascending,
    "elliptic_model": _build_elliptic,
}


def build_from_spec(spec: dict, path: str = "system"):
    _expect(isinstance(spec, dict), path, "system spec must be an object")
    kind = spec.get("kind")
    if kind == "bundled":
        name = spec.get("name")
        _expect(name in BUNDLED, f"{path}.name", f"unknown bundled name {name!r}")
        return bundled_system(name, **spec.get("overrides", {}))
    _expect(
        kind in _BUILDERS,
        f"{path}.kind",
        f"unknown kind {kind!r}; choose from {sorted(_BUILDERS) + ['bundled']}",
    )
    return _BUILDERS[kind](spec, path)


def load_config(source):
    """Parse a config file path or a bundled system name.

    Bundled names resolve to the packaged config files, so their documented
    parameter defaults ride along.  Returns (RunConfig, SystemSpec).  Schema
    violations raise SchemaError with the field path; semantic violations
    propagate the builder errors.
    """
    src = str(source)
    if src in BUNDLED:
        packaged = Path(__file__).parent / "configs" / f"{src}.json"
        if packaged.exists():
            cfg, system = load_config(str(packaged))
            return RunConfig(cfg.system_spec, cfg.params, cfg.output_dir, src), system
        cfg = RunConfig({"kind": "bundled", "name": src}, {}, "out", src)
        return cfg, bundled_system(src)
    p = Path(src)
    if not p.exists():
        _fail("(source)", f"{src!r} is neither a bundled name nor a file")
    try:
        raw = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        _fail("(file)", f"invalid JSON: {exc}")
    _expect(isinstance(raw, dict), "(root)", "config must be a JSON object")
    version = raw.get("schema_version")
    _expect(
        version == SCHEMA_VERSION,
        "schema_version",
        f"expected {SCHEMA_VERSION}, got {version!r}",
    )
    _expect("system" in raw, "system", "missing system spec")
    params = raw.get("params", {})
    _expect(isinstance(params, dict), "params", "params must be an object")
    for key, val in params.items():
        _expect(key in _PARAM_DEFAULTS, f"params.{key}", "unknown parameter")
        if key in ("tol",):
            _expect(
                isinstance(val, (int, float)) and val > 0,
                f"params.{key}",
                "positive number required",
            )
    out_dir = raw.get("output_dir", "out")
    system = build_from_spec(raw["system"])
    window = params.get("window")
    if window is not None:
        _expect(
            isinstance(window, list)
            and len(window) == 2
            and 1 <= window[0] < window[1] <= system.horizon,
            "params.window",
            f"window must sit inside [1, horizon={system.horizon}]",
        )
    n_max = params.get("n_max")
    if n_max is not None:
        _expect(
            isinstance(n_max, int) and 2 <= n_max <= system.horizon,
            "params.n_max",
            f"n_max must sit in [2, horizon={system.horizon}]",
        )
    cfg = RunConfig(raw["system"], params, out_dir, src)
    return cfg, system
