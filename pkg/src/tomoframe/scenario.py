"""Scenario files: JSON descriptions of a tomography run.

A scenario is one JSON object:

    {
      "kind": "qubit" | "nqubit" | "qudit" | "phase" | "spin",
      "state": { ... },
      "quorum": { ... },
      "sampling": {"shots_per_setting": N, "seed": S},
      "output": {"path": "report.json", "format": "json" | "csv"}
    }

``sampling`` and ``output`` are optional; without sampling the run uses
exact probabilities. Complex matrices are written as nested [re, im]
pairs, row major.

State specs (availability depends on kind):

    {"name": "zero"|"one"|"plus"|"minus"|"plus_i"|"minus_i"|"mixed"}   qubit
    {"name": "bell"|"ghz"|"mixed"}                                     nqubit
    {"name": "werner", "visibility": 0.8}                              nqubit
    {"name": "mixed"}                                                  qudit/phase
    {"name": "highest"|"mixed"}                                        spin
    {"bloch": [x, y, z]}                                               qubit
    {"number": n}                                                      phase
    {"weights": [w_0, ..., w_s]}                                       phase
    {"matrix": [[[re, im], ...], ...]}                                 any
    {"random": {"seed": 7, "rank": 2}}                                 any

Quorum specs:

    qubit:  {"design": "tetrahedron"} or {"directions": [[x, y, z], ...]}
    nqubit: as qubit, with top-level "qubits": M
    qudit:  {"name": "qutrit-sic"} or {"projectors": [matrix, ...]},
            with top-level "dim": D
    phase:  implied by top-level "s" and optional "theta0"
    spin:   optional {"polar_angles": [...], "jitter_seed": 0},
            with top-level "two_s" (or half-integer "s")
"""

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ScenarioError
from .phase import phase_states
from .qudit import (
    product_quorum,
    projector_quorum,
    qubit_design_quorum,
    qutrit_sic_quorum,
)
from .sampling import ShotPlan
from .spin import build_spin_quorum
from .states import (
    bell_state,
    computational_state,
    ghz_state,
    pure_state,
    random_density_matrix,
    require_density_matrix,
    werner_state,
)

_QUBIT_KETS = {
    "zero": np.array([1, 0], dtype=complex),
    "one": np.array([0, 1], dtype=complex),
    "plus": np.array([1, 1], dtype=complex),
    "minus": np.array([1, -1], dtype=complex),
    "plus_i": np.array([1, 1j], dtype=complex),
    "minus_i": np.array([1, -1j], dtype=complex),
}


@dataclass
class Scenario:
    kind: str
    raw: dict
    state: Optional[np.ndarray]
    quorum: object
    plan: Optional[ShotPlan]
    output_path: Optional[str]
    output_format: str
    seed: Optional[int]
    scheme: dict

    @property
    def settings(self):
        if self.kind == "phase":
            return self.quorum.dim
        return self.quorum.k


def _fail(path, message):
    raise ScenarioError(f"{path}: {message}")


def _require_mapping(obj, path):
    if not isinstance(obj, dict):
        _fail(path, f"expected an object, got {type(obj).__name__}")
    return obj


def _require_int(obj, path, minimum=None):
    if isinstance(obj, bool) or not isinstance(obj, int):
        _fail(path, f"expected an integer, got {obj!r}")
    if minimum is not None and obj < minimum:
        _fail(path, f"must be >= {minimum}, got {obj}")
    return obj


def _require_number(obj, path):
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        _fail(path, f"expected a number, got {obj!r}")
    return float(obj)


def matrix_from_pairs(obj, path):
    """Parse a row-major nested list of [re, im] pairs into a complex matrix."""
    if not isinstance(obj, list) or not obj:
        _fail(path, "expected a non-empty list of rows")
    rows = []
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != len(obj):
            _fail(f"{path}[{i}]", f"expected {len(obj)} entries (square matrix)")
        entries = []
        for j, pair in enumerate(row):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in pair)
            ):
                _fail(f"{path}[{i}][{j}]", f"expected an [re, im] pair, got {pair!r}")
            entries.append(complex(pair[0], pair[1]))
        rows.append(entries)
    return np.array(rows, dtype=complex)


def matrix_to_pairs(matrix):
    """Serialize a complex matrix as row-major nested [re, im] pairs."""
    return [
        [[float(v.real), float(v.imag)] for v in row] for row in np.asarray(matrix)
    ]


def load_scenario(path):
    """Parse a scenario file into a raw dict; JSON errors carry line/column."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as err:
        raise ScenarioError(f"{path}: cannot read scenario: {err}") from err
    except json.JSONDecodeError as err:
        raise ScenarioError(
            f"{path}:{err.lineno}:{err.colno}: invalid JSON: {err.msg}"
        ) from err
    return _require_mapping(raw, str(path))


def _two_s_from_raw(raw):
    if "two_s" in raw:
        return _require_int(raw["two_s"], "two_s", minimum=0)
    if "s" in raw:
        s = _require_number(raw["s"], "s")
        two_s = round(2 * s)
        if abs(2 * s - two_s) > 1e-12:
            _fail("s", f"must be a half-integer, got {s}")
        if two_s < 0:
            _fail("s", f"must be nonnegative, got {s}")
        return int(two_s)
    _fail("two_s", "spin scenarios need 'two_s' (or half-integer 's')")


def _build_quorum(kind, raw):
    if kind in ("qubit", "nqubit"):
        spec = _require_mapping(raw.get("quorum", {"design": "tetrahedron"}), "quorum")
        if "design" in spec:
            base = qubit_design_quorum(str(spec["design"]))
            name = str(spec["design"])
        elif "directions" in spec:
            base = qubit_design_quorum(np.asarray(spec["directions"], dtype=float))
            name = "custom"
        else:
            _fail("quorum", "needs 'design' or 'directions'")
        if kind == "qubit":
            return base, {"kind": kind, "design": name, "settings": base.k}
        m = _require_int(raw.get("qubits"), "qubits", minimum=1)
        quorum = product_quorum(base, m)
        return quorum, {
            "kind": kind,
            "design": name,
            "qubits": m,
            "settings": quorum.k,
        }
    if kind == "qudit":
        dim = _require_int(raw.get("dim"), "dim", minimum=2)
        spec = _require_mapping(raw.get("quorum"), "quorum")
        if spec.get("name") == "qutrit-sic":
            if dim != 3:
                _fail("quorum.name", "qutrit-sic requires dim = 3")
            quorum = qutrit_sic_quorum()
            name = "qutrit-sic"
        elif "projectors" in spec:
            mats = spec["projectors"]
            if not isinstance(mats, list) or not mats:
                _fail("quorum.projectors", "expected a non-empty list of matrices")
            parsed = [
                matrix_from_pairs(m, f"quorum.projectors[{i}]")
                for i, m in enumerate(mats)
            ]
            if any(p.shape != (dim, dim) for p in parsed):
                _fail("quorum.projectors", f"all matrices must be {dim}x{dim}")
            quorum = projector_quorum(np.stack(parsed))
            name = "custom"
        else:
            _fail("quorum", "needs 'name' or 'projectors'")
        return quorum, {"kind": kind, "design": name, "dim": dim, "settings": quorum.k}
    if kind == "phase":
        s = _require_int(raw.get("s"), "s", minimum=0)
        theta0 = _require_number(raw.get("theta0", 0.0), "theta0")
        basis = phase_states(s, theta0)
        return basis, {"kind": kind, "s": s, "theta0": theta0, "settings": basis.dim}
    if kind == "spin":
        two_s = _two_s_from_raw(raw)
        spec = _require_mapping(raw.get("quorum", {}), "quorum")
        polar = spec.get("polar_angles")
        jitter_seed = _require_int(spec.get("jitter_seed", 0), "quorum.jitter_seed")
        quorum = build_spin_quorum(two_s, polar_scheme=polar, jitter_seed=jitter_seed)
        return quorum, {
            "kind": kind,
            "two_s": two_s,
            "polar_angles": [float(a) for a in quorum.polar_angles],
            "jitter_seed": jitter_seed,
            "jitter_attempts": quorum.jitter_attempts,
            "settings": quorum.k,
        }
    _fail("kind", f"unknown kind {kind!r}")


def _state_dim(quorum):
    return quorum.dim


def _named_state(kind, name, spec, dim, quorum):
    if kind == "qubit" and name in _QUBIT_KETS:
        return pure_state(_QUBIT_KETS[name])
    if name == "mixed":
        return np.eye(dim, dtype=complex) / dim
    if kind == "nqubit":
        if name == "bell":
            if dim != 4:
                _fail("state.name", "bell requires qubits = 2")
            return bell_state()
        if name == "ghz":
            return ghz_state(int(np.log2(dim)))
        if name == "werner":
            if dim != 4:
                _fail("state.name", "werner requires qubits = 2")
            visibility = _require_number(
                spec.get("visibility", 1.0), "state.visibility"
            )
            return werner_state(visibility)
    if kind == "spin" and name == "highest":
        return computational_state(dim, 0)
    _fail("state.name", f"unknown state {name!r} for kind {kind!r}")


def _build_state(kind, raw, quorum):
    spec = _require_mapping(raw.get("state"), "state")
    dim = _state_dim(quorum)
    if "name" in spec:
        return _named_state(kind, str(spec["name"]), spec, dim, quorum)
    if "bloch" in spec:
        if kind != "qubit":
            _fail("state.bloch", "Bloch vectors are for qubit scenarios")
        s = np.asarray(spec["bloch"], dtype=float)
        if s.shape != (3,):
            _fail("state.bloch", f"expected 3 numbers, got shape {s.shape}")
        if np.linalg.norm(s) > 1.0 + 1e-9:
            _fail("state.bloch", f"|S| = {np.linalg.norm(s):.6f} exceeds 1")
        from .qudit import PAULIS

        return 0.5 * (np.eye(2, dtype=complex) + np.einsum("j,jab->ab", s, PAULIS))
    if "number" in spec:
        if kind != "phase":
            _fail("state.number", "number states are for phase scenarios")
        n = _require_int(spec["number"], "state.number", minimum=0)
        if n >= dim:
            _fail("state.number", f"must be < {dim}, got {n}")
        return computational_state(dim, n)
    if "weights" in spec:
        if kind != "phase":
            _fail("state.weights", "grid weights are for phase scenarios")
        w = np.asarray(spec["weights"], dtype=float)
        if w.shape != (dim,):
            _fail("state.weights", f"expected {dim} weights, got {w.shape}")
        if w.min() < 0 or abs(w.sum() - 1.0) > 1e-9:
            _fail("state.weights", "weights must be nonnegative and sum to 1")
        return np.einsum("m,mi,mj->ij", w, quorum.states, quorum.states.conj())
    if "matrix" in spec:
        matrix = matrix_from_pairs(spec["matrix"], "state.matrix")
        if matrix.shape != (dim, dim):
            _fail("state.matrix", f"expected {dim}x{dim}, got {matrix.shape}")
        return require_density_matrix(matrix, "state.matrix")
    if "random" in spec:
        rnd = _require_mapping(spec["random"], "state.random")
        seed = _require_int(rnd.get("seed"), "state.random.seed", minimum=0)
        rank = rnd.get("rank")
        if rank is not None:
            rank = _require_int(rank, "state.random.rank", minimum=1)
        rng = np.random.default_rng(seed)
        return random_density_matrix(dim, rng, rank=rank)
    _fail("state", "needs one of name, bloch, number, weights, matrix, random")


def build_scenario(raw, seed_override=None, require_state=True):
    """Validate a raw scenario dict and construct its state, quorum, and plan."""
    raw = _require_mapping(raw, "scenario")
    kind = raw.get("kind")
    if kind not in ("qubit", "nqubit", "qudit", "phase", "spin"):
        _fail("kind", f"expected one of qubit|nqubit|qudit|phase|spin, got {kind!r}")
    quorum, scheme = _build_quorum(kind, raw)
    state = None
    if require_state or "state" in raw:
        state = _build_state(kind, raw, quorum)
    plan = None
    seed = seed_override
    if "sampling" in raw:
        spec = _require_mapping(raw["sampling"], "sampling")
        shots = _require_int(spec.get("shots_per_setting"), "sampling.shots_per_setting", minimum=1)
        if seed is None:
            seed = _require_int(spec.get("seed"), "sampling.seed", minimum=0)
        settings = quorum.dim if kind == "phase" else quorum.k
        plan = ShotPlan(shots_per_setting=shots, seed=seed, settings=settings)
    output_path = None
    output_format = "json"
    if "output" in raw:
        spec = _require_mapping(raw["output"], "output")
        if "path" in spec:
            output_path = str(spec["path"])
        output_format = str(spec.get("format", "json"))
        if output_format not in ("json", "csv"):
            _fail("output.format", f"expected json or csv, got {output_format!r}")
    return Scenario(
        kind=kind,
        raw=raw,
        state=state,
        quorum=quorum,
        plan=plan,
        output_path=output_path,
        output_format=output_format,
        seed=seed,
        scheme=scheme,
    )
