"""Scenario files: a strict YAML key-value schema.

Unknown keys are errors, not warnings, and every validation message names
the offending field, because a silently misspelled physics parameter is
the worst failure mode a simulation front end can have. The full schema
is documented in the repository README.

Complex numbers are written either as a plain number or as a two-element
list ``[re, im]``.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from .core import (
    CouplingParams,
    TruncationTooSmallError,
    TwoModeState,
    ZeroVectorError,
    make_product_state,
)

_INITIAL_KINDS = ("fock", "qubit", "amplitudes", "coherent")
_SCHEDULE_KINDS = ("time_grid", "exchange_scan", "verify")
_OUTPUTS_BY_SCHEDULE = {
    "time_grid": ("number_distribution", "reduced_density", "fidelity", "transfer_profile", "report"),
    "exchange_scan": ("report",),
    "verify": ("report",),
}
_DEFAULT_TAIL_THRESHOLD = 1e-10


class ScenarioError(ValueError):
    """Invalid scenario content; ``field`` is the offending key path."""

    def __init__(self, field: str, message: str):
        super().__init__(f'scenario field "{field}": {message}')
        self.field = field


@dataclass(frozen=True)
class InitialSpec:
    kind: str
    n: int | None = None
    c0: complex | None = None
    cn: complex | None = None
    values: tuple[complex, ...] | None = None
    alpha: complex | None = None
    truncation: int | None = None

    @property
    def support(self) -> int:
        """Highest mode-1 Fock index the initial state can occupy."""
        if self.kind == "fock":
            return self.n
        if self.kind == "qubit":
            return self.n
        if self.kind == "amplitudes":
            return len(self.values) - 1
        return self.truncation


@dataclass(frozen=True)
class ScheduleSpec:
    kind: str
    t_start: float | None = None
    t_end: float | None = None
    steps: int | None = None
    k_max: int | None = None
    suite: str | None = None


@dataclass(frozen=True)
class Scenario:
    params: CouplingParams
    initial: InitialSpec
    schedule: ScheduleSpec
    outputs: tuple[str, ...]
    n_max: int
    coherent_tail_threshold: float


def load_scenario(path: str | Path) -> Scenario:
    """Parse and validate a scenario file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError("(file)", f"cannot read {path}: {exc}") from exc
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError("(file)", f"not valid YAML: {exc}") from exc
    return parse_scenario(raw)


def parse_scenario(raw: object) -> Scenario:
    top = _as_mapping(raw, "(top level)")
    params = _parse_params(_take(top, "params", "(top level)"))
    initial = _parse_initial(_take(top, "initial", "(top level)"))
    schedule = _parse_schedule(_take(top, "schedule", "(top level)"))
    n_max = None
    if "n_max" in top:
        n_max = _as_int(top.pop("n_max"), "n_max", minimum=0)
    outputs = _parse_outputs(top.pop("outputs", []), schedule.kind)
    threshold = _DEFAULT_TAIL_THRESHOLD
    if "coherent_tail_threshold" in top:
        threshold = _as_number(top.pop("coherent_tail_threshold"), "coherent_tail_threshold")
        if threshold <= 0:
            raise ScenarioError("coherent_tail_threshold", "must be positive")
    _reject_unknown(top, "(top level)")

    if schedule.kind != "verify":
        support = initial.support
        if n_max is None:
            n_max = support  # the user owns the truncation; never auto-raised
        if support > n_max:
            raise ScenarioError(
                "n_max", f"initial state has support on n = {support} but n_max = {n_max}"
            )
    else:
        n_max = n_max if n_max is not None else 0
    return Scenario(
        params=params,
        initial=initial,
        schedule=schedule,
        outputs=outputs,
        n_max=n_max,
        coherent_tail_threshold=threshold,
    )


def build_initial_state(scenario: Scenario) -> tuple[TwoModeState, np.ndarray, float]:
    """Construct the initial product state |phi> (x) |0>.

    Returns ``(state, phi, discarded)`` with ``phi`` the normalized mode-1
    amplitude vector and ``discarded`` the coherent-state tail probability
    dropped by the truncation (zero for the other kinds). A tail above the
    scenario threshold is an error.
    """
    init = scenario.initial
    discarded = 0.0
    if init.kind == "fock":
        phi = np.zeros(init.n + 1, dtype=np.complex128)
        phi[init.n] = 1.0
    elif init.kind == "qubit":
        phi = np.zeros(init.n + 1, dtype=np.complex128)
        phi[0] = init.c0
        phi[init.n] = init.cn
    elif init.kind == "amplitudes":
        phi = np.asarray(init.values, dtype=np.complex128)
    else:
        intensity = abs(init.alpha) ** 2
        weight = math.exp(-intensity)
        kept = 0.0
        phi = np.empty(init.truncation + 1, dtype=np.complex128)
        for n in range(init.truncation + 1):
            phi[n] = init.alpha**n / math.sqrt(math.factorial(n))
            kept += weight
            if n < init.truncation:
                weight *= intensity / (n + 1)
        discarded = max(0.0, 1.0 - kept)
        if discarded > scenario.coherent_tail_threshold:
            raise ScenarioError(
                "initial.truncation",
                f"discarded coherent tail probability {discarded:.6e} exceeds the"
                f" threshold {scenario.coherent_tail_threshold:.6e}; raise the truncation",
            )
    try:
        state = make_product_state(phi, n_max=scenario.n_max)
    except (ZeroVectorError, TruncationTooSmallError) as exc:
        raise ScenarioError("initial", str(exc)) from exc
    total = np.linalg.norm(phi)
    return state, phi / total, discarded


def _parse_params(raw: object) -> CouplingParams:
    mapping = _as_mapping(raw, "params")
    omega1 = _as_number(_take(mapping, "omega1", "params"), "params.omega1")
    omega2 = _as_number(_take(mapping, "omega2", "params"), "params.omega2")
    lam = _as_number(_take(mapping, "lambda", "params"), "params.lambda")
    _reject_unknown(mapping, "params")
    if lam < 0:
        raise ScenarioError("params.lambda", f"must be >= 0, got {lam}")
    try:
        return CouplingParams(omega1=omega1, omega2=omega2, lam=lam)
    except ValueError as exc:
        raise ScenarioError("params", str(exc)) from exc


def _parse_initial(raw: object) -> InitialSpec:
    mapping = _as_mapping(raw, "initial")
    kind = _take(mapping, "kind", "initial")
    if kind not in _INITIAL_KINDS:
        raise ScenarioError("initial.kind", f"must be one of {_INITIAL_KINDS}, got {kind!r}")
    if kind == "fock":
        n = _as_int(_take(mapping, "n", "initial"), "initial.n", minimum=0)
        spec = InitialSpec(kind=kind, n=n)
    elif kind == "qubit":
        c0 = _as_complex(_take(mapping, "c0", "initial"), "initial.c0")
        cn = _as_complex(_take(mapping, "cn", "initial"), "initial.cn")
        n = _as_int(_take(mapping, "n", "initial"), "initial.n", minimum=1)
        if c0 == 0 and cn == 0:
            raise ScenarioError("initial.c0", "c0 and cn cannot both be zero")
        spec = InitialSpec(kind=kind, n=n, c0=c0, cn=cn)
    elif kind == "amplitudes":
        values = _take(mapping, "values", "initial")
        if not isinstance(values, list) or not values:
            raise ScenarioError("initial.values", "must be a nonempty list")
        parsed = tuple(
            _as_complex(v, f"initial.values[{i}]") for i, v in enumerate(values)
        )
        if all(v == 0 for v in parsed):
            raise ScenarioError("initial.values", "all amplitudes are zero")
        spec = InitialSpec(kind=kind, values=parsed)
    else:
        alpha = _as_complex(_take(mapping, "alpha", "initial"), "initial.alpha")
        truncation = _as_int(
            _take(mapping, "truncation", "initial"), "initial.truncation", minimum=0
        )
        spec = InitialSpec(kind=kind, alpha=alpha, truncation=truncation)
    _reject_unknown(mapping, "initial")
    return spec


def _parse_schedule(raw: object) -> ScheduleSpec:
    mapping = _as_mapping(raw, "schedule")
    kind = _take(mapping, "kind", "schedule")
    if kind not in _SCHEDULE_KINDS:
        raise ScenarioError("schedule.kind", f"must be one of {_SCHEDULE_KINDS}, got {kind!r}")
    if kind == "time_grid":
        t_start = _as_number(_take(mapping, "t_start", "schedule"), "schedule.t_start")
        t_end = _as_number(_take(mapping, "t_end", "schedule"), "schedule.t_end")
        steps = _as_int(_take(mapping, "steps", "schedule"), "schedule.steps", minimum=1)
        if t_end < t_start:
            raise ScenarioError("schedule.t_end", f"must be >= t_start = {t_start}, got {t_end}")
        spec = ScheduleSpec(kind=kind, t_start=t_start, t_end=t_end, steps=steps)
    elif kind == "exchange_scan":
        k_max = _as_int(_take(mapping, "k_max", "schedule"), "schedule.k_max", minimum=0)
        spec = ScheduleSpec(kind=kind, k_max=k_max)
    else:
        suite = _take(mapping, "suite", "schedule")
        if not isinstance(suite, str):
            raise ScenarioError("schedule.suite", f"must be a string, got {suite!r}")
        spec = ScheduleSpec(kind=kind, suite=suite)
    _reject_unknown(mapping, "schedule")
    return spec


def _parse_outputs(raw: object, schedule_kind: str) -> tuple[str, ...]:
    if not isinstance(raw, list):
        raise ScenarioError("outputs", f"must be a list, got {raw!r}")
    allowed = _OUTPUTS_BY_SCHEDULE[schedule_kind]
    seen = []
    for i, entry in enumerate(raw):
        if entry not in allowed:
            raise ScenarioError(
                f"outputs[{i}]",
                f"{entry!r} is not available for schedule {schedule_kind!r};"
                f" allowed: {allowed}",
            )
        if entry not in seen:
            seen.append(entry)
    return tuple(seen)


def _as_mapping(raw: object, field: str) -> dict:
    if not isinstance(raw, dict):
        raise ScenarioError(field, f"must be a mapping, got {type(raw).__name__}")
    return dict(raw)


def _take(mapping: dict, key: str, parent: str) -> object:
    if key not in mapping:
        field = key if parent == "(top level)" else f"{parent}.{key}"
        raise ScenarioError(field, "is required")
    return mapping.pop(key)


def _reject_unknown(mapping: dict, parent: str) -> None:
    if mapping:
        key = sorted(mapping)[0]
        field = key if parent == "(top level)" else f"{parent}.{key}"
        raise ScenarioError(field, "is not a recognized key")


def _as_number(raw: object, field: str) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ScenarioError(field, f"must be a number, got {raw!r}")
    value = float(raw)
    if not math.isfinite(value):
        raise ScenarioError(field, f"must be finite, got {raw!r}")
    return value


def _as_int(raw: object, field: str, minimum: int) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ScenarioError(field, f"must be an integer, got {raw!r}")
    if raw < minimum:
        raise ScenarioError(field, f"must be >= {minimum}, got {raw}")
    return raw


def _as_complex(raw: object, field: str) -> complex:
    if isinstance(raw, bool):
        raise ScenarioError(field, f"must be a number or [re, im], got {raw!r}")
    if isinstance(raw, (int, float)):
        return complex(raw)
    if isinstance(raw, list) and len(raw) == 2:
        re, im = raw
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (re, im)):
            return complex(re, im)
    raise ScenarioError(field, f"must be a number or [re, im], got {raw!r}")
