"""Named invariant batteries runnable from the command line.

Each suite exercises one module's contracts at its default tolerances and
returns a report with one residual per check. All randomness is seeded,
so repeated runs produce identical reports.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import analysis, oracle
from .core import (
    CouplingParams,
    TwoModeState,
    annihilation_expectation,
    derive_mixing,
    make_product_state,
    unitarity_defect,
)
from .evolution import EvolutionOperator
from .rotation import RotationBackend, u_minus_s_block, us_block, us_element, verify_recursions

_X_GRID = (0.0, 0.5, -0.5, 1.0, -1.0, 5.0, -5.0)


class UnknownSuiteError(ValueError):
    """The requested verification suite does not exist."""


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    checks: tuple[CheckResult, ...]
    notes: tuple[str, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def format(self) -> str:
        lines = [f"suite: {self.suite}"]
        for check in self.checks:
            status = "PASS" if check.passed else "FAIL"
            lines.append(
                f"  [{status}] {check.name}: max residual {check.residual:.3e}"
                f" (tol {check.tolerance:.1e})"
            )
        for note in self.notes:
            lines.append(f"  note: {note}")
        lines.append(f"result: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def verify_suite(name: str, tol: float | None = None) -> SuiteReport:
    """Run one named invariant battery.

    ``tol``, when given, replaces every check's default tolerance.
    """
    try:
        runner = _SUITES[name]
    except KeyError:
        known = ", ".join(sorted(_SUITES))
        raise UnknownSuiteError(f"unknown suite {name!r}; choose one of: {known}") from None
    checks, notes = runner()
    if tol is not None:
        checks = [CheckResult(c.name, c.residual, tol) for c in checks]
    return SuiteReport(suite=name, checks=tuple(checks), notes=tuple(notes))


def _params_for_detuning(x: float, lam: float = 1.0, omega2: float = 1.0) -> CouplingParams:
    return CouplingParams(omega1=omega2 + 2.0 * lam * x, omega2=omega2, lam=lam)


def _rotation_suite() -> tuple[list[CheckResult], list[str]]:
    n_top = 30
    worst_unitary = worst_inverse = worst_transpose = 0.0
    worst_recursion = worst_backend = worst_rows = 0.0
    for x in _X_GRID:
        mix = derive_mixing(_params_for_detuning(x))
        for n in range(n_top + 1):
            forward = us_block(mix, n).entries.real
            inverse = u_minus_s_block(mix, n).entries.real
            worst_unitary = max(worst_unitary, unitarity_defect(forward))
            worst_inverse = max(
                worst_inverse, float(np.max(np.abs(inverse @ forward - np.eye(n + 1))))
            )
            worst_transpose = max(worst_transpose, float(np.max(np.abs(inverse - forward.T))))
            if n >= 1:
                worst_recursion = max(worst_recursion, verify_recursions(mix, n))
            for l in range(n + 1):
                scale = math.sqrt(math.comb(n, l))
                top_row = scale * mix.c ** (n - l) * mix.s**l
                bottom_row = scale * (-1.0) ** (n - l) * mix.c**l * mix.s ** (n - l)
                for reference, got in (
                    (top_row, us_element(mix, n, 0, n - l, l).real),
                    (bottom_row, us_element(mix, 0, n, n - l, l).real),
                ):
                    denom = max(abs(reference), 1e-300)
                    worst_rows = max(worst_rows, abs(got - reference) / denom)
    for x in (0.0, 1.0, 5.0, -5.0):
        mix = derive_mixing(_params_for_detuning(x))
        for n in range(n_top + 1):
            closed = us_block(mix, n, backend=RotationBackend.CLOSED_FORM).entries
            recursed = us_block(mix, n, backend=RotationBackend.RECURSION).entries
            worst_backend = max(worst_backend, float(np.max(np.abs(closed - recursed))))
    checks = [
        CheckResult("block unitarity, n <= 30, detuning grid", worst_unitary, 1e-10),
        CheckResult("inverse times forward equals identity", worst_inverse, 1e-10),
        CheckResult("inverse block equals forward transpose", worst_transpose, 1e-10),
        CheckResult("ladder recursion residuals", worst_recursion, 1e-10),
        CheckResult("closed form vs recursion backend", worst_backend, 1e-10),
        CheckResult("special first-row/column elements (relative)", worst_rows, 1e-12),
    ]
    return checks, []


def _evolution_suite() -> tuple[list[CheckResult], list[str]]:
    t_grid = (0.0, 0.1, 0.37, 1.0, 2.9, 7.3, 20.0)
    worst_identity = worst_unitary = worst_group = 0.0
    for x in (0.0, 1.0, -5.0):
        evo = EvolutionOperator(_params_for_detuning(x, lam=0.7, omega2=1.3))
        for n in range(13):
            worst_identity = max(
                worst_identity,
                float(np.max(np.abs(evo.ut_block(n, 0.0).entries - np.eye(n + 1)))),
            )
            for t in t_grid:
                worst_unitary = max(worst_unitary, unitarity_defect(evo.ut_block(n, t).entries))
            for t1, t2 in ((0.1, 0.37), (1.0, 2.9), (7.3, 0.1)):
                combined = evo.ut_block(n, t1 + t2).entries
                product = evo.ut_block(n, t1).entries @ evo.ut_block(n, t2).entries
                worst_group = max(worst_group, float(np.max(np.abs(combined - product))))
    worst_closed = 0.0
    for x in (0.0, 1.0, -1.0, 5.0, -5.0):
        lam = 0.7
        evo = EvolutionOperator(_params_for_detuning(x, lam=lam, omega2=1.3))
        for lam_t in (0.0, 0.3, 1.0, 2.2, 5.0, 9.1):
            t = lam_t / lam
            for n in range(21):
                worst_closed = max(
                    worst_closed,
                    abs(evo.transfer_amplitude(n, t) - evo.ut_element(0, n, n, 0, t)),
                    abs(evo.survival_amplitude(n, t) - evo.ut_element(n, 0, n, 0, t)),
                )
    rng = np.random.default_rng(20240817)
    worst_picture = 0.0
    for _ in range(10):
        params = CouplingParams(
            omega1=rng.uniform(0.2, 4.0), omega2=rng.uniform(0.2, 4.0), lam=rng.uniform(0.05, 1.5)
        )
        evo = EvolutionOperator(params)
        state = _random_state(rng, n_max=4)
        for t in (0.0, 0.37, 2.2):
            evolved = evo.evolve(state, t)
            for mode in (1, 2):
                heis = evo.heisenberg_mode_expectation(state, mode, t)
                schro = annihilation_expectation(evolved, mode)
                worst_picture = max(worst_picture, abs(heis - schro))
    worst_period = 0.0
    for x in (0.0, 1.0):
        lam = 0.7
        evo = EvolutionOperator(_params_for_detuning(x, lam=lam, omega2=1.3))
        mix = evo.mix
        period = math.pi * 2.0 * mix.c * mix.s / lam
        for t in (0.1, 0.9, 2.3):
            for n in (1, 2, 5):
                worst_period = max(
                    worst_period,
                    abs(
                        abs(evo.ut_element(0, n, n, 0, t + period))
                        - abs(evo.ut_element(0, n, n, 0, t))
                    ),
                )
    checks = [
        CheckResult("identity at t = 0", worst_identity, 1e-12),
        CheckResult("block unitarity over time grid", worst_unitary, 1e-10),
        CheckResult("group property U(t1) U(t2) = U(t1+t2)", worst_group, 1e-10),
        CheckResult("closed-form transfer/survival vs generic sum, n <= 20", worst_closed, 1e-10),
        CheckResult("Heisenberg vs Schrodinger mode expectations", worst_picture, 1e-10),
        CheckResult("transfer modulus periodicity", worst_period, 1e-10),
    ]
    return checks, []


def _oracle_suite() -> tuple[list[CheckResult], list[str]]:
    rng = np.random.default_rng(911)
    worst_dev = worst_spec = worst_sym = worst_unit = 0.0
    for _ in range(10):
        params = CouplingParams(
            omega1=rng.uniform(0.1, 5.0), omega2=rng.uniform(0.1, 5.0), lam=rng.uniform(0.05, 1.5)
        )
        t_grid = rng.uniform(0.0, 20.0, size=20)
        for n in range(13):
            worst_dev = max(worst_dev, oracle.compare_to_analytic(params, n, t_grid))
            worst_spec = max(worst_spec, oracle.spectrum_deviation(params, n))
            block = oracle.build_block(params, n)
            worst_sym = max(worst_sym, float(np.max(np.abs(block.matrix - block.matrix.T))))
            worst_unit = max(
                worst_unit, unitarity_defect(oracle.expm_evolution(block, float(t_grid[0])).entries)
            )
    checks = [
        CheckResult("analytic vs exact-diagonalization evolution, n <= 12", worst_dev, 1e-9),
        CheckResult("spectrum equals normal-mode combinations", worst_spec, 1e-10),
        CheckResult("Hamiltonian block symmetry", worst_sym, 1e-14),
        CheckResult("exponential unitarity", worst_unit, 1e-12),
    ]
    return checks, []


def _exchange_suite() -> tuple[list[CheckResult], list[str]]:
    rng = np.random.default_rng(424242)
    notes: list[str] = []

    worst_stats = worst_rho = 0.0
    omega, lam = 2.37, 0.53
    params = CouplingParams(omega1=omega, omega2=omega, lam=lam)
    evo = EvolutionOperator(params)
    tau0 = analysis.exchange_times(evo.mix, lam, 0)[0]
    for _ in range(20):
        phi = _random_phi(rng, rng.integers(1, 7))
        state0 = make_product_state(phi)
        report = analysis.verify_statistics_exchange(state0, evo, tau0)
        worst_stats = max(worst_stats, report.statistics_match)
        rho1_initial = analysis.reduce(state0, 1).entries
        rho2_final = analysis.reduce(evo.evolve(state0, tau0), 2).entries
        kick = np.exp(-1j * (omega * tau0 + 0.5 * math.pi) * np.arange(rho1_initial.shape[0]))
        predicted = np.outer(kick, kick.conj()) * rho1_initial
        worst_rho = max(worst_rho, float(np.max(np.abs(rho2_final - predicted))))

    worst_exact = 0.0
    worst_margin = -math.inf  # perturbed-ratio fidelity minus the allowed ceiling
    for level in (1, 2, 3):
        ratio = analysis.complete_exchange_ratio(level, 1)
        for _ in range(5):
            weight = rng.uniform(0.2, 0.8)
            phi = np.zeros(level + 1, dtype=complex)
            phi[0] = math.sqrt(weight) * np.exp(1j * rng.uniform(0, 2 * math.pi))
            phi[level] = math.sqrt(1 - weight) * np.exp(1j * rng.uniform(0, 2 * math.pi))
            lam0 = 1.0
            exact = EvolutionOperator(
                CouplingParams(omega1=ratio * lam0, omega2=ratio * lam0, lam=lam0)
            )
            t0 = analysis.exchange_times(exact.mix, lam0, 0)[0]
            fid = analysis.exchange_fidelity(exact.evolve(make_product_state(phi), t0), phi)
            worst_exact = max(worst_exact, abs(1.0 - fid))
            for factor in (0.95, 1.05):
                w = ratio * factor * lam0
                off = EvolutionOperator(CouplingParams(omega1=w, omega2=w, lam=lam0))
                t0_off = analysis.exchange_times(off.mix, lam0, 0)[0]
                fid_off = analysis.exchange_fidelity(
                    off.evolve(make_product_state(phi), t0_off), phi
                )
                worst_margin = max(worst_margin, fid_off - (1.0 - 1e-4))
    try:
        analysis.complete_exchange_ratio(5, 1)
        ratio_guard = 1.0
    except analysis.NonPositiveRatioError:
        ratio_guard = 0.0

    worst_detuning = 0.0
    for x in (0.0, 0.5, 1.0, 2.0, 5.0):
        lam0 = 0.8
        evo_x = EvolutionOperator(_params_for_detuning(x, lam=lam0, omega2=1.1))
        tau = analysis.exchange_times(evo_x.mix, lam0, 0)[0]
        best = analysis.find_exchange_time(evo_x, [0.0, 1.0], 0.5 * tau, 1.5 * tau)[1]
        worst_detuning = max(worst_detuning, abs(best - 1.0 / (1.0 + x * x)))

    worst_fock = 0.0
    printed_all_exact = True
    for ratio in (3.0, 1.7):
        lam0 = 1.0
        evo_f = EvolutionOperator(
            CouplingParams(omega1=ratio * lam0, omega2=ratio * lam0, lam=lam0)
        )
        taus = analysis.exchange_times(evo_f.mix, lam0, 4)
        printed = [taus[0] + 2.0 * math.pi * k / lam0 for k in range(3)]
        for level in range(1, 6):
            phi = np.zeros(level + 1, dtype=complex)
            phi[level] = 1.0
            state0 = make_product_state(phi)
            for tau in taus:
                fid = analysis.exchange_fidelity(evo_f.evolve(state0, tau), phi)
                worst_fock = max(worst_fock, abs(1.0 - fid))
            for t in printed:
                fid = analysis.exchange_fidelity(evo_f.evolve(state0, t), phi)
                if abs(1.0 - fid) > 1e-9:
                    printed_all_exact = False
        strict_subset = all(any(abs(t - tau) < 1e-12 for tau in taus) for t in printed) and len(
            printed
        ) < len(taus)
        if strict_subset:
            notes.append(
                f"ratio {ratio:g}: the instants tau0 + 2 pi k / lambda are the even-index"
                " half of the exchange times; Fock exchange is exact at every exchange time,"
                " a strict superset"
            )
    if not printed_all_exact:
        notes.append("Fock exchange was NOT exact at some instant tau0 + 2 pi k / lambda")

    checks = [
        CheckResult("modulus transfer at the first exchange time", worst_stats, 1e-10),
        CheckResult("reduced-density phase-kick relation", worst_rho, 1e-10),
        CheckResult("exact qubit exchange at the matched ratio", worst_exact, 1e-9),
        CheckResult("ratio +-5% drops fidelity below 1 - 1e-4", worst_margin, 0.0),
        CheckResult("nonpositive ratio is rejected", ratio_guard, 0.0),
        CheckResult("peak single-quantum transfer equals 1/(1+x^2)", worst_detuning, 1e-10),
        CheckResult("Fock exchange exact at every exchange time", worst_fock, 1e-9),
    ]
    return checks, notes


def _random_phi(rng: np.random.Generator, n_top: int) -> np.ndarray:
    phi = rng.normal(size=n_top + 1) + 1j * rng.normal(size=n_top + 1)
    phi[n_top] += 1.0  # pin the support so the draw never truncates early
    return phi / np.linalg.norm(phi)


def _random_state(rng: np.random.Generator, n_max: int) -> TwoModeState:
    blocks = []
    total = 0.0
    for n in range(n_max + 1):
        vec = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        total += float(np.sum(np.abs(vec) ** 2))
        blocks.append(vec)
    scale = math.sqrt(total)
    return TwoModeState(n_max=n_max, blocks=tuple(b / scale for b in blocks))


_SUITES = {
    "rotation": _rotation_suite,
    "evolution": _evolution_suite,
    "oracle": _oracle_suite,
    "exchange": _exchange_suite,
}

SUITE_NAMES = tuple(sorted(_SUITES))
