"""Property suites that cross-check the algorithms against each other."""

from __future__ import annotations

import itertools
import logging
import math
import random
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .bbs import auto_pad_width, evolve_schedule, evolve_Tl, pad_state, row_energies
from .config import (
    DEFAULT_SEED,
    DEFAULT_SUITE_LENGTH,
    DEFAULT_SUITE_RANK,
    MAX_NORMAL_ORDER_FACTORS,
    SUITE_CHECKS,
)
from .crystal import Path, is_highest, path_from_words
from .errors import BoxBallError
from .kkr import kkr_from_path, kkr_to_path, unrestricted_from_path
from .progress import ProgressCallback, emit_check_result, emit_sweep_start
from .scattering import kkr_vertex, solve_ivp
from .tau import (
    IdentityReport,
    bilinear_check,
    corner_energy,
    path_words,
    reconstruct_path,
    tau_table,
    verify_triple,
)

logger = logging.getLogger(__name__)

IVP_SCHEDULE = (1, math.inf, 2)


@dataclass(frozen=True)
class SuiteOptions:
    """Options for one verification run."""

    n: int = DEFAULT_SUITE_RANK
    length: int = DEFAULT_SUITE_LENGTH
    random_cases: int = 0
    seed: int = DEFAULT_SEED
    jobs: int = 1
    checks: tuple[str, ...] = SUITE_CHECKS


@dataclass(frozen=True)
class SuiteReport:
    """One aggregated report per check, in the order the checks were requested."""

    states: int
    reports: tuple[IdentityReport, ...]

    @property
    def ok(self) -> bool:
        return all(report.ok for report in self.reports)

    def failures(self) -> list[IdentityReport]:
        return [report for report in self.reports if not report.ok]


def _failure(name: str, path: Path, **details: object) -> IdentityReport:
    return IdentityReport(name, 1, {"path": path_words(path), **details})


def check_ivp(path: Path, schedule: Sequence[int | float] = IVP_SCHEDULE) -> IdentityReport:
    """Compare the linearized solution with direct evolution on a padded state."""

    padded = pad_state(path, auto_pad_width(path, len(schedule)))
    expected = evolve_schedule(padded, schedule)
    solved = solve_ivp(padded, schedule)
    if solved != expected:
        return _failure("ivp", path, expected=path_words(expected), solved=path_words(solved))
    return IdentityReport("ivp", 1)


def check_kkr(path: Path) -> IdentityReport:
    """Round-trip highest paths through both KKR forms, other states through tau tables."""

    if not is_highest(path):
        rc = unrestricted_from_path(path)
        back = reconstruct_path(tau_table(rc), floor=path.floor)
        if back != path:
            return _failure("kkr", path, reconstructed=path_words(back))
        return IdentityReport("kkr", 1)
    rc = kkr_from_path(path)
    back = kkr_to_path(rc)
    if back != path:
        return _failure("kkr", path, image=path_words(back))
    if all(len(rc.rows(a)) <= MAX_NORMAL_ORDER_FACTORS for a in range(1, rc.n + 1)):
        vertex = kkr_vertex(rc)
        if vertex != path:
            return _failure("kkr", path, vertex=path_words(vertex))
    return IdentityReport("kkr", 1)


def check_energy(path: Path) -> IdentityReport:
    """Check E_l = sum_j min(l, mu_j) and the drop of E_{n+1} under T_l."""

    amplitudes = unrestricted_from_path(path).lengths(1)
    l_max = max(amplitudes, default=0) + 1
    padded = pad_state(path, auto_pad_width(path, 1) + 1)
    energies = row_energies(padded, l_max)
    for size, value in enumerate(energies, 1):
        expected = sum(min(size, mu) for mu in amplitudes)
        if value != expected:
            return _failure("energy", path, l=size, row_energy=value, expected=expected)
    top = padded.n - padded.floor + 1
    before = corner_energy(padded, top)
    for size, value in enumerate(energies, 1):
        after = corner_energy(evolve_Tl(padded, size).state, top)
        if before - after != value:
            return _failure("energy", path, l=size, drop=before - after, row_energy=value)
    return IdentityReport("energy", 1)


_CHECKS = {
    "triple": verify_triple,
    "bilinear": bilinear_check,
    "ivp": check_ivp,
    "kkr": check_kkr,
    "energy": check_energy,
}


def check_state(path: Path, checks: Sequence[str] = SUITE_CHECKS) -> list[IdentityReport]:
    return [_CHECKS[name](path) for name in checks]


def exhaustive_states(n: int, length: int) -> list[Path]:
    """Every state of ``length`` single boxes of rank n."""

    return [
        path_from_words(n, [(letter,) for letter in letters])
        for letters in itertools.product(range(1, n + 2), repeat=length)
    ]


def random_states(n: int, length: int, count: int, seed: int) -> list[Path]:
    """Random states with 1..3-box factors, between ``length + 1`` and ``2 * length`` long."""

    rng = random.Random(seed)
    states = []
    for _ in range(count):
        size = rng.randint(length + 1, max(2 * length, length + 1))
        words = []
        for _ in range(size):
            capacity = rng.choice((1, 1, 2, 3))
            words.append(sorted(rng.randint(1, n + 1) for _ in range(capacity)))
        states.append(path_from_words(n, words))
    return states


def _validate(options: SuiteOptions) -> None:
    if options.n < 1 or options.length < 0 or options.random_cases < 0:
        raise BoxBallError("suite rank must be positive and sizes nonnegative")
    if options.jobs < 1:
        raise BoxBallError(f"number of jobs must be positive: {options.jobs}")
    unknown = [name for name in options.checks if name not in _CHECKS]
    if unknown:
        raise BoxBallError(f"unknown checks: {', '.join(unknown)}")


def run_suite(
    options: SuiteOptions,
    *,
    progress: ProgressCallback | None = None,
) -> SuiteReport:
    """Run the selected checks on every small state plus random larger ones."""

    _validate(options)
    states = exhaustive_states(options.n, options.length)
    states += random_states(options.n, options.length, options.random_cases, options.seed)
    emit_sweep_start(progress, len(states), options.n, options.checks)
    checks = tuple(options.checks)
    if options.jobs > 1:
        with ProcessPoolExecutor(max_workers=options.jobs) as pool:
            results = list(
                pool.map(check_state, states, itertools.repeat(checks), chunksize=64)
            )
    else:
        results = [check_state(state, checks) for state in states]

    reports = []
    for position, name in enumerate(checks):
        column = [result[position] for result in results]
        checked = sum(report.checked for report in column)
        failure = next((r.counterexample for r in column if not r.ok), None)
        reports.append(IdentityReport(name, checked, failure))
        emit_check_result(progress, name, checked, ok=failure is None)
    logger.debug("Suite finished on %d states", len(states))
    return SuiteReport(len(states), tuple(reports))
