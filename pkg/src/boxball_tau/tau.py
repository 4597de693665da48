"""Ultradiscrete tau functions, quadrant ball counts and corner energies.

The three tables share one layout: ``values[k, d]`` for prefixes k = 0..L and
colors d = 0..n+1, with column 0 fixed by ``values[k, 0] = values[k, n+1] - |lambda_[k]|``.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter, defaultdict
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from .bbs import evolve_Tl, pad_state
from .config import DIRECT_TAU_ROW_LIMIT
from .crystal import CrystalElement, Path, highest, transport_left
from .errors import BoxBallError
from .kkr import unrestricted_from_path
from .rigged import RiggedConfiguration, pair_min, shift_riggings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TauTable:
    """Corner values indexed by prefix length k and color d."""

    values: np.ndarray
    quantum: tuple[int, ...]
    label: str = "tau"

    @property
    def n(self) -> int:
        return self.values.shape[1] - 2

    @property
    def length(self) -> int:
        return self.values.shape[0] - 1

    def __getitem__(self, key: tuple[int, int]) -> int:
        k, d = key
        return int(self.values[k, d])

    def rows(self) -> dict[int, list[int]]:
        """Return {d: [value at k = 1..L]} for d = 1..n+1."""

        return {d: self.values[1:, d].tolist() for d in range(1, self.n + 2)}

    def same_values(self, other: TauTable) -> bool:
        return self.values.shape == other.values.shape and bool(
            np.array_equal(self.values, other.values)
        )


@dataclass(frozen=True)
class SubsetChoice:
    """Sub-multisets (nu^(a), s^(a)) for the colors a+1..n of one maximizer."""

    shapes: tuple[tuple[int, ...], ...]
    riggings: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of checking an identity over many entries; keeps the first failure."""

    name: str
    checked: int
    counterexample: dict[str, Any] | None = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def with_base_column(values: np.ndarray, quantum: Sequence[int]) -> np.ndarray:
    totals = np.concatenate(([0], np.cumsum(np.asarray(quantum, dtype=np.int64))))
    values[:, 0] = values[:, -1] - totals
    return values


def path_words(path: Path) -> list[list[int]]:
    return [list(factor.word()) for factor in path]


class TauEvaluator:
    """Memoized evaluation of tau^(a)_d(lambda) for one rigged configuration.

    A sub-multiset nu of color b enters only through its lengths and the sum of its
    riggings, so for each multiset of lengths the smallest riggings are taken.
    """

    def __init__(self, rc: RiggedConfiguration):
        self.rc = rc
        self._cache: dict[tuple[int, int, tuple[int, ...]], int] = {}
        self._choices = {b: self._color_choices(b) for b in range(1, rc.n + 1)}

    def _color_choices(self, b: int) -> list[tuple[tuple[int, ...], tuple[int, ...], int]]:
        by_length: dict[int, list[int]] = defaultdict(list)
        for length, rigging in self.rc.rows(b):
            by_length[length].append(rigging)
        groups = [(w, sorted(rs)) for w, rs in sorted(by_length.items())]
        choices = []
        for counts in itertools.product(*(range(len(rs) + 1) for _, rs in groups)):
            shape: list[int] = []
            chosen: list[int] = []
            for (w, rs), count in zip(groups, counts, strict=True):
                shape.extend([w] * count)
                chosen.extend(rs[:count])
            rows = sorted(zip(shape, chosen, strict=True), key=lambda row: (-row[0], -row[1]))
            choices.append((tuple(sorted(shape)), tuple(r for _, r in rows), sum(chosen)))
        return choices

    def _check(self, a: int, d: int) -> None:
        if not 0 <= a <= self.rc.n or not a <= d <= self.rc.n + 1:
            raise BoxBallError(f"tau index out of range: level {a}, color {d}")

    def value(self, a: int, d: int, lam: Sequence[int]) -> int:
        self._check(a, d)
        return self._value(a, d, tuple(sorted(lam)))

    def _value(self, a: int, d: int, lam: tuple[int, ...]) -> int:
        n = self.rc.n
        if d == a:
            return self._value(a, n + 1, lam) - sum(lam)
        if a == n:
            return 0
        key = (a, d, lam)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        best = max(
            pair_min(lam, nu) - pair_min(nu, nu) - cost + self._value(a + 1, d, nu)
            for nu, _, cost in self._choices[a + 1]
        )
        self._cache[key] = best
        return best

    def maximizers(self, a: int, d: int, lam: Sequence[int]) -> list[SubsetChoice]:
        """Return every choice of (nu^(a+1), ..., nu^(n)) attaining the maximum."""

        self._check(a, d)
        chains = self._chains(a, d, tuple(sorted(lam)))
        return [
            SubsetChoice(
                tuple(tuple(sorted(shape, reverse=True)) for shape, _ in chain),
                tuple(riggings for _, riggings in chain),
            )
            for chain in chains
        ]

    def _chains(self, a: int, d: int, lam: tuple[int, ...]) -> list[list[tuple]]:
        n = self.rc.n
        if d == a:
            return self._chains(a, n + 1, lam)
        if a == n:
            return [[]]
        target = self._value(a, d, lam)
        found = []
        for nu, riggings, cost in self._choices[a + 1]:
            tail = self._value(a + 1, d, nu)
            if pair_min(lam, nu) - pair_min(nu, nu) - cost + tail == target:
                found.extend([(nu, riggings), *rest] for rest in self._chains(a + 1, d, nu))
        return found


def _check_submultiset(rc: RiggedConfiguration, a: int, lam: Sequence[int]) -> None:
    have = Counter(rc.lengths(a))
    if Counter(lam) - have:
        raise BoxBallError(f"{tuple(lam)} is not contained in mu^({a}) = {rc.lengths(a)}")


def tau_eval(rc: RiggedConfiguration, a: int, d: int, lam: Sequence[int]) -> int:
    """Return tau^(a)_d(lambda) by the recursion in the rank."""

    _check_submultiset(rc, a, lam)
    return TauEvaluator(rc).value(a, d, lam)


def tau_direct(rc: RiggedConfiguration, a: int, d: int, lam: Sequence[int]) -> int:
    """Return tau^(a)_d(lambda) by maximizing over all sub-configurations at once."""

    _check_submultiset(rc, a, lam)
    n = rc.n
    if not a <= d <= n + 1:
        raise BoxBallError(f"tau index out of range: level {a}, color {d}")
    colors = range(a + 1, n + 1)
    if sum(len(rc.rows(b)) for b in colors) > DIRECT_TAU_ROW_LIMIT:
        raise BoxBallError(f"direct evaluation is limited to {DIRECT_TAU_ROW_LIMIT} rows")
    per_color = []
    for b in colors:
        groups = sorted(Counter(rc.rows(b)).items())
        options = []
        for counts in itertools.product(*(range(m + 1) for _, m in groups)):
            rows = [row for (row, _), c in zip(groups, counts, strict=True) for _ in range(c)]
            options.append(rows)
        per_color.append(options)
    best = None
    for choice in itertools.product(*per_color):
        shapes = [tuple(lam), *([w for w, _ in rows] for rows in choice), ()]
        value = sum(pair_min(shapes[i], shapes[i + 1]) for i in range(len(shapes) - 1))
        value -= sum(pair_min(shape, shape) for shape in shapes[1:-1])
        value -= sum(r for rows in choice for _, r in rows)
        value -= sum(shapes[d - a]) if d <= n else 0
        best = value if best is None else max(best, value)
    return best if best is not None else 0


def _check_prefix(k: int, length: int) -> None:
    if not 0 <= k <= length:
        raise BoxBallError(f"prefix length k={k} out of range 0..{length}")


def tau_table(rc: RiggedConfiguration) -> TauTable:
    """Return tau_{k,d} for the prefixes lambda_[k] of the quantum space."""

    evaluator = TauEvaluator(rc)
    length, n = len(rc.quantum), rc.n
    values = np.zeros((length + 1, n + 2), dtype=np.int64)
    for k in range(length + 1):
        lam = rc.quantum[:k]
        for d in range(1, n + 2):
            values[k, d] = evaluator.value(0, d, lam)
    return TauTable(with_base_column(values, rc.quantum), rc.quantum, "tau")


def tau_maximizers(rc: RiggedConfiguration, k: int, d: int) -> list[SubsetChoice]:
    _check_prefix(k, len(rc.quantum))
    return TauEvaluator(rc).maximizers(0, d, rc.quantum[:k])


def rho_table(path: Path) -> TauTable:
    """Return rho_{k,d}: prefix balls of colors 2..d plus all balls below in the pattern."""

    local = path.local()
    length, n = len(local), local.n
    values = np.zeros((length + 1, n + 2), dtype=np.int64)
    if length:
        # Balls spread right by at most the ball count per step; the prefix empties in L steps.
        current = pad_state(local, local.ball_count() * (length + 1) + 1)
        pattern = [current]
        while not current.prefix(length).is_vacuum():
            current = evolve_Tl(current, math.inf).state
            pattern.append(current)
        occupancy = np.array(
            [[factor.x for factor in row.factors[:length]] for row in pattern], dtype=np.int64
        )
        per_factor = np.zeros((length, n + 2), dtype=np.int64)
        per_factor[:, 2:] = np.cumsum(occupancy[0, :, 1:], axis=1)
        per_factor[:, 1:] += occupancy[1:, :, 1:].sum(axis=(0, 2))[:, None]
        values[1:, :] = np.cumsum(per_factor, axis=0)
        logger.debug("Quadrant sums used %d rows of the evolution pattern", len(pattern))
    return TauTable(with_base_column(values, local.capacities), local.capacities, "rho")


def rho_eval(path: Path, k: int, d: int) -> int:
    _check_prefix(k, len(path))
    table = rho_table(path)
    if not 0 <= d <= table.n + 1:
        raise BoxBallError(f"color d={d} out of range 0..{table.n + 1}")
    return table[k, d]


def energy_table(path: Path, *, dual: bool = False, vacuum: int | None = None) -> TauTable:
    """Return the corner energies E_{k,i} (or the bulk part when ``dual``) for every prefix.

    The boundary u_l uses l = balls + largest capacity + 1 unless ``vacuum`` is given.
    """

    local = path.local()
    length, n = len(local), local.n
    factors: list[CrystalElement] = list(local)
    if not dual:
        size = vacuum or local.ball_count() + max(local.capacities, default=0) + 1
        factors.insert(0, highest(n, size))
    sums = np.zeros((len(factors), n + 1), dtype=np.int64)
    for m in range(1, len(factors)):
        _, images = transport_left(factors, m)
        sums[m] = np.sum([image.nonwinding for image in images], axis=0)
    totals = np.cumsum(sums, axis=0)
    values = np.zeros((length + 1, n + 2), dtype=np.int64)
    offset = 0 if dual else 1
    for k in range(length + 1):
        last = k - 1 + offset
        if last < 0:
            continue
        row = totals[last]
        values[k, 1:] = [row[i % (n + 1)] for i in range(1, n + 2)]
    return TauTable(with_base_column(values, local.capacities), local.capacities, "energy")


def corner_energy(path: Path, i: int, *, dual: bool = False) -> int:
    if not 1 <= i <= path.n - path.floor + 1:
        raise BoxBallError(f"energy color {i} out of range")
    return energy_table(path, dual=dual)[len(path), i]


def path_charge(path: Path) -> int:
    """Return -E_{n+1}(p); for a highest path this is the charge of its configuration."""

    table = energy_table(path)
    return -table[len(path), table.n + 1]


def reconstruct_path(
    table: TauTable, quantum: Sequence[int] | None = None, *, floor: int = 0
) -> Path:
    """Recover the state whose corner table is ``table`` from second differences."""

    quantum = tuple(table.quantum if quantum is None else quantum)
    x = np.diff(np.diff(table.values, axis=0), axis=1)
    if x.shape[0] != len(quantum):
        raise BoxBallError("table length does not match the quantum space")
    if (x < 0).any():
        k, d = (int(v) + 1 for v in np.argwhere(x < 0)[0])
        raise BoxBallError(f"negative second difference at k={k}, d={d}")
    sums = x.sum(axis=1)
    if not np.array_equal(sums, np.asarray(quantum, dtype=np.int64)):
        raise BoxBallError("second differences do not reproduce the quantum space")
    n = table.n
    pad = (0,) * floor
    factors = tuple(CrystalElement(pad + tuple(int(v) for v in row), floor) for row in x)
    return Path(factors, n + floor, floor)


def _compare(name: str, path: Path, tables: dict[str, TauTable]) -> IdentityReport:
    first, *others = tables.values()
    checked = 0
    for k, d in np.ndindex(first.values.shape):
        checked += 1
        entries = {label: table[k, d] for label, table in tables.items()}
        if len(set(entries.values())) > 1:
            failure = {"path": path_words(path), "k": k, "d": d, **entries}
            return IdentityReport(name, checked, failure)
    return IdentityReport(name, checked)


def verify_triple(path: Path) -> IdentityReport:
    """Check tau = rho = E on every prefix and color."""

    rc = unrestricted_from_path(path)
    tables = {
        "tau": tau_table(rc),
        "rho": rho_table(path),
        "energy": energy_table(path),
    }
    return _compare("triple", path, tables)


def bilinear_check(path: Path) -> IdentityReport:
    """Check the ultradiscrete bilinear equation and tau_{k,1} = taubar_{k,n+1}.

    taubar is the table after one step of T_infinity, where r^(1) grows by mu^(1).
    """

    rc = unrestricted_from_path(path)
    tau = tau_table(rc)
    bar = tau_table(shift_riggings(rc, 1, lambda length: length))
    n, quantum = rc.n, rc.quantum
    checked = 0
    for k in range(len(quantum) + 1):
        checked += 1
        if tau[k, 1] != bar[k, n + 1]:
            return IdentityReport(
                "bilinear",
                checked,
                {
                    "path": path_words(path),
                    "k": k,
                    "d": 1,
                    "tau": tau[k, 1],
                    "taubar": bar[k, n + 1],
                },
            )
    for k in range(1, len(quantum) + 1):
        for d in range(2, n + 2):
            checked += 1
            left = bar[k, d - 1] + tau[k - 1, d]
            right = max(
                bar[k, d] + tau[k - 1, d - 1],
                bar[k - 1, d - 1] + tau[k, d] - quantum[k - 1],
            )
            if left != right:
                return IdentityReport(
                    "bilinear",
                    checked,
                    {"path": path_words(path), "k": k, "d": d, "left": left, "right": right},
                )
    return IdentityReport("bilinear", checked)
