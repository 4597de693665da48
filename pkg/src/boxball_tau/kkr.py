"""The KKR bijection between rigged configurations and highest paths."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from .crystal import Path, is_highest, make_element, path_from_words
from .errors import BoxBallError
from .rigged import (
    RiggedConfiguration,
    Validity,
    enumerate_rigged_configurations,
    partial_sum,
    validate,
)

logger = logging.getLogger(__name__)

BRUTE_FORCE_BOX_LIMIT = 8


class _Workspace:
    """Mutable copy of a rigged configuration used while boxes are moved."""

    def __init__(self, n: int, quantum: Sequence[int], colors: Sequence[Sequence[Sequence[int]]]):
        self.n = n
        self.quantum = list(quantum)
        self.colors = [[list(row) for row in rows] for rows in colors]

    def lengths(self, a: int) -> list[int]:
        if a == 0:
            return self.quantum
        if a > self.n:
            return []
        return [w for w, _ in self.colors[a - 1]]

    def vacancy(self, a: int, j: int) -> int:
        return (
            partial_sum(self.lengths(a - 1), j)
            - 2 * partial_sum(self.lengths(a), j)
            + partial_sum(self.lengths(a + 1), j)
        )

    def singular(self, a: int, row: list[int]) -> bool:
        return row[1] == self.vacancy(a, row[0])

    def resettle(self, picks: list[tuple[int, int]]) -> None:
        # Rows that changed become singular; everything else keeps its rigging.
        for a, i in picks:
            row = self.colors[a - 1][i]
            if row[0] > 0:
                row[1] = self.vacancy(a, row[0])
        for a in range(1, self.n + 1):
            self.colors[a - 1] = [row for row in self.colors[a - 1] if row[0] > 0]

    def freeze(self, floor: int) -> RiggedConfiguration:
        colors = tuple(tuple((w, r) for w, r in rows) for rows in self.colors)
        return RiggedConfiguration(self.n, tuple(self.quantum), colors, floor)


def _remove_box(work: _Workspace, index: int) -> int:
    column = work.quantum[index]
    picks: list[tuple[int, int]] = []
    for a in range(1, work.n + 1):
        best = None
        for i, row in enumerate(work.colors[a - 1]):
            if row[0] < column or not work.singular(a, row):
                continue
            if best is None:
                best = i
                continue
            current = work.colors[a - 1][best]
            if (row[0], -row[1]) < (current[0], -current[1]):
                best = i
        if best is None:
            break
        picks.append((a, best))
        column = work.colors[a - 1][best][0]
    work.quantum[index] -= 1
    for a, i in picks:
        work.colors[a - 1][i][0] -= 1
    work.resettle(picks)
    return len(picks) + 1


def kkr_to_path(rc: RiggedConfiguration) -> Path:
    """Return the highest path of a restricted rigged configuration."""

    if validate(rc) is not Validity.RESTRICTED:
        raise BoxBallError("the KKR map needs a restricted rigged configuration")
    work = _Workspace(rc.n, rc.quantum, rc.colors)
    words: list[list[int]] = [[] for _ in rc.quantum]
    for index in range(len(rc.quantum) - 1, -1, -1):
        while work.quantum[index] > 0:
            words[index].append(_remove_box(work, index) + rc.floor)
        work.quantum.pop()
    logger.debug("KKR produced %d factors from %d boxes", len(words), rc.box_count())
    return path_from_words(rc.n + rc.floor, words, floor=rc.floor)


def _add_box(work: _Workspace, depth: int) -> None:
    index = len(work.quantum) - 1
    before = work.quantum[index]
    vacancies = {
        (a, w): work.vacancy(a, w)
        for a in range(1, depth + 1)
        for w in {row[0] for row in work.colors[a - 1]}
    }
    picks: list[tuple[int, int]] = []
    bound = None
    for a in range(depth, 0, -1):
        rows = work.colors[a - 1]
        best = None
        for i, (w, r) in enumerate(rows):
            if bound is not None and w > bound:
                continue
            if r != vacancies[(a, w)]:
                continue
            if best is None or w > rows[best][0]:
                best = i
        if best is None:
            rows.append([0, 0])
            best = len(rows) - 1
        picks.append((a, best))
        bound = rows[best][0]
    if picks and bound < before:
        raise BoxBallError("path is not compatible with a rigged configuration")
    work.quantum[index] += 1
    for a, i in picks:
        work.colors[a - 1][i][0] += 1
    work.resettle(picks)


def kkr_from_path(path: Path) -> RiggedConfiguration:
    """Return the restricted rigged configuration of a highest path."""

    if not is_highest(path):
        raise BoxBallError("the inverse KKR map needs a highest path")
    local = path.local()
    work = _Workspace(local.n, [], [[] for _ in range(local.n)])
    for factor in local:
        work.quantum.append(0)
        for letter in reversed(factor.word()):
            _add_box(work, letter - 1)
    return work.freeze(path.floor)


def kkr_from_path_bruteforce(path: Path) -> RiggedConfiguration:
    """Search every restricted configuration of the right content for the preimage."""

    local = path.local()
    counts = local.letter_counts()
    sizes = [sum(counts[a:]) for a in range(1, local.n + 1)]
    boxes = sum(local.capacities) + sum(sizes)
    if boxes > BRUTE_FORCE_BOX_LIMIT:
        raise BoxBallError(f"brute-force inverse is limited to {BRUTE_FORCE_BOX_LIMIT} boxes")
    candidates = enumerate_rigged_configurations(
        local.n, local.capacities, sizes, floor=path.floor
    )
    for rc in candidates:
        if kkr_to_path(rc) == path:
            return rc
    raise BoxBallError("no rigged configuration maps to this path")


@dataclass(frozen=True)
class VacuumData:
    """The staircase prepended to a state to make it highest."""

    multiplicities: tuple[int, ...]
    sizes: tuple[int, ...]
    word: tuple[int, ...]


def vacuum_data(path: Path, multiplicities: Sequence[int] | None = None) -> VacuumData:
    """Return M_1..M_n, L_0..L_n and the vacuum word (1..n)^{M_n} ... (12)^{M_2} (1)^{M_1}."""

    local = path.local()
    n = local.n
    if multiplicities is None:
        counts = local.letter_counts()
        multiplicities = [counts[a] + 1 for a in range(1, n + 1)]
    if len(multiplicities) != n or any(m < 0 for m in multiplicities):
        raise BoxBallError(f"expected {n} nonnegative multiplicities: {multiplicities}")
    sizes = tuple(
        sum((b - a) * multiplicities[b - 1] for b in range(a + 1, n + 1)) for a in range(n + 1)
    )
    word = tuple(
        letter
        for b in range(n, 0, -1)
        for _ in range(multiplicities[b - 1])
        for letter in range(1, b + 1)
    )
    return VacuumData(tuple(multiplicities), sizes, word)


def unrestricted_from_path(
    path: Path, multiplicities: Sequence[int] | None = None
) -> RiggedConfiguration:
    """Return the unrestricted rigged configuration of an arbitrary state."""

    local = path.local()
    n = local.n
    data = vacuum_data(path, multiplicities)
    staircase = tuple(make_element(n, (letter,)) for letter in data.word)
    extended = Path(staircase + local.factors, n)
    if not is_highest(extended):
        raise BoxBallError("vacuum multiplicities are too small to make the state highest")
    full = kkr_from_path(extended)
    colors = []
    for a in range(1, n + 1):
        rows = list(full.rows(a))
        for _ in range(data.sizes[a]):
            try:
                rows.remove((1, 0))
            except ValueError as exc:
                raise BoxBallError(f"vacuum rows missing from color {a}") from exc
        colors.append(tuple((w, r - data.multiplicities[a - 1]) for w, r in rows))
    logger.debug(
        "Unrestricted configuration built with multiplicities %s and staircase %s",
        data.multiplicities,
        data.sizes,
    )
    return RiggedConfiguration(n, local.capacities, tuple(colors), path.floor)
