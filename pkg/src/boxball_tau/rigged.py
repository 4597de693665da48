"""Rigged configurations, vacancy numbers and charge."""

from __future__ import annotations

import itertools
from collections import Counter
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass
from enum import StrEnum

from .errors import BoxBallError

Row = tuple[int, int]


class Validity(StrEnum):
    RESTRICTED = "restricted"
    UNRESTRICTED = "unrestricted"
    INVALID = "invalid"


def pair_min(first: Iterable[int], second: Iterable[int]) -> int:
    """Return sum over i, j of min(first_i, second_j)."""

    others = list(second)
    return sum(min(a, b) for a in first for b in others)


def partial_sum(lengths: Iterable[int], j: int) -> int:
    return sum(min(j, length) for length in lengths)


def _canonical(rows: Iterable[Row]) -> tuple[Row, ...]:
    return tuple(sorted(((int(w), int(r)) for w, r in rows), key=lambda row: (-row[0], -row[1])))


@dataclass(frozen=True)
class RiggedConfiguration:
    """A quantum space mu^(0) with colored rows (length, rigging) for a = 1..n.

    Rows inside one color form a multiset and are kept sorted by (length desc,
    rigging desc). ``floor`` shifts the letters of the associated path.
    """

    n: int
    quantum: tuple[int, ...]
    colors: tuple[tuple[Row, ...], ...]
    floor: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise BoxBallError(f"rank must be positive: {self.n}")
        if len(self.colors) != self.n:
            raise BoxBallError(f"expected {self.n} colors, got {len(self.colors)}")
        if any(length < 1 for length in self.quantum):
            raise BoxBallError(f"quantum space rows must be positive: {self.quantum}")
        colors = tuple(_canonical(rows) for rows in self.colors)
        for rows in colors:
            if any(w < 1 for w, _ in rows):
                raise BoxBallError("colored rows must have positive length")
        object.__setattr__(self, "quantum", tuple(int(w) for w in self.quantum))
        object.__setattr__(self, "colors", colors)

    @classmethod
    def empty(cls, n: int, quantum: Sequence[int], *, floor: int = 0) -> RiggedConfiguration:
        return cls(n, tuple(quantum), tuple(() for _ in range(n)), floor)

    def lengths(self, a: int) -> tuple[int, ...]:
        """Return mu^(a); mu^(0) is the quantum space and mu^(n+1) is empty."""

        if a == 0:
            return self.quantum
        if a > self.n:
            return ()
        return tuple(w for w, _ in self.colors[a - 1])

    def rows(self, a: int) -> tuple[Row, ...]:
        return self.colors[a - 1]

    def ascending_rows(self, a: int) -> tuple[Row, ...]:
        return tuple(sorted(self.colors[a - 1]))

    def vacancy(self, a: int, j: int) -> int:
        return (
            partial_sum(self.lengths(a - 1), j)
            - 2 * partial_sum(self.lengths(a), j)
            + partial_sum(self.lengths(a + 1), j)
        )

    def box_count(self) -> int:
        return sum(self.quantum) + sum(sum(self.lengths(a)) for a in range(1, self.n + 1))


@dataclass(frozen=True)
class VacancyTable:
    """Partial sums E^(a)_j and vacancy numbers p^(a)_j for j = 1..max_length."""

    sums: dict[tuple[int, int], int]
    vacancies: dict[tuple[int, int], int]
    max_length: int

    def p(self, a: int, j: int) -> int:
        return self.vacancies[(a, min(j, self.max_length))]

    def E(self, a: int, j: int) -> int:
        return self.sums[(a, min(j, self.max_length))]


def vacancy_table(rc: RiggedConfiguration) -> VacancyTable:
    """Compute E^(a)_j for a = 0..n+1 and p^(a)_j for a = 1..n."""

    everything = [w for a in range(rc.n + 1) for w in rc.lengths(a)]
    max_length = max(everything, default=1)
    sums = {
        (a, j): partial_sum(rc.lengths(a), j)
        for a in range(rc.n + 2)
        for j in range(1, max_length + 1)
    }
    vacancies = {
        (a, j): sums[(a - 1, j)] - 2 * sums[(a, j)] + sums[(a + 1, j)]
        for a in range(1, rc.n + 1)
        for j in range(1, max_length + 1)
    }
    return VacancyTable(sums, vacancies, max_length)


def validate(rc: RiggedConfiguration) -> Validity:
    """Classify ``rc`` as restricted, unrestricted-only or invalid."""

    table = vacancy_table(rc)
    restricted = True
    for a in range(1, rc.n + 1):
        for length, rigging in rc.rows(a):
            vacancy = table.p(a, length)
            if rigging > vacancy:
                return Validity.INVALID
            if rigging < 0:
                restricted = False
    return Validity.RESTRICTED if restricted else Validity.UNRESTRICTED


def charge(rc: RiggedConfiguration) -> int:
    """Return c(mu, r) built from the A_n Cartan matrix."""

    value = sum(pair_min(rc.lengths(a), rc.lengths(a)) for a in range(1, rc.n + 1))
    value -= sum(pair_min(rc.lengths(a), rc.lengths(a + 1)) for a in range(1, rc.n))
    value -= pair_min(rc.lengths(0), rc.lengths(1))
    value += sum(r for a in range(1, rc.n + 1) for _, r in rc.rows(a))
    return value


def concat(first: RiggedConfiguration, second: RiggedConfiguration) -> RiggedConfiguration:
    """Merge two rigged configurations so that the paths are tensored in order."""

    if (first.n, first.floor) != (second.n, second.floor):
        raise BoxBallError("cannot concatenate rigged configurations of different rank")
    for rc in (first, second):
        if validate(rc) is not Validity.RESTRICTED:
            raise BoxBallError("concatenation needs restricted rigged configurations")
    table = vacancy_table(first)
    colors = tuple(
        first.rows(a) + tuple((w, r + table.p(a, w)) for w, r in second.rows(a))
        for a in range(1, first.n + 1)
    )
    return RiggedConfiguration(first.n, first.quantum + second.quantum, colors, first.floor)


def shift_riggings(
    rc: RiggedConfiguration, color: int, amount: Callable[[int], int]
) -> RiggedConfiguration:
    """Add ``amount(length)`` to every rigging of ``color``."""

    colors = list(rc.colors)
    colors[color - 1] = tuple((w, r + amount(w)) for w, r in rc.rows(color))
    return RiggedConfiguration(rc.n, rc.quantum, tuple(colors), rc.floor)


def truncate(rc: RiggedConfiguration, a: int) -> RiggedConfiguration:
    """Promote mu^(a) to the quantum space of a rank n-a configuration above floor a."""

    if not 0 <= a < rc.n:
        raise BoxBallError(f"truncation level {a} out of range 0..{rc.n - 1}")
    if a == 0:
        return rc
    quantum = tuple(w for w, _ in rc.ascending_rows(a))
    return RiggedConfiguration(rc.n - a, quantum, rc.colors[a:], rc.floor + a)


def partitions(total: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield the partitions of ``total`` in weakly decreasing order."""

    largest = total if largest is None else largest
    if total == 0:
        yield ()
        return
    for part in range(min(total, largest), 0, -1):
        for rest in partitions(total - part, part):
            yield (part, *rest)


def _rigging_choices(
    rc: RiggedConfiguration, a: int
) -> list[list[tuple[Row, ...]]] | None:
    groups = []
    for length, count in sorted(Counter(rc.lengths(a)).items()):
        vacancy = rc.vacancy(a, length)
        if vacancy < 0:
            return None
        groups.append(
            [
                tuple((length, r) for r in riggings)
                for riggings in itertools.combinations_with_replacement(range(vacancy + 1), count)
            ]
        )
    return groups


def enumerate_rigged_configurations(
    n: int, quantum: Sequence[int], sizes: Sequence[int], *, floor: int = 0
) -> Iterator[RiggedConfiguration]:
    """Yield every restricted configuration with quantum space and color sizes |mu^(a)|."""

    if len(sizes) != n:
        raise BoxBallError(f"expected {n} color sizes, got {len(sizes)}")
    for shapes in itertools.product(*(partitions(size) for size in sizes)):
        skeleton = RiggedConfiguration(
            n, tuple(quantum), tuple(tuple((w, 0) for w in shape) for shape in shapes), floor
        )
        per_color = []
        for a in range(1, n + 1):
            groups = _rigging_choices(skeleton, a)
            if groups is None:
                break
            per_color.append([sum(choice, ()) for choice in itertools.product(*groups)])
        else:
            for colors in itertools.product(*per_color):
                yield RiggedConfiguration(n, tuple(quantum), tuple(colors), floor)
