"""Crystals B_l of type A_n^(1), tensor products and the combinatorial R."""

from __future__ import annotations

import logging
import random
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from typing import Literal

from .errors import BoxBallError

logger = logging.getLogger(__name__)

KashiwaraOp = Literal["e", "f"]
RMethod = Literal["formula", "graphical"]


@dataclass(frozen=True)
class CrystalElement:
    """An element of B_l stored as its occupancy vector (x_1, ..., x_{n+1})."""

    x: tuple[int, ...]
    floor: int = 0

    def __post_init__(self) -> None:
        if len(self.x) < 2:
            raise BoxBallError(f"occupancy vector needs at least two entries: {self.x}")
        if any(value < 0 for value in self.x):
            raise BoxBallError(f"occupancy vector has a negative entry: {self.x}")
        if not 0 <= self.floor < len(self.x):
            raise BoxBallError(f"floor {self.floor} out of range for rank {self.rank}")
        if any(self.x[: self.floor]):
            raise BoxBallError(f"letters at or below floor {self.floor} in {self.x}")

    @property
    def rank(self) -> int:
        return len(self.x) - 1

    @property
    def capacity(self) -> int:
        return sum(self.x)

    def word(self) -> tuple[int, ...]:
        """Return the row tableau as a weakly increasing letter sequence."""

        return tuple(letter for letter, count in enumerate(self.x, 1) for _ in range(count))

    def balls(self) -> int:
        return self.capacity - self.x[self.floor]

    def is_highest(self) -> bool:
        return self.x[self.floor] == self.capacity

    def with_floor(self, floor: int) -> CrystalElement:
        return CrystalElement(self.x, floor)


@dataclass(frozen=True)
class AffineElement:
    """An element b[d] of the affinization Aff(B_l)."""

    element: CrystalElement
    mode: int = 0


@dataclass(frozen=True)
class PrincipalElement:
    """An affine element in the principal picture: theta_0..theta_n plus the capacity."""

    capacity: int
    window: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.window) - 1

    def theta(self, i: int) -> int:
        period, index = divmod(i, len(self.window))
        return self.window[index] - self.capacity * period


@dataclass(frozen=True)
class RImage:
    """Result of one application of the combinatorial R."""

    left: CrystalElement | AffineElement
    right: CrystalElement | AffineElement
    energy: int
    nonwinding: tuple[int, ...]


@dataclass(frozen=True)
class Path:
    """A state p_1 (x) ... (x) p_L; all factors share rank and floor."""

    factors: tuple[CrystalElement, ...]
    n: int
    floor: int = 0

    def __post_init__(self) -> None:
        for factor in self.factors:
            if factor.rank != self.n or factor.floor != self.floor:
                raise BoxBallError(
                    f"factor {factor.word()} does not match rank {self.n} and floor {self.floor}"
                )

    @classmethod
    def of(cls, factors: Iterable[CrystalElement]) -> Path:
        items = tuple(factors)
        if not items:
            raise BoxBallError("cannot infer the rank of an empty path")
        return cls(items, items[0].rank, items[0].floor)

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self) -> Iterator[CrystalElement]:
        return iter(self.factors)

    def __getitem__(self, index: int) -> CrystalElement:
        return self.factors[index]

    def prefix(self, k: int) -> Path:
        return Path(self.factors[:k], self.n, self.floor)

    def tensor(self, other: Path) -> Path:
        if (other.n, other.floor) != (self.n, self.floor):
            raise BoxBallError("cannot tensor paths of different rank or floor")
        return Path(self.factors + other.factors, self.n, self.floor)

    @property
    def capacities(self) -> tuple[int, ...]:
        return tuple(factor.capacity for factor in self.factors)

    def letter_counts(self) -> tuple[int, ...]:
        return tuple(sum(column) for column in zip(*(f.x for f in self.factors), strict=True))

    def ball_count(self) -> int:
        return sum(factor.balls() for factor in self.factors)

    def is_vacuum(self) -> bool:
        return all(factor.is_highest() for factor in self.factors)

    def local(self) -> Path:
        """Return the same path as a floor-0 path of the nested algebra A_{n-floor}."""

        factors = tuple(CrystalElement(f.x[self.floor :]) for f in self.factors)
        return Path(factors, self.n - self.floor)

    def raised(self, floor: int) -> Path:
        """Embed a floor-0 path into the algebra of rank n + floor above ``floor``."""

        if self.floor != 0:
            raise BoxBallError("only floor-0 paths can be raised")
        pad = (0,) * floor
        factors = tuple(CrystalElement(pad + f.x, floor) for f in self.factors)
        return Path(factors, self.n + floor, floor)


def make_element(n: int, word: str | Sequence[int], *, floor: int = 0) -> CrystalElement:
    """Build an element of B_l from a weakly increasing tableau word."""

    letters = [int(ch) for ch in word]
    if n < 1:
        raise BoxBallError(f"rank must be positive: {n}")
    if any(b < a for a, b in zip(letters, letters[1:], strict=False)):
        raise BoxBallError(f"tableau word is not weakly increasing: {word}")
    x = [0] * (n + 1)
    for letter in letters:
        if not floor + 1 <= letter <= n + 1:
            raise BoxBallError(f"letter {letter} out of range {floor + 1}..{n + 1}")
        x[letter - 1] += 1
    return CrystalElement(tuple(x), floor)


def element_from_vector(vector: Sequence[int], *, floor: int = 0) -> CrystalElement:
    return CrystalElement(tuple(int(v) for v in vector), floor)


def highest(n: int, capacity: int, *, floor: int = 0) -> CrystalElement:
    """Return u_l, the element filled with the smallest letter allowed by ``floor``."""

    x = [0] * (n + 1)
    x[floor] = capacity
    return CrystalElement(tuple(x), floor)


def path_from_words(n: int, words: Iterable[str | Sequence[int]], *, floor: int = 0) -> Path:
    return Path(tuple(make_element(n, word, floor=floor) for word in words), n, floor)


def vacuum_path(n: int, capacities: Iterable[int], *, floor: int = 0) -> Path:
    return Path(tuple(highest(n, c, floor=floor) for c in capacities), n, floor)


def _source_target(i: int, size: int) -> tuple[int, int]:
    # e_i moves a box from letter i+1 to letter i, letters read mod n+1.
    return i % size, (i - 1) % size


def epsilon(i: int, element: CrystalElement) -> int:
    return element.x[_source_target(i, len(element.x))[0]]


def phi(i: int, element: CrystalElement) -> int:
    return element.x[_source_target(i, len(element.x))[1]]


def _apply_element(op: KashiwaraOp, i: int, element: CrystalElement) -> CrystalElement | None:
    source, target = _source_target(i, len(element.x))
    if op == "f":
        source, target = target, source
    if element.x[source] == 0:
        return None
    x = list(element.x)
    x[source] -= 1
    x[target] += 1
    if any(x[: element.floor]):
        return None
    return CrystalElement(tuple(x), element.floor)


def signature(i: int, path: Path) -> tuple[int, int]:
    """Return (epsilon_i, phi_i) of the whole path under the tensor product rule."""

    eps, ph = 0, 0
    for factor in path:
        e, f = epsilon(i, factor), phi(i, factor)
        eps, ph = eps + max(0, e - ph), f + max(0, ph - e)
    return eps, ph


def apply_kashiwara(
    op: KashiwaraOp, i: int, target: CrystalElement | Path
) -> CrystalElement | Path | None:
    """Apply e_i or f_i; ``None`` stands for annihilation."""

    if op not in ("e", "f"):
        raise BoxBallError(f"unknown Kashiwara operator: {op}")
    if isinstance(target, CrystalElement):
        if not 0 <= i <= target.rank:
            raise BoxBallError(f"index {i} out of range 0..{target.rank}")
        return _apply_element(op, i, target)

    if not 0 <= i <= target.n:
        raise BoxBallError(f"index {i} out of range 0..{target.n}")
    if not target.factors:
        return None
    prefix_phi = [0]
    for factor in target.factors[:-1]:
        e, f = epsilon(i, factor), phi(i, factor)
        prefix_phi.append(f + max(0, prefix_phi[-1] - e))
    j = len(target) - 1
    while j > 0:
        left_phi, right_eps = prefix_phi[j], epsilon(i, target[j])
        acts_left = left_phi >= right_eps if op == "e" else left_phi > right_eps
        if not acts_left:
            break
        j -= 1
    image = _apply_element(op, i, target[j])
    if image is None:
        return None
    factors = list(target.factors)
    factors[j] = image
    return Path(tuple(factors), target.n, target.floor)


def is_highest(path: Path) -> bool:
    """Return True when e_i annihilates the path for every i above the floor."""

    return all(
        apply_kashiwara("e", i, path) is None for i in range(path.floor + 1, path.n + 1)
    )


def nonwinding_numbers(left: CrystalElement, right: CrystalElement) -> tuple[int, ...]:
    """Return Q_0, ..., Q_n of left (x) right."""

    xs, ys = left.x, right.x
    size = len(xs)
    numbers = []
    for i in range(size):
        tail = sum(ys[(i + j - 1) % size] for j in range(2, size + 1))
        head = 0
        best = tail
        for k in range(2, size + 1):
            head += xs[(i + k - 2) % size]
            tail -= ys[(i + k - 1) % size]
            best = min(best, head + tail)
        numbers.append(best)
    return tuple(numbers)


def _check_pair(left: CrystalElement, right: CrystalElement) -> None:
    if left.rank != right.rank or left.floor != right.floor:
        raise BoxBallError(
            f"rank/floor mismatch: ({left.rank}, {left.floor}) vs ({right.rank}, {right.floor})"
        )


def r_matrix(left: CrystalElement, right: CrystalElement) -> RImage:
    """Classical combinatorial R on left (x) right, with energy and non-winding numbers."""

    _check_pair(left, right)
    q = nonwinding_numbers(left, right)
    size = len(q)
    x, y = left.x, right.x
    new_left = tuple(y[t] + q[t] - q[(t + 1) % size] for t in range(size))
    new_right = tuple(x[t] + q[(t + 1) % size] - q[t] for t in range(size))
    energy = min(left.capacity, right.capacity) - q[0]
    return RImage(
        CrystalElement(new_left, left.floor),
        CrystalElement(new_right, left.floor),
        energy,
        q,
    )


def graphical_r_matrix(
    left: CrystalElement, right: CrystalElement, *, rng: random.Random | None = None
) -> RImage:
    """Combinatorial R by pairing dots of two columns and counting border crossings.

    Rows are numbered 1..n+1 from the top; border i separates rows i and i+1 and border
    n+1 is the wrap-around. With ``rng`` the dots of the scanned column are paired in a
    random order instead of the sweep order.
    """

    _check_pair(left, right)
    size = len(left.x)
    crossings = [0] * (size + 1)
    k, m = left.capacity, right.capacity

    def cross(first: int, last: int) -> None:
        for border in range(first, last + 1):
            crossings[border] += 1

    if k >= m:
        pool = list(left.x)
        dots = [row for row in range(size, 0, -1) for _ in range(right.x[row - 1])]
        if rng is not None:
            rng.shuffle(dots)
        paired = [0] * size
        for b in dots:
            above = [a for a in range(1, b) if pool[a - 1] > 0]
            if above:
                a = above[-1]
                cross(a, b - 1)
            else:
                a = max(row for row in range(1, size + 1) if pool[row - 1] > 0)
                cross(1, b - 1)
                cross(size, size)
                cross(a, size - 1)
            pool[a - 1] -= 1
            paired[a - 1] += 1
        new_left = tuple(paired)
        new_right = tuple(y + rest for y, rest in zip(right.x, pool, strict=True))
    else:
        pool = list(right.x)
        dots = [row for row in range(1, size + 1) for _ in range(left.x[row - 1])]
        if rng is not None:
            rng.shuffle(dots)
        paired = [0] * size
        for a in dots:
            below = [b for b in range(a + 1, size + 1) if pool[b - 1] > 0]
            if below:
                b = below[0]
                cross(a, b - 1)
            else:
                b = min(row for row in range(1, size + 1) if pool[row - 1] > 0)
                cross(a, size - 1)
                cross(size, size)
                cross(1, b - 1)
            pool[b - 1] -= 1
            paired[b - 1] += 1
        new_left = tuple(x + rest for x, rest in zip(left.x, pool, strict=True))
        new_right = tuple(paired)

    smaller = min(k, m)
    q = tuple(smaller - crossings[i if i else size] for i in range(size))
    return RImage(
        CrystalElement(new_left, left.floor),
        CrystalElement(new_right, left.floor),
        crossings[size],
        q,
    )


def combinatorial_R(
    left: AffineElement,
    right: AffineElement,
    *,
    method: RMethod = "formula",
    rng: random.Random | None = None,
) -> RImage:
    """Map x[d] (x) y[e] to y~[e - H] (x) x~[d + H]."""

    if method == "formula":
        image = r_matrix(left.element, right.element)
    elif method == "graphical":
        image = graphical_r_matrix(left.element, right.element, rng=rng)
    else:
        raise BoxBallError(f"unknown R method: {method}")
    return RImage(
        AffineElement(image.left, right.mode - image.energy),
        AffineElement(image.right, left.mode + image.energy),
        image.energy,
        image.nonwinding,
    )


def energy(left: CrystalElement, right: CrystalElement) -> int:
    return r_matrix(left, right).energy


def dynkin_sigma(target: CrystalElement | Path) -> CrystalElement | Path:
    """Rotate letters cyclically: (x_1, ..., x_{n+1}) -> (x_2, ..., x_{n+1}, x_1)."""

    if target.floor != 0:
        raise BoxBallError("the Dynkin automorphism needs floor 0")
    if isinstance(target, CrystalElement):
        return CrystalElement(target.x[1:] + target.x[:1])
    return Path(tuple(dynkin_sigma(f) for f in target.factors), target.n)


def principal_convert(affine: AffineElement) -> PrincipalElement:
    """Return theta_i = d - x_1 - ... - x_i for 0 <= i <= n."""

    window = [affine.mode]
    for value in affine.element.x[:-1]:
        window.append(window[-1] - value)
    return PrincipalElement(affine.element.capacity, tuple(window))


def principal_to_affine(theta: PrincipalElement, *, floor: int = 0) -> AffineElement:
    size = len(theta.window)
    x = tuple(theta.theta(i - 1) - theta.theta(i) for i in range(1, size + 1))
    if any(value < 0 for value in x):
        raise BoxBallError(f"principal window is not weakly decreasing: {theta.window}")
    return AffineElement(CrystalElement(x, floor), theta.window[0])


def phase_shifts(theta: PrincipalElement, other: PrincipalElement) -> tuple[int, ...]:
    """Return S_0, ..., S_n of theta (x) other, read off the principal coordinates."""

    size = len(theta.window)
    twice = 2 * min(theta.capacity, other.capacity)
    shifts = []
    for i in range(size):
        gap = min(other.theta(i + k) - theta.theta(i + k - 1) for k in range(1, size + 1))
        shifts.append(twice - theta.theta(i) + other.theta(i + size) - gap)
    return tuple(shifts)


def principal_R(
    theta: PrincipalElement, other: PrincipalElement
) -> tuple[PrincipalElement, PrincipalElement, tuple[int, ...]]:
    """Map (theta_i) (x) (theta'_i) to (theta'_i - S_i) (x) (theta_i + S_i)."""

    shifts = phase_shifts(theta, other)
    new_left = tuple(t - s for t, s in zip(other.window, shifts, strict=True))
    new_right = tuple(t + s for t, s in zip(theta.window, shifts, strict=True))
    return (
        PrincipalElement(other.capacity, new_left),
        PrincipalElement(theta.capacity, new_right),
        shifts,
    )


def transport_left(
    factors: Sequence[CrystalElement], index: int, *, stop: int = 0
) -> tuple[CrystalElement, list[RImage]]:
    """Carry factors[index] leftward to position ``stop`` through the original factors.

    Returns the arriving element and the R images in the order the swaps happen
    (positions index-1 down to stop).
    """

    moving = factors[index]
    images = []
    for j in range(index - 1, stop - 1, -1):
        image = r_matrix(factors[j], moving)
        images.append(image)
        moving = image.left
    return moving, images


def extract(
    factors: Sequence[CrystalElement], indices: Iterable[int]
) -> tuple[list[CrystalElement], list[CrystalElement]]:
    """Move the factors at ``indices`` (ascending) to the front, in order, by R.

    Returns the extracted elements and the remaining sequence.
    """

    current = list(factors)
    chosen = sorted(indices)
    for alpha, j in enumerate(chosen):
        for position in range(j, alpha, -1):
            image = r_matrix(current[position - 1], current[position])
            current[position - 1], current[position] = image.left, image.right
    count = len(chosen)
    return current[:count], current[count:]
