"""Box-ball dynamics: carrier evolutions T_l, the K_i factorization of T_infinity."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .crystal import CrystalElement, Path, highest, r_matrix, vacuum_path
from .errors import BoxBallError

logger = logging.getLogger(__name__)

Capacity = int | float


@dataclass(frozen=True)
class EvolutionResult:
    """One application of T_l with the carrier left over and the local energies."""

    state: Path
    carrier_out: CrystalElement
    local_modes: tuple[int, ...]
    energy: int


@dataclass(frozen=True)
class EvolutionPattern:
    """Rows T_infinity^t(p) for t = 0..t_max."""

    rows: tuple[Path, ...]

    def occupancy(self) -> np.ndarray:
        """Return an int64 array of shape (rows, factors, n+1) of occupancy vectors."""

        return np.array([[factor.x for factor in row] for row in self.rows], dtype=np.int64)


def effective_capacity(path: Path, capacity: Capacity) -> int:
    """Replace an infinite carrier capacity by one that cannot saturate on ``path``."""

    if math.isinf(capacity):
        return path.ball_count() + 1
    if capacity < 1 or int(capacity) != capacity:
        raise BoxBallError(f"carrier capacity must be a positive integer or inf: {capacity}")
    return int(capacity)


def evolve_Tl(path: Path, capacity: Capacity, *, strict: bool = True) -> EvolutionResult:
    """Send u_l through the state: u_l (x) p = T_l(p) (x) v_l."""

    size = effective_capacity(path, capacity)
    carrier = highest(path.n, size, floor=path.floor)
    factors = []
    modes = []
    for factor in path:
        image = r_matrix(carrier, factor)
        factors.append(image.left)
        modes.append(image.energy)
        carrier = image.right
    if strict and not carrier.is_highest():
        raise BoxBallError(
            "carrier did not return to the vacuum; pad the state with vacuum factors"
        )
    energy = sum(min(c, size) for c in path.capacities) - sum(modes)
    return EvolutionResult(Path(tuple(factors), path.n, path.floor), carrier, tuple(modes), energy)


def row_energy(path: Path, capacity: Capacity) -> int:
    return evolve_Tl(path, capacity, strict=False).energy


def row_energies(path: Path, l_max: int) -> tuple[int, ...]:
    """Return E_1, ..., E_{l_max}."""

    return tuple(row_energy(path, size) for size in range(1, l_max + 1))


def soliton_content(path: Path) -> tuple[int, ...]:
    """Recover the amplitudes mu^(1) from E_l - E_{l-1} = #{j : mu^(1)_j >= l}."""

    energies = (0, *row_energies(path, path.ball_count() + 1))
    counts = [b - a for a, b in zip(energies, energies[1:], strict=False)]
    amplitudes = []
    for size, count in enumerate(counts, 1):
        following = counts[size] if size < len(counts) else 0
        amplitudes.extend([size] * (count - following))
    return tuple(sorted(amplitudes, reverse=True))


def carrier_Ki(path: Path, i: int, *, strict: bool = True) -> Path:
    """Move the color-i balls with a carrier that drops balls into empty boxes."""

    if path.floor != 0:
        raise BoxBallError("the K_i factorization works on floor-0 states")
    if not 2 <= i <= path.n + 1:
        raise BoxBallError(f"color {i} out of range 2..{path.n + 1}")
    carried = 0
    factors = []
    for factor in path:
        y = list(factor.x)
        empty, own = y[0], y[i - 1]
        carried, y[0], y[i - 1] = (
            own + max(carried - empty, 0),
            own + max(empty - carried, 0),
            min(carried, empty),
        )
        factors.append(CrystalElement(tuple(y)))
    if strict and carried:
        raise BoxBallError(f"{carried} balls of color {i} left the system")
    return Path(tuple(factors), path.n)


def evolve_Tinf(path: Path, *, strict: bool = True) -> Path:
    """Apply T_infinity as K_2 K_3 ... K_{n+1}, with K_{n+1} acting first."""

    for i in range(path.n + 1, 1, -1):
        path = carrier_Ki(path, i, strict=strict)
    return path


def max_amplitude(path: Path) -> int:
    return max(soliton_content(path), default=0)


def pad_state(path: Path, width: int) -> Path:
    """Append ``width`` single-box vacuum factors."""

    return path.tensor(vacuum_path(path.n, [1] * width, floor=path.floor))


def auto_pad_width(path: Path, t_max: int) -> int:
    return t_max * max_amplitude(path) + path.ball_count()


def evolution_pattern(
    path: Path,
    t_max: int,
    *,
    capacity: Capacity = math.inf,
    pad: int | str | None = None,
    strict: bool = True,
) -> EvolutionPattern:
    """Return the rows T_l^t(p) for t = 0..t_max, T_infinity by default."""

    if t_max < 0:
        raise BoxBallError(f"number of time steps must be nonnegative: {t_max}")
    if pad == "auto":
        pad = auto_pad_width(path, t_max)
    if pad:
        path = pad_state(path, int(pad))
    rows = [path]
    for _ in range(t_max):
        rows.append(evolve_Tl(rows[-1], capacity, strict=strict).state)
    logger.debug("Evolved %d factors for %d steps", len(path), t_max)
    return EvolutionPattern(tuple(rows))


def evolve_schedule(path: Path, schedule: Sequence[Capacity], *, strict: bool = True) -> Path:
    """Apply T_{l_1} first, then T_{l_2}, and so on."""

    for capacity in schedule:
        path = evolve_Tl(path, capacity, strict=strict).state
    return path
