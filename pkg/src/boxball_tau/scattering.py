"""Scattering data, vertex operators, N-soliton tau functions and the IVP solver."""

from __future__ import annotations

import itertools
import logging
import math
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .bbs import Capacity
from .config import MAX_NORMAL_ORDER_FACTORS
from .crystal import (
    AffineElement,
    CrystalElement,
    Path,
    PrincipalElement,
    combinatorial_R,
    extract,
    highest,
    principal_convert,
    principal_R,
    r_matrix,
    transport_left,
    vacuum_path,
)
from .errors import BoxBallError
from .kkr import kkr_to_path, unrestricted_from_path
from .rigged import (
    RiggedConfiguration,
    Validity,
    pair_min,
    shift_riggings,
    truncate,
    validate,
)
from .tau import TauEvaluator, TauTable, reconstruct_path, tau_table, with_base_column

logger = logging.getLogger(__name__)

Formula = Literal["subset", "mode", "principal"]
FORMULAS: tuple[Formula, ...] = ("subset", "mode", "principal")


@dataclass(frozen=True)
class ScatteringData:
    """A sequence of affine elements b_1[d_1] (x) ... (x) b_N[d_N]."""

    factors: tuple[AffineElement, ...]

    @property
    def modes(self) -> tuple[int, ...]:
        return tuple(factor.mode for factor in self.factors)

    @property
    def elements(self) -> tuple[CrystalElement, ...]:
        return tuple(factor.element for factor in self.factors)

    def is_normal_ordered(self) -> bool:
        modes = self.modes
        return all(a <= b for a, b in zip(modes, modes[1:], strict=False))

    def sort_key(self) -> tuple:
        return self.modes, tuple(element.word() for element in self.elements)


def compute_modes(
    labels: Path | Sequence[CrystalElement],
    riggings: Sequence[int],
    *,
    vacuum: int | None = None,
) -> ScatteringData:
    """Attach d_i = r_i + sum_{0 <= k < i} H(b_k (x) b_i^(k+1)) with b_0 a long vacuum row."""

    factors = list(labels)
    if len(factors) != len(riggings):
        raise BoxBallError(f"{len(factors)} labels but {len(riggings)} riggings")
    if not factors:
        return ScatteringData(())
    first = factors[0]
    size = vacuum or max(f.capacity for f in factors) + 1
    sequence = [highest(first.rank, size, floor=first.floor), *factors]
    modes = []
    for i in range(1, len(sequence)):
        _, images = transport_left(sequence, i)
        modes.append(riggings[i - 1] + sum(image.energy for image in images))
    return ScatteringData(
        tuple(AffineElement(b, d) for b, d in zip(factors, modes, strict=True))
    )


def normal_order(data: ScatteringData) -> tuple[ScatteringData, ...]:
    """Return every normal-ordered form of ``data``, sorted by modes then labels.

    All reorderings reachable by R are collected; then, from the last position down to
    the second, only the forms with the largest mode there are kept.
    """

    size = len(data.factors)
    if size > MAX_NORMAL_ORDER_FACTORS:
        raise BoxBallError(f"normal ordering is limited to {MAX_NORMAL_ORDER_FACTORS} factors")
    start = data.factors
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for position in range(size - 1):
            image = combinatorial_R(current[position], current[position + 1])
            following = (
                current[:position] + (image.left, image.right) + current[position + 2 :]
            )
            if following not in seen:
                seen.add(following)
                queue.append(following)
    candidates = list(seen)
    logger.debug("Reordering orbit of %d factors has %d elements", size, len(candidates))
    for position in range(size - 1, 0, -1):
        best = max(candidate[position].mode for candidate in candidates)
        candidates = [c for c in candidates if c[position].mode == best]
    forms = sorted((ScatteringData(c) for c in candidates), key=ScatteringData.sort_key)
    return tuple(forms)


def map_C(a: int, labels: Path, riggings: Sequence[int]) -> ScatteringData:
    """Return the canonical normal-ordered scattering data of a level-a path."""

    if labels.floor != a:
        raise BoxBallError(f"level {a} labels must sit above floor {a}, got {labels.floor}")
    return normal_order(compute_modes(labels, riggings))[0]


def vertex_operator(b: CrystalElement, path: Path) -> Path:
    """Carry b through the path; the element leaving on the right must be highest."""

    carrier = b
    factors = []
    for factor in path:
        image = r_matrix(carrier, factor)
        factors.append(image.left)
        carrier = image.right
    if not carrier.is_highest():
        raise BoxBallError(f"vertex operator for {b.word()} did not release a highest element")
    return Path(tuple(factors), path.n, path.floor)


def map_Phi(data: ScatteringData, quantum: Sequence[int], *, n: int, floor: int) -> Path:
    """Inject normal-ordered data into the vacuum of ``quantum`` one floor lower.

    Applies Phi_{b_N} first, then Phi_a^{d_N - d_{N-1}}, ..., Phi_{b_1} and finally
    Phi_a^{d_1}, where Phi_a carries the single letter of the vacuum one floor below.
    """

    target = floor - 1
    if target < 0:
        raise BoxBallError("vertex operators need data above floor 0")
    modes = (0, *data.modes)
    if any(b < a for a, b in zip(modes, modes[1:], strict=False)):
        raise BoxBallError(f"scattering data is not normal ordered: modes {data.modes}")
    path = vacuum_path(n, quantum, floor=target)
    letter = highest(n, 1, floor=target)
    for index in range(len(data.factors) - 1, -1, -1):
        path = vertex_operator(data.factors[index].element.with_floor(target), path)
        for _ in range(modes[index + 1] - modes[index]):
            path = vertex_operator(letter, path)
    return path


def kkr_vertex_levels(rc: RiggedConfiguration) -> dict[int, Path]:
    """Return the paths p^(a), a = n..0, of the vertex-operator form of the KKR map."""

    if validate(rc) is not Validity.RESTRICTED:
        raise BoxBallError("the vertex KKR map needs a restricted rigged configuration")
    n, base = rc.n, rc.floor
    rank = n + base
    rows = rc.ascending_rows(n)
    current = Path(
        tuple(highest(rank, w, floor=base + n) for w, _ in rows), rank, base + n
    )
    riggings = [r for _, r in rows]
    levels = {n: current}
    for a in range(n, 0, -1):
        data = map_C(base + a, current, riggings)
        if a > 1:
            lower = rc.ascending_rows(a - 1)
            quantum = [w for w, _ in lower]
            riggings = [r for _, r in lower]
        else:
            quantum = list(rc.quantum)
        current = map_Phi(data, quantum, n=rank, floor=base + a)
        levels[a - 1] = current
    return levels


def kkr_vertex(rc: RiggedConfiguration) -> Path:
    """Return the highest path of ``rc`` through alternating C^(a) and Phi^(a)."""

    return kkr_vertex_levels(rc)[0]


def label_path(rc: RiggedConfiguration) -> Path:
    """Return the level-1 path b_1 (x) ... (x) b_N whose configuration is truncate(rc, 1)."""

    rank = rc.n + rc.floor
    floor = rc.floor + 1
    if rc.n == 1:
        lengths = [w for w, _ in rc.ascending_rows(1)]
        return Path(tuple(highest(rank, w, floor=floor) for w in lengths), rank, floor)
    nested = truncate(rc, 1)
    if validate(nested) is Validity.RESTRICTED:
        return kkr_to_path(nested)
    return reconstruct_path(tau_table(nested), floor=nested.floor)


def scattering_data(path: Path) -> tuple[ScatteringData, ...]:
    """Return every normal-ordered scattering datum of a state."""

    rc = unrestricted_from_path(path)
    labels = label_path(rc)
    riggings = [r for _, r in rc.ascending_rows(1)]
    return normal_order(compute_modes(labels, riggings))


@dataclass(frozen=True)
class SolitonSpec:
    """Amplitudes, labels b_j above floor 1 and positions r_j of N solitons."""

    n: int
    labels: tuple[CrystalElement, ...]
    positions: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.positions):
            raise BoxBallError("every soliton needs one label and one position")
        for label in self.labels:
            if label.rank != self.n or label.floor != 1:
                raise BoxBallError(f"soliton label {label.word()} must be a level-1 element")
        keys = list(zip(self.amplitudes, self.positions, strict=True))
        if keys != sorted(keys):
            raise BoxBallError(
                "solitons must be sorted by amplitude, and by position among equal amplitudes"
            )

    @property
    def amplitudes(self) -> tuple[int, ...]:
        return tuple(label.capacity for label in self.labels)

    def __len__(self) -> int:
        return len(self.labels)


class PhaseTable:
    """Extracted elements and phases per subset J of solitons, filled lazily."""

    def __init__(self, spec: SolitonSpec, *, vacuum: int | None = None):
        self.spec = spec
        size = vacuum or max(spec.amplitudes, default=0) + 1
        self.ground = highest(spec.n, size, floor=1)
        factors = list(spec.labels)
        self.leading = [transport_left(factors, j)[0] for j in range(len(factors))]
        full = self._shifted(factors, range(len(factors)))
        self.initial = [
            principal_convert(AffineElement(label, theta))
            for label, theta in zip(factors, full, strict=True)
        ]
        self._extracted: dict[tuple[int, ...], list[CrystalElement]] = {}
        self._principal: dict[tuple[int, ...], list[PrincipalElement]] = {}

    def _shifted(self, elements: Sequence[CrystalElement], owners: Sequence[int]) -> list[int]:
        # r_j plus the color n+1 phase shifts picked up on the way to the far left.
        sequence = [self.ground, *elements]
        modes = []
        for alpha, j in enumerate(owners):
            _, images = transport_left(sequence, alpha + 1)
            shift = sum(
                2 * min(image.left.capacity, image.right.capacity) - image.nonwinding[0]
                for image in images
            )
            modes.append(self.spec.positions[j] + shift)
        return modes

    def extracted(self, subset: tuple[int, ...]) -> list[CrystalElement]:
        if subset not in self._extracted:
            self._extracted[subset] = extract(self.spec.labels, subset)[0]
        return self._extracted[subset]

    def mode_phases(self, subset: tuple[int, ...]) -> list[int]:
        return self._shifted(self.extracted(subset), subset)

    def principal(self, subset: tuple[int, ...]) -> list[PrincipalElement]:
        if subset not in self._principal:
            current = list(self.initial)
            for alpha, j in enumerate(subset):
                for position in range(j, alpha, -1):
                    left, right, _ = principal_R(current[position - 1], current[position])
                    current[position - 1], current[position] = left, right
            self._principal[subset] = current[: len(subset)]
        return self._principal[subset]


def _overlap(background: Sequence[int], k: int, amplitude: int) -> int:
    return sum(min(c, amplitude) for c in background[:k])


def _dual_energy(elements: Sequence[CrystalElement], i: int) -> int:
    size = elements[0].rank + 1 if elements else 1
    total = 0
    for m in range(1, len(elements)):
        _, images = transport_left(elements, m)
        total += sum(image.nonwinding[i % size] for image in images)
    return total


def _subset_value(
    phases: PhaseTable, subset: tuple[int, ...], k: int, i: int, background: Sequence[int]
) -> int:
    spec = phases.spec
    n = spec.n
    value = 0
    for j in subset:
        b = phases.leading[j].x
        bracket = sum(b[t - 1] for t in range(i + 1, n + 2)) + b[1]
        amplitude = spec.amplitudes[j]
        value += _overlap(background, k, amplitude) - spec.positions[j] - bracket
    pairs = sum(
        min(spec.amplitudes[p], spec.amplitudes[q]) for p, q in itertools.combinations(subset, 2)
    )
    return value - 2 * pairs + _dual_energy(phases.extracted(subset), i)


def _mode_value(
    phases: PhaseTable, subset: tuple[int, ...], k: int, i: int, background: Sequence[int]
) -> int:
    spec = phases.spec
    extracted = phases.extracted(subset)
    value = 0
    for j, element, shifted in zip(subset, extracted, phases.mode_phases(subset), strict=True):
        gained = sum(element.x[1:i])
        value += _overlap(background, k, spec.amplitudes[j]) - shifted + gained
    return value


def _principal_value(
    phases: PhaseTable, subset: tuple[int, ...], k: int, i: int, background: Sequence[int]
) -> int:
    spec = phases.spec
    return sum(
        _overlap(background, k, spec.amplitudes[j]) - theta.theta(i)
        for j, theta in zip(subset, phases.principal(subset), strict=True)
    )


_EVALUATORS = {
    "subset": _subset_value,
    "mode": _mode_value,
    "principal": _principal_value,
}


def _check_color(spec: SolitonSpec, i: int) -> None:
    if not 1 <= i <= spec.n + 1:
        raise BoxBallError(f"color {i} out of range 1..{spec.n + 1}")


def nsoliton_tau(
    spec: SolitonSpec,
    k: int,
    i: int,
    *,
    formula: Formula = "principal",
    background: Sequence[int] | None = None,
    phases: PhaseTable | None = None,
) -> int:
    """Return tau_{k,i} of an N-soliton state as a max over subsets of solitons."""

    _check_color(spec, i)
    if formula not in _EVALUATORS:
        raise BoxBallError(f"unknown N-soliton formula: {formula}")
    background = (1,) * k if background is None else tuple(background)
    phases = phases or PhaseTable(spec)
    evaluate = _EVALUATORS[formula]
    best = 0
    for size in range(1, len(spec) + 1):
        for subset in itertools.combinations(range(len(spec)), size):
            best = max(best, evaluate(phases, subset, k, i, background))
    return best


def nsoliton_table(
    spec: SolitonSpec,
    length: int,
    *,
    formula: Formula = "principal",
    background: Sequence[int] | None = None,
) -> TauTable:
    background = (1,) * length if background is None else tuple(background)
    phases = PhaseTable(spec)
    values = np.zeros((length + 1, spec.n + 2), dtype=np.int64)
    for k in range(1, length + 1):
        for i in range(1, spec.n + 2):
            values[k, i] = nsoliton_tau(
                spec, k, i, formula=formula, background=background, phases=phases
            )
    return TauTable(with_base_column(values, background), background, "tau")


def nsoliton_state(
    spec: SolitonSpec, length: int, *, formula: Formula = "principal"
) -> Path:
    """Return the state of ``length`` single boxes carrying the solitons of ``spec``."""

    return reconstruct_path(nsoliton_table(spec, length, formula=formula))


def spec_configuration(
    spec: SolitonSpec, length: int, *, background: Sequence[int] | None = None
) -> RiggedConfiguration:
    """Return the (unrestricted) configuration (lambda, (mu, r), nested colors of the labels)."""

    background = (1,) * length if background is None else tuple(background)
    first = tuple(zip(spec.amplitudes, spec.positions, strict=True))
    if spec.n == 1 or not spec.labels:
        nested: tuple = tuple(() for _ in range(spec.n - 1))
    else:
        labels = Path(spec.labels, spec.n, 1)
        nested = unrestricted_from_path(labels).colors
    return RiggedConfiguration(spec.n, background, (first, *nested))


def _shift_amount(schedule: Sequence[Capacity]):
    def amount(length: int) -> int:
        return sum(length if math.isinf(c) else min(int(c), length) for c in schedule)

    return amount


def solve_ivp(path: Path, schedule: Sequence[Capacity]) -> Path:
    """Return T_{l_t} ... T_{l_1}(p) through the linearized color-1 riggings."""

    rc = unrestricted_from_path(path)
    evolved = shift_riggings(rc, 1, _shift_amount(schedule))
    return reconstruct_path(tau_table(evolved), floor=path.floor)


@dataclass(frozen=True)
class AsymptoticState:
    """A well-separated soliton state with the boundaries k_{M,1} >= ... >= k_{M,n+1}."""

    path: Path
    positions: tuple[tuple[int, ...], ...]

    @property
    def gaps(self) -> tuple[int, ...]:
        return tuple(
            following[-1] - current[0]
            for current, following in zip(self.positions, self.positions[1:], strict=False)
        )


def asymptotic_state(
    source: RiggedConfiguration | SolitonSpec, *, length: int | None = None
) -> AsymptoticState:
    """Place each soliton from the level-1 tau functions of a separated configuration."""

    if isinstance(source, SolitonSpec):
        if length is None:
            raise BoxBallError("an N-soliton spec needs the length of the state")
        rc = spec_configuration(source, length)
    else:
        rc = source
    if rc.floor != 0 or any(c != 1 for c in rc.quantum):
        raise BoxBallError("asymptotic states live on single-box floor-0 quantum spaces")
    n, total = rc.n, len(rc.quantum)
    rows = rc.ascending_rows(1)
    riggings = [r for _, r in rows]
    if any(b < a for a, b in zip(riggings, riggings[1:], strict=False)):
        raise BoxBallError(
            f"riggings {riggings} must weakly increase with the amplitude in the separated regime"
        )
    lengths = [w for w, _ in rows]
    evaluator = TauEvaluator(rc)
    level_one = [
        [evaluator.value(1, i, lengths[:m]) for i in range(1, n + 2)]
        for m in range(len(rows) + 1)
    ]
    positions = []
    for m, (amplitude, rigging) in enumerate(rows, 1):
        base = pair_min(lengths[:m], lengths[:m]) - pair_min(lengths[: m - 1], lengths[: m - 1])
        positions.append(
            tuple(
                base + rigging + level_one[m - 1][i - 1] - level_one[m][i - 1]
                for i in range(1, n + 2)
            )
        )
        boundary = positions[-1]
        if any(a < b for a, b in zip(boundary, boundary[1:], strict=False)):
            raise BoxBallError(f"soliton {m} is not in the separated regime")
        if boundary[0] - boundary[-1] != amplitude:
            raise BoxBallError(f"soliton {m} overlaps its neighbours")
    letters = [1] * total
    for m, boundary in enumerate(positions):
        if boundary[-1] < 0 or boundary[0] > total:
            raise BoxBallError(f"soliton {m + 1} does not fit in {total} boxes")
        if m and positions[m - 1][0] > boundary[-1]:
            raise BoxBallError(f"solitons {m} and {m + 1} are not separated")
        for i in range(2, n + 2):
            for k in range(boundary[i - 1] + 1, boundary[i - 2] + 1):
                letters[k - 1] = i
    path = Path(tuple(CrystalElement(_unit(n, letter)) for letter in letters), n)
    if path != _configuration_path(rc):
        raise BoxBallError("solitons interact; the configuration is not separated")
    return AsymptoticState(path, tuple(positions))


def _configuration_path(rc: RiggedConfiguration) -> Path:
    validity = validate(rc)
    if validity is Validity.RESTRICTED:
        return kkr_to_path(rc)
    if validity is Validity.INVALID:
        raise BoxBallError("riggings exceed their vacancy numbers")
    return reconstruct_path(tau_table(rc))


def _unit(n: int, letter: int) -> tuple[int, ...]:
    x = [0] * (n + 1)
    x[letter - 1] = 1
    return tuple(x)
