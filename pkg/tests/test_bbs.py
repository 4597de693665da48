import itertools
import math
from functools import partial

import pytest

from boxball_tau.bbs import (
    auto_pad_width,
    carrier_Ki,
    effective_capacity,
    evolution_pattern,
    evolve_schedule,
    evolve_Tinf,
    evolve_Tl,
    pad_state,
    row_energies,
    row_energy,
    soliton_content,
)
from boxball_tau.crystal import is_highest, path_from_words, vacuum_path
from boxball_tau.errors import BoxBallError
from boxball_tau.kkr import kkr_from_path, unrestricted_from_path
from boxball_tau.rigged import shift_riggings
from boxball_tau.tau import corner_energy
from boxball_tau.verification import random_states

TAIL = ["1"] * 9

MIXED_ROWS = [
    ["11", "122", "2", "1333", "1", "1", "4", "1", *TAIL],
    ["11", "111", "1", "1222", "3", "3", "3", "4", *TAIL],
    ["11", "111", "1", "1111", "2", "2", "2", "3", "4", "3", "3", "1", "1", "1", "1", "1", "1"],
    ["11", "111", "1", "1111", "1", "1", "1", "2", "3", "2", "2", "4", "3", "3", "1", "1", "1"],
]

K_ROWS = [
    ["11", "122", "2", "1333", "1", "1", "1", "4", *TAIL],
    ["11", "122", "2", "1111", "3", "3", "3", "4", *TAIL],
]

THREE_SOLITONS = [
    "1111222211111133211143111111111111111111111111111111",
    "1111111122221111133211431111111111111111111111111111",
    "1111111111112222111133214311111111111111111111111111",
    "1111111111111111222211133243111111111111111111111111",
    "1111111111111111111122221132433111111111111111111111",
    "1111111111111111111111112221322433111111111111111111",
    "1111111111111111111111111112211322433211111111111111",
    "1111111111111111111111111111122111322143321111111111",
    "1111111111111111111111111111111221111322114332111111",
    "1111111111111111111111111111111112211111322111433211",
]


def _mixed(row):
    return path_from_words(3, row)


def _boxes(word, n=3):
    return path_from_words(n, list(word))


def test_evolution_pattern_under_T_infinity():
    pattern = evolution_pattern(_mixed(MIXED_ROWS[0]), 3)

    assert list(pattern.rows) == [_mixed(row) for row in MIXED_ROWS]
    assert pattern.occupancy().shape == (4, 17, 4)


def test_row_energies_are_conserved():
    for row in MIXED_ROWS[:3]:
        assert row_energies(_mixed(row), 5) == (3, 5, 7, 7, 7)


def test_soliton_content_reads_amplitudes_from_energies():
    assert soliton_content(_mixed(MIXED_ROWS[0])) == (3, 3, 1)
    assert soliton_content(_boxes(THREE_SOLITONS[0])) == (4, 3, 2)
    assert soliton_content(_boxes("1111")) == ()


def test_carrier_factorization_of_T_infinity():
    path = _mixed(MIXED_ROWS[0])

    first = carrier_Ki(path, 4)
    second = carrier_Ki(first, 3)
    third = carrier_Ki(second, 2)

    assert first == _mixed(K_ROWS[0])
    assert second == _mixed(K_ROWS[1])
    assert third == _mixed(MIXED_ROWS[1])
    assert evolve_Tinf(path) == third


def test_carrier_Ki_rejects_colors_out_of_range():
    with pytest.raises(BoxBallError, match="out of range"):
        carrier_Ki(_boxes("12"), 5)


def test_single_box_evolution_over_ten_steps():
    pattern = evolution_pattern(_boxes(THREE_SOLITONS[0]), 9)

    assert list(pattern.rows) == [_boxes(row) for row in THREE_SOLITONS]


def test_T_infinity_matches_K_factorization_on_single_boxes():
    for before, after in zip(THREE_SOLITONS, THREE_SOLITONS[1:], strict=False):
        assert evolve_Tinf(_boxes(before)) == _boxes(after)


def test_strict_evolution_requires_room_for_the_carrier():
    with pytest.raises(BoxBallError, match="pad the state"):
        evolve_Tl(_boxes("2", n=1), math.inf)

    result = evolve_Tl(_boxes("2", n=1), math.inf, strict=False)
    assert result.carrier_out.x == (1, 1)


def test_auto_padding_makes_room_for_every_step():
    path = _boxes("2", n=1)

    pattern = evolution_pattern(path, 2, pad="auto")

    assert auto_pad_width(path, 2) == 3
    assert list(pattern.rows) == [_boxes(w, n=1) for w in ("2111", "1211", "1121")]


def test_carriers_of_different_capacity_commute():
    path = pad_state(_mixed(MIXED_ROWS[0]), 10)

    one_then_two = evolve_schedule(path, [1, 2])
    two_then_one = evolve_schedule(path, [2, 1])

    assert one_then_two == two_then_one
    assert evolve_schedule(path, [math.inf]) == evolve_Tinf(path)


def test_vacuum_is_stationary():
    vacuum = _boxes("1111")

    result = evolve_Tl(vacuum, 2)

    assert result.state == vacuum
    assert result.energy == 0


def test_effective_capacity_validates_finite_values():
    assert effective_capacity(_boxes("12"), math.inf) == 2
    with pytest.raises(BoxBallError, match="positive integer"):
        effective_capacity(_boxes("12"), 0)
    with pytest.raises(BoxBallError, match="positive integer"):
        effective_capacity(_boxes("12"), 1.5)


def test_evolution_pattern_rejects_negative_time():
    with pytest.raises(BoxBallError, match="nonnegative"):
        evolution_pattern(_boxes("12"), -1)


def _small_states():
    exhaustive = [
        path_from_words(2, [(letter,) for letter in letters])
        for letters in itertools.product((1, 2, 3), repeat=4)
    ]
    return exhaustive + random_states(2, 3, 30, seed=17)


def test_time_evolution_shifts_the_first_color_riggings():
    paths = [_boxes(word, n=2) for word in ("1112", "1122", "1213", "1123", "1231")]
    paths.append(_boxes("11112221322433"))
    for path in paths:
        assert is_highest(path)
        padded = pad_state(path, 20)
        rc = kkr_from_path(padded)
        for size in (1, 2, 3, math.inf):
            evolved = evolve_Tl(padded, size).state
            expected = shift_riggings(rc, 1, partial(min, size))
            assert kkr_from_path(evolved) == expected


def test_row_energy_counts_amplitudes():
    for path in _small_states():
        amplitudes = unrestricted_from_path(path).lengths(1)
        padded = pad_state(path, auto_pad_width(path, 1) + 1)
        for size in range(1, max(amplitudes, default=0) + 2):
            assert row_energy(padded, size) == sum(min(size, mu) for mu in amplitudes)
        assert row_energy(padded, math.inf) == path.ball_count()


def test_row_energy_ignores_trailing_vacuum_factors():
    for path in _small_states():
        padded = pad_state(path, auto_pad_width(path, 1) + 1)
        for capacity in (1, 2, 3):
            longer = padded.tensor(vacuum_path(2, [capacity]))
            for size in (1, 2, 3, math.inf):
                assert row_energy(longer, size) == row_energy(padded, size)


def test_top_corner_energy_drops_by_the_row_energy():
    for path in _small_states():
        padded = pad_state(path, auto_pad_width(path, 1) + 1)
        before = corner_energy(padded, 3)
        for size in (1, 2, 3):
            evolved = evolve_Tl(padded, size)
            assert before - corner_energy(evolved.state, 3) == evolved.energy
