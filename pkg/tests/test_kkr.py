import itertools
import math

import pytest

from boxball_tau.bbs import evolve_Tl, pad_state
from boxball_tau.crystal import is_highest, path_from_words
from boxball_tau.errors import BoxBallError
from boxball_tau.kkr import (
    kkr_from_path,
    kkr_from_path_bruteforce,
    kkr_to_path,
    unrestricted_from_path,
    vacuum_data,
)
from boxball_tau.rigged import (
    RiggedConfiguration,
    Validity,
    charge,
    concat,
    enumerate_rigged_configurations,
    validate,
)
from boxball_tau.verification import random_states

FOURTEEN_BOXES = RiggedConfiguration(
    3,
    (1,) * 14,
    (((4, 0), (3, 2), (2, 3)), ((3, 1), (1, 0)), ((1, 0),)),
)
FOURTEEN_BOX_PATH = "11112221322433"

MIXED_CAPACITIES = RiggedConfiguration(
    3,
    (2, 3, 1, 4) + (1,) * 13,
    (((3, 0), (3, 0), (1, 3)), ((3, 0), (1, 0)), ((1, 0),)),
)
MIXED_CAPACITY_WORDS = ["11", "122", "2", "1333", "1", "1", "4"] + ["1"] * 10


def _single_boxes(n, word):
    return path_from_words(n, list(word))


def test_kkr_to_path_on_single_boxes():
    assert kkr_to_path(FOURTEEN_BOXES) == _single_boxes(3, FOURTEEN_BOX_PATH)


def test_kkr_from_path_inverts_the_map():
    assert kkr_from_path(_single_boxes(3, FOURTEEN_BOX_PATH)) == FOURTEEN_BOXES


def test_kkr_on_mixed_capacities():
    path = path_from_words(3, MIXED_CAPACITY_WORDS)

    assert kkr_to_path(MIXED_CAPACITIES) == path
    assert kkr_from_path(path) == MIXED_CAPACITIES


def test_kkr_from_path_rejects_non_highest_paths():
    with pytest.raises(BoxBallError, match="highest"):
        kkr_from_path(path_from_words(3, ["344", "2", "13", "24"]))


def test_kkr_to_path_rejects_unrestricted_configurations():
    rc = RiggedConfiguration(1, (1, 1), (((1, -1),),))

    with pytest.raises(BoxBallError):
        kkr_to_path(rc)


def test_kkr_round_trips_every_small_single_box_path():
    for n in (1, 2, 3):
        for letters in itertools.product(range(1, n + 2), repeat=5):
            path = path_from_words(n, [(letter,) for letter in letters])
            if not is_highest(path):
                continue
            rc = kkr_from_path(path)
            assert validate(rc) is Validity.RESTRICTED
            assert kkr_to_path(rc) == path


def test_kkr_round_trips_enumerated_configurations():
    quantum = (2, 1, 1)
    for sizes in [(1, 0), (2, 1), (3, 1), (2, 2)]:
        for rc in enumerate_rigged_configurations(2, quantum, sizes):
            path = kkr_to_path(rc)
            assert path.capacities == quantum
            assert is_highest(path)
            assert kkr_from_path(path) == rc


def test_bruteforce_inverse_agrees_with_the_box_adding_algorithm():
    for word in ["1122", "1212", "1123", "1213"]:
        path = _single_boxes(2, word)
        assert kkr_from_path_bruteforce(path) == kkr_from_path(path)


def test_bruteforce_inverse_is_bounded():
    with pytest.raises(BoxBallError, match="limited"):
        kkr_from_path_bruteforce(_single_boxes(3, FOURTEEN_BOX_PATH))


def test_vacuum_data_builds_the_staircase():
    path = path_from_words(3, ["344", "2", "13", "24"])

    data = vacuum_data(path, (1, 1, 2))

    assert data.sizes == (9, 5, 2, 0)
    assert data.word == tuple(int(ch) for ch in "123123121")


def test_unrestricted_configuration_of_a_non_highest_state():
    path = path_from_words(3, ["344", "2", "13", "24"])

    rc = unrestricted_from_path(path, (1, 1, 2))

    assert rc.quantum == (3, 1, 2, 2)
    assert [sum(rc.lengths(a)) for a in (1, 2, 3)] == [7, 5, 3]
    assert rc.vacancy(3, 3) == -2
    assert validate(rc) is Validity.UNRESTRICTED
    assert unrestricted_from_path(path) == rc


def test_unrestricted_configuration_matches_kkr_on_highest_paths():
    path = _single_boxes(3, FOURTEEN_BOX_PATH)

    assert unrestricted_from_path(path) == FOURTEEN_BOXES


def test_unrestricted_configuration_needs_enough_vacuum():
    path = path_from_words(2, ["3", "3"])

    with pytest.raises(BoxBallError, match="too small"):
        unrestricted_from_path(path, (0, 0))


def _highest_single_box_paths(n, length):
    paths = []
    for letters in itertools.product(range(1, n + 2), repeat=length):
        path = path_from_words(n, [(letter,) for letter in letters])
        if is_highest(path):
            paths.append(path)
    return paths


def test_concatenated_configurations_map_to_tensored_paths():
    paths = _highest_single_box_paths(2, 3)
    for first, second in itertools.product(paths, repeat=2):
        merged = concat(kkr_from_path(first), kkr_from_path(second))
        assert kkr_to_path(merged) == first.tensor(second)

    merged = concat(MIXED_CAPACITIES, FOURTEEN_BOXES)
    expected = path_from_words(3, MIXED_CAPACITY_WORDS + list(FOURTEEN_BOX_PATH))
    assert kkr_to_path(merged) == expected


def test_vacuum_multiplicities_do_not_change_the_configuration():
    path = path_from_words(3, ["344", "2", "13", "24"])
    default = unrestricted_from_path(path)

    assert vacuum_data(path).multiplicities == (3, 3, 4)
    assert unrestricted_from_path(path, (6, 6, 8)) == default
    assert unrestricted_from_path(path, (2, 2, 4)) == default

    for state in random_states(2, 3, 20, seed=3):
        expected = unrestricted_from_path(state)
        doubled = [2 * m for m in vacuum_data(state).multiplicities]
        assert unrestricted_from_path(state, doubled) == expected


def test_appending_vacuum_keeps_the_colored_rows():
    for path in _highest_single_box_paths(2, 4):
        assert kkr_from_path(pad_state(path, 3)).colors == kkr_from_path(path).colors

    state = path_from_words(3, ["344", "2", "13", "24"])
    padded = unrestricted_from_path(pad_state(state, 4))
    assert padded.colors == unrestricted_from_path(state).colors
    assert padded.quantum == (3, 1, 2, 2, 1, 1, 1, 1)


def test_letter_counts_are_differences_of_color_sizes():
    paths = [
        path_from_words(3, ["344", "2", "13", "24"]),
        path_from_words(3, MIXED_CAPACITY_WORDS),
        *random_states(3, 3, 20, seed=8),
    ]
    for path in paths:
        rc = unrestricted_from_path(path)
        sizes = [sum(rc.lengths(a)) for a in range(rc.n + 2)]
        counts = path.letter_counts()
        assert list(counts) == [sizes[a] - sizes[a + 1] for a in range(rc.n + 1)]


def test_charge_grows_by_the_row_energy_under_time_evolution():
    for path in _highest_single_box_paths(2, 4):
        padded = pad_state(path, 8)
        before = charge(kkr_from_path(padded))
        for size in (1, 2, 3, math.inf):
            evolved = evolve_Tl(padded, size)
            assert charge(kkr_from_path(evolved.state)) == before + evolved.energy
