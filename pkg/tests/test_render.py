import json

import pytest

from boxball_tau import render
from boxball_tau.crystal import AffineElement, make_element, path_from_words
from boxball_tau.errors import BoxBallError, InputFormatError
from boxball_tau.rigged import RiggedConfiguration
from boxball_tau.scattering import ScatteringData, SolitonSpec
from boxball_tau.tau import IdentityReport, tau_table

FOURTEEN_BOXES = RiggedConfiguration(
    3,
    (1,) * 14,
    (((4, 0), (3, 2), (2, 3)), ((3, 1), (1, 0)), ((1, 0),)),
)


def test_parse_path_accepts_every_separator():
    expected = path_from_words(3, ["344", "2", "13", "24"])

    assert render.parse_path("344 2 13 24") == expected
    assert render.parse_path("344⊗2⊗13⊗24") == expected
    assert render.parse_path("344 (x) 2 (x) 13 (x) 24") == expected


def test_parse_path_reads_a_single_token_as_single_boxes():
    path = render.parse_path("11112221322433")

    assert len(path) == 14
    assert path.capacities == (1,) * 14
    assert path.n == 3


def test_parse_path_infers_the_rank_unless_given():
    assert render.parse_path("1 1").n == 1
    assert render.parse_path("12", 4).n == 4


def test_parse_path_rejects_bad_tokens():
    with pytest.raises(InputFormatError, match="letters"):
        render.parse_path("1a2")
    with pytest.raises(InputFormatError, match="letters"):
        render.parse_path("10 2")
    with pytest.raises(InputFormatError, match="empty"):
        render.parse_path("   ")
    with pytest.raises(InputFormatError, match="weakly increasing"):
        render.parse_path("21 1")
    with pytest.raises(InputFormatError, match="out of range"):
        render.parse_path("13", 1)


def test_load_path_accepts_json_words_and_vectors():
    from_words = render.load_path('["11", "122", "2"]')
    from_vectors = render.load_path("[[2, 0, 0], [1, 2, 0], [0, 1, 0]]")

    assert from_words == path_from_words(2, ["11", "122", "2"])
    assert from_vectors == from_words


def test_load_path_rejects_malformed_json():
    with pytest.raises(InputFormatError, match="invalid JSON"):
        render.load_path("[1, 2")
    with pytest.raises(InputFormatError, match="mixed"):
        render.load_path('["11", [1, 0]]')
    with pytest.raises(InputFormatError, match="rank"):
        render.parse_path_json([[1, 0]], 2)


def test_format_path_separates_words_only_for_larger_capacities():
    assert render.format_path(path_from_words(3, list("1123"))) == "1123"
    assert render.format_path(path_from_words(3, ["11", "2", "34"])) == "11 2 34"
    assert render.format_path(path_from_words(3, ["11", "2"]), " ⊗ ") == "11 ⊗ 2"


def test_format_word_needs_single_digit_letters():
    element = make_element(9, "1")

    with pytest.raises(BoxBallError, match="use --format json"):
        render.format_word(element)
    assert render.path_to_json(path_from_words(9, ["1"])) == [[1] + [0] * 9]


def test_rigged_configuration_json_round_trip():
    payload = render.rc_to_json(FOURTEEN_BOXES)

    assert payload["colors"][0] == [[4, 0], [3, 2], [2, 3]]
    assert "floor" not in payload
    assert render.load_rc(json.dumps(payload)) == FOURTEEN_BOXES


def test_rigged_configuration_json_errors_are_input_errors():
    with pytest.raises(InputFormatError, match="missing 'colors'"):
        render.rc_from_json({"n": 1, "quantum": [1]})
    with pytest.raises(InputFormatError, match="JSON object"):
        render.rc_from_json([1, 2])
    with pytest.raises(InputFormatError, match="expected 2 colors"):
        render.rc_from_json({"n": 2, "quantum": [1], "colors": [[]]})


def test_format_table_as_text_csv_and_json():
    table = tau_table(FOURTEEN_BOXES)

    csv_lines = render.format_table(table, "csv").splitlines()
    text_lines = render.format_table(table, "text").splitlines()
    payload = json.loads(render.format_table(table, "json"))

    assert csv_lines[0] == "d," + ",".join(str(k) for k in range(1, 15))
    assert csv_lines[4] == "4,0,0,0,0,1,2,3,4,6,8,10,13,16,19"
    assert len(text_lines) == 4
    assert text_lines[0].startswith("tau_1: ")
    assert text_lines[3].split()[-1] == "19"
    assert payload["rows"]["1"][-1] == 10
    assert payload["label"] == "tau"


def test_format_scattering_in_text_and_json():
    data = ScatteringData(
        (
            AffineElement(make_element(3, "2222", floor=1), 4),
            AffineElement(make_element(3, "23", floor=1), 6),
        )
    )

    assert render.format_scattering([data], "text") == "2222[4] 23[6]"
    payload = json.loads(render.format_scattering([data], "json"))
    assert payload == [[{"word": "2222", "d": 4}, {"word": "23", "d": 6}]]
    assert render.scattering_from_json(payload[0], 3) == data


def test_soliton_spec_json_round_trip():
    text = '{"n": 3, "solitons": [{"word": "22", "r": 3}, {"word": "223", "r": 2}], "length": 20}'

    spec, length = render.load_spec(text)

    assert length == 20
    assert spec.amplitudes == (2, 3)
    assert spec.positions == (3, 2)
    assert render.spec_to_json(spec, length) == json.loads(text)


def test_soliton_spec_json_errors():
    with pytest.raises(InputFormatError, match="missing 'solitons'"):
        render.load_spec('{"n": 3}')
    with pytest.raises(InputFormatError, match="malformed"):
        render.load_spec('{"n": 3, "solitons": [{"word": "12", "r": 0}]}')
    assert isinstance(render.load_spec('{"n": 1, "solitons": []}')[0], SolitonSpec)


def test_report_to_json():
    report = IdentityReport("triple", 3, {"k": 2})

    assert render.report_to_json(report) == {
        "name": "triple",
        "checked": 3,
        "ok": False,
        "counterexample": {"k": 2},
    }
