"""Text, JSON and CSV forms of paths, rigged configurations, tables and scattering data."""

from __future__ import annotations

import csv
import io
import json
import re
from collections.abc import Sequence
from typing import Any

from .bbs import EvolutionPattern
from .config import MAX_TEXT_LETTER
from .crystal import AffineElement, CrystalElement, Path, element_from_vector, make_element
from .errors import BoxBallError, InputFormatError
from .rigged import RiggedConfiguration
from .scattering import ScatteringData, SolitonSpec
from .tau import IdentityReport, SubsetChoice, TauTable

_SEPARATORS = re.compile(r"(?:\s|⊗|\(x\))+")


def parse_word(token: str) -> tuple[int, ...]:
    if not token.isdigit() or "0" in token:
        raise InputFormatError(f"tableau words use the letters 1..{MAX_TEXT_LETTER}: {token!r}")
    return tuple(int(ch) for ch in token)


def _rank(words: Sequence[Sequence[int]], n: int | None) -> int:
    if n is not None:
        return n
    return max([2, *(letter for word in words for letter in word)]) - 1


def _build(n: int, words: Sequence[Sequence[int]], floor: int) -> Path:
    try:
        factors = tuple(make_element(n, word, floor=floor) for word in words)
        return Path(factors, n, floor)
    except BoxBallError as exc:
        raise InputFormatError(str(exc)) from exc


def parse_path(text: str, n: int | None = None, *, floor: int = 0) -> Path:
    """Parse tableau words separated by spaces or a tensor sign.

    A single token without separators is read as a chain of single-box factors, so
    ``"11112221322433"`` and ``"1 1 1 1 2 2 2 1 3 2 2 4 3 3"`` are the same path.
    """

    tokens = [token for token in _SEPARATORS.split(text.strip()) if token]
    if not tokens:
        raise InputFormatError("empty path")
    if len(tokens) == 1:
        tokens = list(tokens[0])
    words = [parse_word(token) for token in tokens]
    return _build(_rank(words, n), words, floor)


def parse_path_json(data: Any, n: int | None = None, *, floor: int = 0) -> Path:
    """Accept a list of tableau words or a list of occupancy vectors."""

    if not isinstance(data, list) or not data:
        raise InputFormatError("a JSON path is a nonempty list of words or vectors")
    if all(isinstance(item, str) for item in data):
        words = [parse_word(item) for item in data]
        return _build(_rank(words, n), words, floor)
    if all(isinstance(item, list) for item in data):
        try:
            factors = tuple(element_from_vector(item, floor=floor) for item in data)
            path = Path.of(factors)
        except (BoxBallError, TypeError, ValueError) as exc:
            raise InputFormatError(f"bad occupancy vector: {exc}") from exc
        if n is not None and path.n != n:
            raise InputFormatError(f"vectors have rank {path.n}, expected {n}")
        return path
    raise InputFormatError("mixed word and vector entries in a JSON path")


def load_path(text: str, n: int | None = None) -> Path:
    stripped = text.strip()
    if stripped.startswith("["):
        return parse_path_json(_loads(stripped), n)
    return parse_path(stripped, n)


def format_word(element: CrystalElement) -> str:
    if element.rank + 1 > MAX_TEXT_LETTER:
        raise BoxBallError("letters above 9 have no text form; use --format json")
    return "".join(str(letter) for letter in element.word())


def format_path(path: Path, separator: str | None = None) -> str:
    """Join tableau words; single-box chains are written without separators."""

    if separator is None:
        separator = "" if all(c == 1 for c in path.capacities) else " "
    return separator.join(format_word(factor) for factor in path)


def path_to_json(path: Path) -> list:
    if path.n + 1 > MAX_TEXT_LETTER:
        return [list(factor.x) for factor in path]
    return [format_word(factor) for factor in path]


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc


def dumps(payload: Any) -> str:
    return json.dumps(payload)


def rc_to_json(rc: RiggedConfiguration) -> dict[str, Any]:
    """Return {"n", "quantum", "colors"} with colors[a-1] a list of [length, rigging]."""

    payload: dict[str, Any] = {
        "n": rc.n,
        "quantum": list(rc.quantum),
        "colors": [[[w, r] for w, r in rows] for rows in rc.colors],
    }
    if rc.floor:
        payload["floor"] = rc.floor
    return payload


def rc_from_json(data: Any) -> RiggedConfiguration:
    if not isinstance(data, dict):
        raise InputFormatError("a rigged configuration is a JSON object")
    try:
        n = int(data["n"])
        quantum = tuple(int(w) for w in data["quantum"])
        colors = tuple(tuple((int(w), int(r)) for w, r in rows) for rows in data["colors"])
        return RiggedConfiguration(n, quantum, colors, int(data.get("floor", 0)))
    except KeyError as exc:
        raise InputFormatError(f"rigged configuration is missing {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed rigged configuration: {exc}") from exc
    except BoxBallError as exc:
        raise InputFormatError(str(exc)) from exc


def load_rc(text: str) -> RiggedConfiguration:
    return rc_from_json(_loads(text))


def format_table(table: TauTable, fmt: str) -> str:
    """Render rows d = 1..n+1 against columns k = 1..L."""

    rows = table.rows()
    if fmt == "json":
        return dumps(
            {
                "label": table.label,
                "quantum": list(table.quantum),
                "rows": {str(d): values for d, values in rows.items()},
            }
        )
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["d", *range(1, table.length + 1)])
        for d, values in rows.items():
            writer.writerow([d, *values])
        return buffer.getvalue().rstrip("\n")
    width = max((len(str(v)) for values in rows.values() for v in values), default=1)
    return "\n".join(
        f"{table.label}_{d}: " + " ".join(str(v).rjust(width) for v in values)
        for d, values in rows.items()
    )


def format_pattern(pattern: EvolutionPattern, fmt: str) -> str:
    if fmt == "json":
        return dumps([path_to_json(row) for row in pattern.rows])
    return "\n".join(format_path(row) for row in pattern.rows)


def format_affine(factor: AffineElement) -> str:
    return f"{format_word(factor.element)}[{factor.mode}]"


def scattering_to_json(data: ScatteringData) -> list[dict[str, Any]]:
    return [{"word": format_word(f.element), "d": f.mode} for f in data.factors]


def scattering_from_json(items: Any, n: int, *, floor: int = 1) -> ScatteringData:
    if not isinstance(items, list):
        raise InputFormatError("scattering data is a JSON list of {word, d} objects")
    try:
        factors = tuple(
            AffineElement(make_element(n, parse_word(str(i["word"])), floor=floor), int(i["d"]))
            for i in items
        )
    except (KeyError, TypeError, ValueError, BoxBallError) as exc:
        raise InputFormatError(f"malformed scattering data: {exc}") from exc
    return ScatteringData(factors)


def format_scattering(forms: Sequence[ScatteringData], fmt: str) -> str:
    if fmt == "json":
        return dumps([scattering_to_json(data) for data in forms])
    return "\n".join(" ".join(format_affine(f) for f in data.factors) for data in forms)


def spec_from_json(data: Any) -> tuple[SolitonSpec, int | None]:
    """Parse {"n", "solitons": [{"word", "r"}], "length"?}; labels use letters 2..n+1."""

    if not isinstance(data, dict):
        raise InputFormatError("an N-soliton spec is a JSON object")
    try:
        n = int(data["n"])
        solitons = data["solitons"]
        labels = tuple(make_element(n, parse_word(str(s["word"])), floor=1) for s in solitons)
        positions = tuple(int(s["r"]) for s in solitons)
        length = data.get("length")
        return SolitonSpec(n, labels, positions), None if length is None else int(length)
    except KeyError as exc:
        raise InputFormatError(f"N-soliton spec is missing {exc.args[0]!r}") from exc
    except (TypeError, ValueError, BoxBallError) as exc:
        raise InputFormatError(f"malformed N-soliton spec: {exc}") from exc


def load_spec(text: str) -> tuple[SolitonSpec, int | None]:
    return spec_from_json(_loads(text))


def spec_to_json(spec: SolitonSpec, length: int | None = None) -> dict[str, Any]:
    payload: dict[str, Any] = {
        "n": spec.n,
        "solitons": [
            {"word": format_word(b), "r": r}
            for b, r in zip(spec.labels, spec.positions, strict=True)
        ],
    }
    if length is not None:
        payload["length"] = length
    return payload


def choices_to_json(choices: Sequence[SubsetChoice]) -> list[dict[str, Any]]:
    return [
        {"shapes": [list(s) for s in c.shapes], "riggings": [list(r) for r in c.riggings]}
        for c in choices
    ]


def report_to_json(report: IdentityReport) -> dict[str, Any]:
    return {
        "name": report.name,
        "checked": report.checked,
        "ok": report.ok,
        "counterexample": report.counterexample,
    }
