"""Progress lines printed while a verification sweep runs."""

from __future__ import annotations

from collections.abc import Callable, Sequence

ProgressCallback = Callable[[str], None]


def emit_progress(progress: ProgressCallback | None, message: str) -> None:
    if progress is not None:
        progress(message)


def emit_sweep_start(
    progress: ProgressCallback | None, states: int, n: int, checks: Sequence[str]
) -> None:
    emit_progress(progress, f"Checking {states} states of rank {n} ({', '.join(checks)})...")


def emit_check_result(
    progress: ProgressCallback | None, name: str, checked: int, *, ok: bool
) -> None:
    emit_progress(progress, f"{name}: {'ok' if ok else 'FAILED'} ({checked})")
