"""Entry point for ``python -m boxball_tau``."""

from .cli import main

if __name__ == "__main__":
    raise SystemExit(main())
