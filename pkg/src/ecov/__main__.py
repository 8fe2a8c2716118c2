"""Module entry point: python -m ecov."""

from .cli import main

if __name__ == "__main__":
    raise SystemExit(main())
