"""Exact analysis of shift-invariant spaces and affine systems.

Rationals may be passed as ints, ``fractions.Fraction`` or ``"p/q"`` strings.
"""

from ._siframes import (
    SiframesError,
    StepFunction,
    calderon_sum,
    frame_sum,
    run,
    translates_criterion,
)

try:
    from ._siframes import __version__
except ImportError:  # pragma: no cover
    __version__ = "unknown"


def load_spec(path):
    """Reads a spec file and returns its text, ready for ``run(..., spec=...)``."""
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def demo(name, **options):
    return run("demo", target=name, options=options)


__all__ = [
    "SiframesError",
    "StepFunction",
    "calderon_sum",
    "demo",
    "frame_sum",
    "load_spec",
    "run",
    "translates_criterion",
]
