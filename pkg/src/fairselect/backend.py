"""Backend selection: compiled sweep kernel when available, else pure Python."""

try:
    from . import _sweepcore  # type: ignore[attr-defined]

    HAVE_COMPILED = True
except ImportError:  # pragma: no cover - depends on build environment
    _sweepcore = None
    HAVE_COMPILED = False


def active_backend() -> str:
    return "compiled" if HAVE_COMPILED else "pure"
