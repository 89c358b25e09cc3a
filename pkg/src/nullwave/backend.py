"""Kernel backend selection.

The compiled extension is preferred when importable; the numpy fallback
is always available.  ``NULLWAVE_BACKEND=python|cython`` forces a choice
at import time.
"""

import os

from . import _lightcone_py
from .errors import ConfigError

try:
    from . import _lightcone_cy
except ImportError:
    _lightcone_cy = None

_BACKENDS = {"python": _lightcone_py}
if _lightcone_cy is not None:
    _BACKENDS["cython"] = _lightcone_cy

_forced = os.environ.get("NULLWAVE_BACKEND", "").strip().lower()
if _forced:
    if _forced not in _BACKENDS:
        raise ImportError(
            f"NULLWAVE_BACKEND={_forced!r} is not available; "
            f"choices here: {sorted(_BACKENDS)}"
        )
    DEFAULT = _forced
else:
    DEFAULT = "cython" if "cython" in _BACKENDS else "python"


def available_backends() -> tuple:
    return tuple(sorted(_BACKENDS))


def get_kernels(backend: str | None = None):
    """Kernel module for ``backend`` (default: the import-time selection)."""
    name = backend or DEFAULT
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ConfigError(
            f"unknown backend {name!r}; available: {sorted(_BACKENDS)}"
        ) from None
