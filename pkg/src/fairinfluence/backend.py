"""Compute-backend selection.

Hot kernels ship in two equivalent implementations: a numba ``@njit``
version and a pure-numpy fallback.  The active one is chosen by the
``FAIRINFLUENCE_BACKEND`` environment variable:

* ``auto`` (default): numba when importable, else numpy
* ``numba``: require numba, error if missing
* ``numpy``: force the fallback even when numba is installed
"""

from __future__ import annotations

import os

from .errors import BackendError

BACKEND_ENV = "FAIRINFLUENCE_BACKEND"

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

_VALID = ("auto", "numba", "numpy")


def resolve_backend(override: str | None = None) -> str:
    """Return the backend name to use, either ``"numba"`` or ``"numpy"``.

    ``override`` takes precedence over the environment variable; both
    accept the same three values.
    """
    choice = (override or os.environ.get(BACKEND_ENV, "auto")).lower()
    if choice not in _VALID:
        raise BackendError(
            f"unknown backend {choice!r}; expected one of {_VALID}"
        )
    if choice == "auto":
        return "numba" if HAS_NUMBA else "numpy"
    if choice == "numba" and not HAS_NUMBA:
        raise BackendError("backend 'numba' requested but numba is not installed")
    return choice
