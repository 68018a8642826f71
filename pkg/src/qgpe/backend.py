"""Kernel backend selection.

``SOLVER_BACKEND=numba`` (default) uses the jitted kernels, falling back
to pure numpy when numba is unavailable; ``SOLVER_BACKEND=numpy`` forces
the fallback.  Both backends implement the identical call surface, so the
choice never changes results, only speed.
"""

import logging
import os

from .exceptions import ConfigurationError

_log = logging.getLogger("qgpe")


def _load():
    choice = os.environ.get("SOLVER_BACKEND", "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ConfigurationError(
            f"SOLVER_BACKEND must be 'numba' or 'numpy', got {choice!r}"
        )
    if choice in ("", "numba"):
        try:
            from . import _kernels_numba

            return _kernels_numba, "numba"
        except ImportError:
            if choice == "numba":
                raise
            _log.debug("numba unavailable, using numpy kernels")
    from . import _kernels_numpy

    return _kernels_numpy, "numpy"


kernels, BACKEND = _load()
