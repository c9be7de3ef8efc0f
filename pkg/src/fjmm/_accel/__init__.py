"""Kernel backend selection.

The compiled Cython kernels are preferred when importable; otherwise the
numpy implementations in ``pure`` are used. Setting the environment
variable FJMM_PURE_PYTHON (to any non-empty value) forces the fallback.
``BACKEND`` records which one is active and is embedded in experiment
metadata.
"""

from __future__ import annotations

import os

from . import pure

if os.environ.get("FJMM_PURE_PYTHON"):
    _backend = pure
    BACKEND = "python"
else:
    try:
        from . import _kernels as _backend  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _backend = pure
        BACKEND = "python"

power_chunk = _backend.power_chunk
simulate_lags = _backend.simulate_lags


def get_backend(name: str):
    """Fetch a backend module by name ('python' or 'compiled').

    Used by the benchmark and the equivalence tests; raises ImportError if
    the compiled kernels were never built.
    """
    if name == "python":
        return pure
    if name == "compiled":
        from . import _kernels  # noqa: PLC0415

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
