"""Kernel dispatch: compiled Cython core when importable, numpy fallback otherwise.

The choice is made once at import. ``use_backend`` switches explicitly and
exists for the benchmark and for the equivalence tests.
"""

from __future__ import annotations

import logging
from types import ModuleType

from . import _kernels_py

log = logging.getLogger(__name__)

try:
    from . import _ckernels
except ImportError:  # pragma: no cover - depends on build
    _ckernels = None

BACKENDS: dict[str, ModuleType] = {"python": _kernels_py}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

_active: ModuleType = BACKENDS.get("cython", _kernels_py)


def backend() -> str:
    return "cython" if _active is _ckernels and _ckernels is not None else "python"


def available() -> list[str]:
    return sorted(BACKENDS)


def use_backend(name: str) -> str:
    """Select a backend by name; returns the previously active one."""
    global _active
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} not available (have {available()})")
    previous = backend()
    _active = BACKENDS[name]
    log.debug("kernel backend: %s", name)
    return previous


def _check_unit(base: int, p: int) -> None:
    if p < 2 or base % p == 0:
        raise ValueError(f"{base} is not a unit mod {p}")


def power_table(base, n, p):
    _check_unit(base, p)
    return _active.power_table(int(base) % p, int(n), int(p))


def dlog_table(base, p):
    _check_unit(base, p)
    return _active.dlog_table(int(base) % p, int(p))


def loglik_scan(ms, bits, p):
    return _active.loglik_scan(ms, bits, int(p))


def affine_pullback(symbols, a_inv, shifts, xs, p):
    return _active.affine_pullback(symbols, a_inv, shifts, xs, int(p))
