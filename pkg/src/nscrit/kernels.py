"""Kernel backend selection: compiled extension when available, numpy otherwise.

The environment variable ``NSC_KERNEL`` forces a backend (``compiled`` or
``python``; default ``auto``). The active backend is recorded in run
manifests so results can be reproduced bit-for-bit.
"""

from __future__ import annotations

import os

from . import _ref

try:
    from . import _accel
except ImportError:
    _accel = None

_BACKENDS = {"python": _ref}
if _accel is not None:
    _BACKENDS["compiled"] = _accel

_impl = None


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def set_backend(name: str) -> None:
    """Select a kernel backend by name ('auto' picks compiled when built)."""
    global _impl
    if name == "auto":
        name = "compiled" if "compiled" in _BACKENDS else "python"
    if name not in _BACKENDS:
        raise ValueError(f"kernel backend {name!r} not available; have {available_backends()}")
    _impl = _BACKENDS[name]


def backend_name() -> str:
    return _impl.NAME


set_backend(os.environ.get("NSC_KERNEL", "auto"))


def abs_pow_sum(x, p):
    return _impl.abs_pow_sum(x, p)


def mag_pow_sum(x, y, z, p):
    return _impl.mag_pow_sum(x, y, z, p)


def triple_product_sum(a, b, c):
    return _impl.triple_product_sum(a, b, c)


def advect(u1, u2, u3, g11, g12, g13, g21, g22, g23, g31, g32, g33, w1, w2, w3):
    return _impl.advect(u1, u2, u3, g11, g12, g13, g21, g22, g23, g31, g32, g33, w1, w2, w3)


def project_and_mask(c1, c2, c3, k1, k2, k3, inv_ksq, mask):
    return _impl.project_and_mask(c1, c2, c3, k1, k2, k3, inv_ksq, mask)
