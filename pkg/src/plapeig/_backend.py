"""Select the shooting kernel at import: compiled if built, else pure Python."""

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

KERNELS = {"python": _pykernels}
if _compiled is not None:
    KERNELS["cython"] = _compiled

default = _compiled if _compiled is not None else _pykernels
BACKEND = default.BACKEND


def get(name=None):
    """Kernel module by name (``"cython"``/``"python"``); None means the default."""
    if name is None:
        return default
    try:
        return KERNELS[name]
    except KeyError:
        raise ValueError(
            f"backend {name!r} unavailable; have {sorted(KERNELS)}"
        ) from None
