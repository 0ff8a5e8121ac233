"""Select the statevector kernel implementation at import time.

The compiled extension is used when it was built; setting the environment
variable ``QKSVM_PURE_PYTHON=1`` forces the NumPy fallback.
"""

import os

from . import _simkernel_py

try:
    from . import _simkernel as _compiled
except ImportError:  # extension not built
    _compiled = None


def available():
    """Map backend name to its ``apply_ops`` for every importable backend."""
    found = {"python": _simkernel_py.apply_ops}
    if _compiled is not None:
        found["cython"] = _compiled.apply_ops
    return found


if _compiled is not None and not os.environ.get("QKSVM_PURE_PYTHON"):
    BACKEND = "cython"
    apply_ops = _compiled.apply_ops
else:
    BACKEND = "python"
    apply_ops = _simkernel_py.apply_ops
