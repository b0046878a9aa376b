"""Backend selection for the bitmask kernels.

The compiled extension is used when it imports; ``ULTRACHASE_PURE_PYTHON=1``
forces the pure-Python fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKENDS = {"python": _kernels_py}

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None
else:
    BACKENDS["compiled"] = _compiled

if _compiled is not None and os.environ.get("ULTRACHASE_PURE_PYTHON") != "1":
    BACKEND = "compiled"
    impl = _compiled
else:
    BACKEND = "python"
    impl = _kernels_py

down_violation = impl.down_violation
union_violation = impl.union_violation
bad_split = impl.bad_split
dichotomy_holds = impl.dichotomy_holds
prime_masks = impl.prime_masks
ultra_violation = impl.ultra_violation
ideal_codes = impl.ideal_codes
