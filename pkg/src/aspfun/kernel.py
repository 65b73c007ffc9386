"""Select the propositional kernel backend at import time.

The compiled extension is used when it was built; setting ``ASPFUN_PURE=1``
forces the pure-Python fallback.
"""

import os

if os.environ.get("ASPFUN_PURE"):
    from ._kernel_py import bounds, least_model
    BACKEND = "python"
else:
    try:
        from ._kernel import bounds, least_model
        BACKEND = "cython"
    except ImportError:
        from ._kernel_py import bounds, least_model
        BACKEND = "python"

from ._kernel_py import FALSE, TRUE, UNKNOWN

__all__ = ["BACKEND", "FALSE", "TRUE", "UNKNOWN", "bounds", "least_model"]
