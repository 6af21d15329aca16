"""Backend selection for the integer rank kernel.

The compiled extension is optional; set HMSKIT_PURE_PYTHON=1 to force the
pure python path (useful for debugging and for the benchmark script).
"""

import os

from . import _speedups_py

if os.environ.get("HMSKIT_PURE_PYTHON", "") not in ("", "0"):
    int_rank = _speedups_py.int_rank
    BACKEND = "python"
else:
    try:
        from . import _speedups

        int_rank = _speedups.int_rank
        BACKEND = "compiled"
    except ImportError:
        int_rank = _speedups_py.int_rank
        BACKEND = "python"
