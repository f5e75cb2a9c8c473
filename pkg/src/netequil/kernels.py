"""Backend selection for the hot kernels.

The compiled Cython module is preferred when importable; setting the
environment variable ``NETEQUIL_PURE`` (to any non-empty value) forces the
pure-numpy fallback.  Both backends are importable side by side for the
equivalence tests and the benchmark.
"""

import os

from . import _kernels_py as pure

try:
    from . import _kernels as compiled
except ImportError:
    compiled = None

if os.environ.get("NETEQUIL_PURE"):
    active = pure
else:
    active = compiled if compiled is not None else pure

backend_name = active.BACKEND

gauss_solve = active.gauss_solve
clamp_iterate = active.clamp_iterate
pattern_scan = active.pattern_scan
