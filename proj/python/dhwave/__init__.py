"""Numerical toolkit for a degenerate hyperbolic SPDE in two spatial dimensions.

The heavy lifting lives in the compiled extension ``dhwave._core``.  For
in-tree test runs (no installation) the extension directory can be supplied
via the ``DHWAVE_CORE_DIR`` environment variable.
"""

import os
import sys

_core_dir = os.environ.get("DHWAVE_CORE_DIR")
if _core_dir and _core_dir not in sys.path:
    sys.path.insert(0, _core_dir)

try:
    from _core import *  # type: ignore  # in-tree layout
    import _core as _c
except ImportError:
    from dhwave._core import *  # type: ignore  # installed layout
    from dhwave import _core as _c

__all__ = [name for name in dir(_c) if not name.startswith("_")]
__version__ = "0.1.0"
