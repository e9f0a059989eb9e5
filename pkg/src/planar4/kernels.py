"""Kernel selection: compiled extension when available, pure Python otherwise.

Set the environment variable ``PLANAR4_PURE=1`` to force the pure-Python
kernels even when the compiled extension is importable (used by the test
suite and the benchmark to compare both implementations).
"""

import os

from . import _pykernels

IMPLEMENTATION = "python"

build_csr = _pykernels.build_csr
peel = _pykernels.peel
evaluate_deletion = _pykernels.evaluate_deletion
apply_deletion = _pykernels.apply_deletion
rot_canon = _pykernels.rot_canon
graph_canon = _pykernels.graph_canon

if not os.environ.get("PLANAR4_PURE"):
    try:
        from . import _speedups

        peel = _speedups.peel
        evaluate_deletion = _speedups.evaluate_deletion
        apply_deletion = _speedups.apply_deletion
        rot_canon = _speedups.rot_canon
        graph_canon = _speedups.graph_canon
        IMPLEMENTATION = "compiled"
    except ImportError:
        pass
