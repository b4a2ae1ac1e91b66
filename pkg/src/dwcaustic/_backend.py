"""Kernel backend selection.

The compiled extension is used when it imports; setting
``DWCAUSTIC_PURE_PYTHON=1`` forces the pure-Python kernels.
"""

import os

from . import _kernels_py

if os.environ.get("DWCAUSTIC_PURE_PYTHON", "").strip() not in ("", "0"):
    kernels = _kernels_py
    NAME = "python"
else:
    try:
        from . import _ckernels as kernels
        NAME = "cython"
    except ImportError:
        kernels = _kernels_py
        NAME = "python"

carlson_rf = kernels.carlson_rf
carlson_rd = kernels.carlson_rd
sncndn = kernels.sncndn
q0_of_qt = kernels.q0_of_qt
trajectory_start = kernels.trajectory_start
action_excess = kernels.action_excess
