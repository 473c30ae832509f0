"""Numeric kernels for the hot loops (masked dominant eigenvalue, betweenness).

The compiled Cython extension is preferred; a pure-numpy fallback with the
same signatures is selected when the extension is unavailable or when the
environment variable ``NETDIS_PURE_PYTHON`` is set to a non-empty value.
"""

import os

from . import _fallback

if os.environ.get("NETDIS_PURE_PYTHON"):
    _impl = _fallback
    USING_COMPILED = False
else:
    try:
        from . import _speedups as _impl

        USING_COMPILED = True
    except ImportError:
        _impl = _fallback
        USING_COMPILED = False

power_lambda1 = _impl.power_lambda1
power_eigenvector = _impl.power_eigenvector
lanczos_lambda1 = _impl.lanczos_lambda1
lambda1_batch = _impl.lambda1_batch
brandes_betweenness = _impl.brandes_betweenness

implementation_name = "compiled" if USING_COMPILED else "pure-python"
