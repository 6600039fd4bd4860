"""Kernel backend selection.

The hot inner loops (sequential weighted draws during network generation and
the consumption fixed-point sweeps) exist twice: a compiled Cython extension
(``_ckernels``) and a pure numpy fallback (``_pykernels``). Both implement
the exact same floating-point operation sequence, so results are
bit-identical regardless of which backend is active.

Selection happens at import time. Set ``EXPCASCADE_KERNELS=python`` or
``=cython`` to force a backend (the default ``auto`` prefers the compiled
one when it is built).
"""

import os

_choice = os.environ.get("EXPCASCADE_KERNELS", "auto").lower()

if _choice in ("auto", ""):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        from . import _pykernels as _impl

        BACKEND = "python"
elif _choice == "python":
    from . import _pykernels as _impl

    BACKEND = "python"
elif _choice == "cython":
    from . import _ckernels as _impl  # raises ImportError if not built

    BACKEND = "cython"
else:
    raise ValueError(
        f"EXPCASCADE_KERNELS must be 'auto', 'python' or 'cython', got {_choice!r}"
    )

draw_targets = _impl.draw_targets
jacobi_fixed_point = _impl.jacobi_fixed_point
gauss_seidel_fixed_point = _impl.gauss_seidel_fixed_point
