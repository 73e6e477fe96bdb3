"""Backend selection for the integer reduction kernels.

Prefers the compiled extension ``homkit._fastred`` when present, falling
back to the pure-Python ``homkit._pyred``.  Set ``HOMKIT_BACKEND=python``
(or ``cython``) to force one side; forcing an unavailable backend raises.
Both backends produce bit-identical output, see benchmarks/bench_kernel.py
for the speed comparison.
"""

import os

_choice = os.environ.get("HOMKIT_BACKEND", "").strip().lower()

if _choice in ("", "cython", "c"):
    try:
        from . import _fastred as kernel
    except ImportError:
        if _choice:
            raise ImportError(
                "HOMKIT_BACKEND requested the compiled kernel but "
                "homkit._fastred is not built"
            )
        from . import _pyred as kernel
elif _choice in ("python", "py", "pure"):
    from . import _pyred as kernel
else:
    raise ImportError(f"unknown HOMKIT_BACKEND value: {_choice!r}")

BACKEND = kernel.BACKEND
matmul = kernel.matmul
hnf_with_transform = kernel.hnf_with_transform
snf_with_transforms = kernel.snf_with_transforms
