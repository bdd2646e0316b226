"""Select the enumeration kernel at import time.

The compiled extension ``freecactus._core`` is preferred when it built;
otherwise the pure-Python reference ``freecactus._core_py`` is used.  Set
the environment variable ``FREECACTUS_PURE=1`` to force the pure kernel,
which is what the benchmark script and the kernel parity tests do.

``ACTIVE`` names the kernel actually in use ("compiled" or "pure").
"""

from __future__ import annotations

import os

if os.environ.get("FREECACTUS_PURE") == "1":
    from freecactus import _core_py as _impl

    ACTIVE = "pure"
else:
    try:
        from freecactus import _core as _impl  # type: ignore[no-redef]

        ACTIVE = "compiled"
    except ImportError:
        from freecactus import _core_py as _impl  # type: ignore[no-redef]

        ACTIVE = "pure"

iter_nc_blocks = _impl.iter_nc_blocks
count_nc = _impl.count_nc
y_level_histogram = _impl.y_level_histogram
word_profile_counts = _impl.word_profile_counts

__all__ = [
    "ACTIVE",
    "iter_nc_blocks",
    "count_nc",
    "y_level_histogram",
    "word_profile_counts",
]
