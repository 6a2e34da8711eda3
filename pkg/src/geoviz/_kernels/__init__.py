"""Hot-loop kernels with a compiled core and a pure-Python fallback.

The compiled extension (``_native``, built from ``_native.pyx``) is preferred
when it imported successfully; otherwise the pure-Python implementation in
``_py`` is used. Set ``GEOVIZ_KERNELS=python`` or ``GEOVIZ_KERNELS=native``
to force a backend (forcing ``native`` raises if the extension is missing).

Both backends expose the same four functions with identical results:
``khop_reach``, ``overlap_hits``, ``bbox_hits``, ``trigram_counts``.
"""

from __future__ import annotations

import os

_forced = os.environ.get("GEOVIZ_KERNELS", "").strip().lower()

if _forced == "python":
    from geoviz._kernels import _py as _impl

    BACKEND = "python"
elif _forced == "native":
    from geoviz._kernels import _native as _impl  # type: ignore[no-redef]

    BACKEND = "native"
else:
    try:
        from geoviz._kernels import _native as _impl  # type: ignore[no-redef]

        BACKEND = "native"
    except ImportError:
        from geoviz._kernels import _py as _impl

        BACKEND = "python"

khop_reach = _impl.khop_reach
overlap_hits = _impl.overlap_hits
bbox_hits = _impl.bbox_hits
trigram_counts = _impl.trigram_counts

__all__ = [
    "BACKEND",
    "khop_reach",
    "overlap_hits",
    "bbox_hits",
    "trigram_counts",
]
