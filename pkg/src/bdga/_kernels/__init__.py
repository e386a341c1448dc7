"""Kernel backend selection.

The compiled extension is preferred when it is importable; setting the
environment variable ``BDGA_PURE_PYTHON`` (to any non-empty value) before
interpreter start forces the pure-Python fallback. Both backends produce
byte-identical results.
"""

import os

from . import _pykernels

if os.environ.get("BDGA_PURE_PYTHON"):
    impl = _pykernels
else:
    try:
        from . import _ckernels as impl  # type: ignore[no-redef]
    except ImportError:
        impl = _pykernels

BACKEND = impl.BACKEND

perm_compose = impl.perm_compose
perm_invert = impl.perm_invert
perm_conjugate = impl.perm_conjugate
perm_sandwich = impl.perm_sandwich
perm_twisted = impl.perm_twisted
perm_product = impl.perm_product
mat2_compose = impl.mat2_compose
mat2_invert = impl.mat2_invert
mat2_conjugate = impl.mat2_conjugate
mat2_sandwich = impl.mat2_sandwich
mat2_twisted = impl.mat2_twisted
mat2_transpose_invert = impl.mat2_transpose_invert
mat2_product = impl.mat2_product
