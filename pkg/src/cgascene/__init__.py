"""Natural-language 3D scene editing on a conformal geometric algebra core.

Subpackages cover the dense Cl(4,1) kernel, the conformal motor layer, the
scene model, the sandboxed CGA expression executor, the Compact SE3 and
Euclidean 4x4 baseline executors, the spatial template engine, the
completion gateway, the evaluation layers, exact statistics, the benchmark
runner, and the interactive session service.
"""

__version__ = "0.1.0"
