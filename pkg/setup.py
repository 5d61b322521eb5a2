"""Build script: compiles the optional accelerator extension.

The package works without the extension (a numpy fallback is selected at
import time), so any failure to cythonize or compile is non-fatal.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "delaydesign._core",
                ["src/delaydesign/_core.pyx"],
                # fp-contract off keeps results bit-identical to the
                # pure-Python backend (no FMA fusion)
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    import sys

    print(f"warning: skipping compiled extension ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
