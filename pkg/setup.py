"""Build script: compiles the optional accelerator extension.

The package is pure Python by contract; ``homkit._fastred`` is a Cython
twin of ``homkit._pyred`` compiled here when Cython and a C toolchain are
available.  A failed extension build must never fail the install, so the
build_ext command downgrades errors to warnings and the import-time
backend selection falls back to the pure implementation.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            warnings.warn(f"skipping accelerator extension: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            warnings.warn(f"skipping accelerator extension {ext.name}: {exc}")


ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("homkit._fastred", ["src/homkit/_fastred.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:  # pragma: no cover - Cython not installed
    pass

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
