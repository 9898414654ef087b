"""Build script: compiles the tridiagonal eigensolver kernels when Cython and a
C compiler are available; the package falls back to the numpy backend otherwise."""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext
from setuptools.extension import Extension


class OptionalBuildExt(build_ext):
    """Swallow compiler failures: the pure-Python backend is a full substitute."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            warnings.warn(f"compiled backend skipped ({exc}); using the numpy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            warnings.warn(f"compiled backend skipped ({exc}); using the numpy fallback")


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("heatcap._sturm", ["src/heatcap/_sturm.pyx"])],
        language_level="3",
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
