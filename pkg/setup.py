"""Build script: compiles the optional Cython kernel for the Bell-tensor scan.

The package works without the extension (a pure-Python fallback is selected
at import time), so a failed compile only costs speed, not functionality.
"""
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Let the install proceed when no C toolchain is available."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"WARNING: skipping compiled kernel ({exc}); "
                  "falling back to the pure-Python implementation")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"WARNING: could not build {ext.name} ({exc}); "
                  "falling back to the pure-Python implementation")


try:
    from Cython.Build import cythonize
    extensions = cythonize(
        [Extension("ghzmetro._bell_kernel", ["src/ghzmetro/_bell_kernel.pyx"])],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(
    ext_modules=extensions,
    cmdclass={"build_ext": OptionalBuildExt},
)
