from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
    extensions = cythonize(
        [Extension("biconf.jets._kernels", ["src/biconf/jets/_kernels.pyx"])],
        language_level="3",
    )
except ImportError:
    # Without Cython the package still works on the numpy kernel fallback.
    extensions = []

setup(ext_modules=extensions)
