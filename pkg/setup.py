from setuptools import Extension, setup

# The compiled echelon kernel is optional: the package falls back to the
# pure-numpy implementation when the extension is unavailable.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("hassecheck._echelon", ["src/hassecheck/_echelon.pyx"])],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
