from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = [
    Extension(
        "fairselect._sweepcore",
        ["src/fairselect/_sweepcore.pyx"],
        extra_compile_args=["-O2"],
    )
]

# The compiled kernel is optional: the package falls back to the pure-Python
# sweep when the extension is unavailable.
if cythonize is not None:
    ext_modules = cythonize(extensions, compiler_directives={"language_level": "3"})
else:
    ext_modules = []

setup(ext_modules=ext_modules)
