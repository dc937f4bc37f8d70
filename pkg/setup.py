from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "pctrank._counts_cy",
        ["src/pctrank/_counts_cy.pyx"],
        language="c++",
        extra_compile_args=["-O2", "-std=c++11"],
    )
]

setup(ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}))
