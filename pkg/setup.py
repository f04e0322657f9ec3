import setuptools
from Cython.Build import cythonize

setuptools.setup(
    ext_modules=cythonize(
        [
            setuptools.Extension(
                "minkflow._kernel",
                ["src/minkflow/_kernel.pyx"],
                extra_compile_args=["-O3"],
                language="c",
            )
        ],
        language_level=3,
    )
)
