import os

import numpy as np
from setuptools import Extension, setup

# SLDENSITY_NO_EXT=1 installs the pure-Python package only
if os.environ.get("SLDENSITY_NO_EXT"):
    ext_modules = []
else:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("sldensity._kernels", ["src/sldensity/_kernels.pyx"],
                   include_dirs=[np.get_include()],
                   extra_compile_args=["-O3"])],
        compiler_directives={"language_level": 3},
    )

setup(ext_modules=ext_modules)
