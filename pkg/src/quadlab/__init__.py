"""quadlab: a laboratory for values of (inhomogeneous) quadratic forms at
integer points and their lattice-dynamics counterparts, with rule-enforced
Schmidt-type game engines."""

from ._kernels import BACKEND as kernel_backend

__version__ = "0.1.0"
