"""Numerical laboratory for scalar conservation laws on curved geometries and
the coupled plane-symmetric Einstein-Euler system.

Subpackages and modules:

* ``mesh``        periodic 1-D/2-D meshes with variable metric
* ``flux``        geometry-compatible flux construction and entropy pairs
* ``riemannian``  monotone finite-volume solver and well-posedness harnesses
* ``lorentzian``  foliated-spacetime solver and trace-norm harnesses
* ``gowdy``       exact fluid Riemann solver, random-choice scheme, geometry
* ``cli``         the ``curvedflux`` command-line entry point
"""

from . import flux, lorentzian, mesh, riemannian
from . import gowdy

__version__ = "0.1.0"

__all__ = ["mesh", "flux", "riemannian", "lorentzian", "gowdy", "__version__"]
