"""Degree-2 Siegel modular forms mod p: expansions, theta operators, filtrations."""

from .halfint import HalfIntMat, reduce, enumerate_keys
from .qexp import QExp1, QExp2, sturm_bound, reduce_mod, congruent_mod_p
from .genforms import GeneratorCache, default_cache, siegel_eisenstein
from .ringmodp import IsobaricPoly, psi, psi_inv, h_poly, omega1, kernel_theta
from .thetaops import theta, theta1, a_op

__version__ = "0.1.0"
