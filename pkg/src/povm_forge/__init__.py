"""Minimally disturbing implementations of symmetric POVMs.

Subpackages: :mod:`povm_forge.circuits` (qudit dilation circuits and a
statevector simulator) and :mod:`povm_forge.contvar` (grid-discretised
continuous-variable analogues).
"""

from . import matcore, povm
from .errors import PovmForgeError
from .report import CheckReport

__version__ = "0.1.0"
