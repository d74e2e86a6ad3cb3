"""Numerical toolkit for flagged and plain spin carriers.

Compares how much direction information two families of qubit carriers
hold with one copy and with two copies, using averaged fidelity, mutual
information, Holevo chi and statistical morphisms between the carriers.
"""

__version__ = "0.1.0"

from . import classical, ensembles, measures, morphisms, qmat, sphere, strategies  # noqa: E402,F401
