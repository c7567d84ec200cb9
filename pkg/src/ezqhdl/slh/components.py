"""
Primitive component models.
"""
import cmath
import math

from ezqhdl.slh.operator import Operator
from ezqhdl.slh.triplet import SLHTriplet


def beamsplitter(theta: float) -> SLHTriplet:
    c, s = math.cos(theta), math.sin(theta)
    return SLHTriplet([[c, -s], [s, c]], [0, 0], 0)


def phase(phi: float) -> SLHTriplet:
    return SLHTriplet([[cmath.exp(1j * phi)]], [0], 0)


def displace(alpha: complex) -> SLHTriplet:
    """
    Coherent laser source W(alpha).
    """
    return SLHTriplet([[1]], [complex(alpha)], 0)


def kerr_cavity(Delta: float, chi: float, kappa_1: float, kappa_2: float, label: str, dim: int) -> SLHTriplet:
    """
    Two-port unidirectional ring cavity with a Kerr nonlinearity:
    S = 1, L = (sqrt(kappa_1) a, sqrt(kappa_2) a), H = Delta a^dag a + chi a^dag a^dag a a.
    """
    if kappa_1 < 0 or kappa_2 < 0:
        raise ValueError(f"Cavity decay rates must be non-negative, got {kappa_1} and {kappa_2}")

    a = Operator.annihilation(label, dim)
    a_dag = a.dag()
    H = Delta * (a_dag * a) + chi * (a_dag * a_dag * a * a)

    return SLHTriplet([[1, 0], [0, 1]], [math.sqrt(kappa_1) * a, math.sqrt(kappa_2) * a], H)
