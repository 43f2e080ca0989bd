"""Reproducible random parameter points for the verification suites."""
import random

from .combinatorics import RegionShape
from .functionals import GenericParams, SymmetricParams, omega_margin


def rng(seed):
    return random.Random(seed)


def _round(x, digits=6):
    # short decimals keep JSON output readable and byte-stable
    return round(x, digits)


def symmetric_point(r, shapes, margin=0.1, box=((-0.95, 1.5), (-0.95, 1.5), (-0.45, 1.0)),
                    tries=20000):
    """Real (alpha, beta, gamma) admissible for every shape in ``shapes``."""
    shapes = [s if isinstance(s, RegionShape) else RegionShape(*s) for s in shapes]
    for _ in range(tries):
        a, b, g = (_round(r.uniform(*iv)) for iv in box)
        p = SymmetricParams(a, b, g)
        if all(omega_margin(s, p.generic(s.N)) >= margin for s in shapes):
            return p
    raise RuntimeError("no admissible point found; widen the box")


def generic_point(r, shape, margin=0.1, box=((-0.95, 1.0), (-0.95, 1.0), (-0.3, 0.6)),
                  tries=20000, accept=None):
    """Real generic parameters with Omega-margin on ``shape``; ``accept`` filters further."""
    shape = shape if isinstance(shape, RegionShape) else RegionShape(*shape)
    N = shape.N
    npairs = N * (N - 1) // 2
    for _ in range(tries):
        al = [_round(r.uniform(*box[0])) for _ in range(N)]
        be = [_round(r.uniform(*box[1])) for _ in range(N)]
        ga = [_round(r.uniform(*box[2])) for _ in range(npairs)]
        p = GenericParams.make(al, be, ga if npairs else [])
        if accept is not None:
            if accept(p):
                return p
        elif omega_margin(shape, p) >= margin:
            return p
    raise RuntimeError("no admissible point found; widen the box")


def off_integer(r, lo, hi, gap=0.1):
    while True:
        x = _round(r.uniform(lo, hi))
        if abs(x - round(x)) >= gap:
            return x
