"""Complex special functions: log-Gamma, Beta, 2F1, 3F2 at unit argument.

Everything here works on Python ``complex`` scalars.  Pole detection is
absolute on the argument (``POLE_TOL``) so callers get ``PoleAt`` instead
of a huge finite number.
"""
import cmath
import math

from .errors import Divergent, NonConvergent, PoleAt

POLE_TOL = 1e-12

# Lanczos-type fit, g = 671/128, fourteen terms
_G = 5.2421875
_C0 = 0.999999999999997092
_LANCZOS = (
    57.1562356658629235, -59.5979603554754912, 14.1360979747417471,
    -0.491913816097620199, 0.339946499848118887e-4, 0.465236289270485756e-4,
    -0.983744753048795646e-4, 0.158088703224912494e-3, -0.210264441724104883e-3,
    0.217439618115212643e-3, -0.164318106536763890e-3, 0.844182239838527433e-4,
    -0.261908384015814087e-4, 0.368991826595316234e-5,
)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)


def _nonpos_int(z, tol=POLE_TOL):
    """Return n if z is within tol of -n (n >= 0), else None."""
    z = complex(z)
    if z.real > 0.5 or abs(z.imag) > tol:
        return None
    r = round(z.real)
    if abs(z.real - r) <= tol:
        return int(-r)
    return None


def sinpi(z):
    """sin(pi z) with exact argument reduction on the real part."""
    z = complex(z)
    n = round(z.real)
    u = complex(z.real - n, z.imag)
    s = cmath.sin(math.pi * u)
    return -s if n % 2 else s


def cospi(z):
    z = complex(z)
    n = round(z.real)
    u = complex(z.real - n, z.imag)
    c = cmath.cos(math.pi * u)
    return -c if n % 2 else c


def _lanczos_sum(z):
    x = _C0
    for i, c in enumerate(_LANCZOS):
        x += c / (z + i + 1)
    return x


def _wrap(w):
    im = math.remainder(w.imag, 2.0 * math.pi)
    if im <= -math.pi:
        im += 2.0 * math.pi
    return complex(w.real, im)


def _log_gamma_raw(z):
    # log Gamma on Re z >= 0.5, continuous branch (not wrapped)
    t = z + _G
    return _LOG_SQRT_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(_lanczos_sum(z) / z)


def log_gamma(z):
    """Principal log of Gamma(z); imaginary part in (-pi, pi]."""
    z = complex(z)
    n = _nonpos_int(z)
    if n is not None:
        raise PoleAt(-n, "log_gamma")
    if z.real < 0.5:
        w = _LOG_PI - cmath.log(sinpi(z)) - _log_gamma_raw(1.0 - z)
    else:
        w = _log_gamma_raw(z)
    return _wrap(w)


def _gamma_pos(z):
    t = z + _G
    return math.sqrt(2.0 * math.pi) * cmath.exp((z + 0.5) * cmath.log(t) - t) * (_lanczos_sum(z) / z)


def gamma(z):
    """Complex Gamma; raises PoleAt near nonpositive integers."""
    z = complex(z)
    n = _nonpos_int(z)
    if n is not None:
        raise PoleAt(-n, "gamma")
    if z.real < 0.5:
        return math.pi / (sinpi(z) * _gamma_pos(1.0 - z))
    if z.real > 140.0:
        return cmath.exp(_log_gamma_raw(z))
    return _gamma_pos(z)


def rgamma(z):
    """1/Gamma(z), entire; exact zero on the nonpositive integers."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        return 0j
    if z.real < 0.5:
        return sinpi(z) * _gamma_pos(1.0 - z) / math.pi
    if z.real > 140.0:
        return cmath.exp(-_log_gamma_raw(z))
    return 1.0 / _gamma_pos(z)


def beta_mero(alpha, beta):
    """Gamma(1+a)Gamma(1+b)/Gamma(2+a+b), i.e. the integral of x^a (1-x)^b."""
    alpha, beta = complex(alpha), complex(beta)
    for name, v in (("alpha", alpha), ("beta", beta)):
        n = _nonpos_int(1.0 + v)
        if n is not None:
            raise PoleAt(-n - 1, f"beta_mero {name}")
    return gamma(1.0 + alpha) * gamma(1.0 + beta) * rgamma(2.0 + alpha + beta)


def digamma_factor(k, g):
    """Gamma(1+k g)/Gamma(1+g), with the removable points g in Z<0 filled in."""
    if k < 1 or int(k) != k:
        raise ValueError("k must be a positive integer")
    k = int(k)
    g = complex(g)
    if k == 1:
        return 1.0 + 0j
    n = _nonpos_int(g, 1e-9)
    if n is not None and n > 0:
        # g -> -n: both Gammas have poles; ratio of residues
        sign = -1.0 if (k * n - n) % 2 else 1.0
        return complex(sign / k * math.exp(math.lgamma(n) - math.lgamma(k * n)))
    if _nonpos_int(1.0 + k * g) is not None:
        raise PoleAt(-(k * g).real, "digamma_factor")
    if (1.0 + g).real >= 0.5 and (1.0 + k * g).real >= 0.5:
        return gamma(1.0 + k * g) * rgamma(1.0 + g)
    # reflection on both; sin ratio taken with exact reduction
    ratio = sinpi(g) / sinpi(k * g)
    return ratio * gamma(-g) * rgamma(-k * g)


def poch(a, n):
    out = 1.0 + 0j
    for i in range(n):
        out *= a + i
    return out


# ----------------------------------------------------------------- 2F1

def _terminates(a):
    n = _nonpos_int(a)
    return n


def _series_2f1(a, b, c, z, nmax):
    s = 1.0 + 0j
    t = 1.0 + 0j
    for k in range(nmax):
        t *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        s += t
        if t == 0 or (k > 4 and abs(t) < 1e-17 * abs(s)):
            return s, k
    return s, nmax


def _ode_step(a, b, c, z0, w, dw, h):
    """Advance (w, w') of the hypergeometric equation from z0 to z0+h."""
    p0 = z0 * (1.0 - z0)
    p1 = 1.0 - 2.0 * z0
    q0 = c - (a + b + 1.0) * z0
    q1 = -(a + b + 1.0)
    r = -a * b
    # coefficients in powers of h; c_k h^k
    ck0, ck1 = w, dw * h
    val = ck0 + ck1
    der = ck1
    scale = abs(ck0) + abs(ck1)
    small = 0
    for k in range(0, 400):
        # w_{k+2} h^{k+2} from w_{k+1} h^{k+1}, w_k h^k
        ck2 = -((p1 * k * (k + 1) + q0 * (k + 1)) * ck1 * h
                + (-k * (k - 1) + q1 * k + r) * ck0 * h * h) / (p0 * (k + 2) * (k + 1))
        if p1 != p1:
            break
        val += ck2
        der += (k + 2) * ck2
        scale = max(scale, abs(ck2))
        if abs(ck2) * (k + 3) <= 1e-17 * max(scale, 1e-300):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        ck0, ck1 = ck1, ck2
    else:
        raise NonConvergent("2F1 Taylor step did not converge")
    return val, der / h


def _path_points(z):
    # keep the path about a unit away from the singular point z = 1
    if z.real > 1.0 and abs(z.imag) < 2.0:
        s = 1.0 if z.imag > 0 else -1.0
        return [complex(1.0, s), z]
    return [z]


def _large_z(a, b, c, z):
    # 1/z connection formula; b - a kept away from the integers by the caller
    w = 1.0 / z
    lmz = cmath.log(-z)
    t1 = gamma(b - a) * rgamma(b) * rgamma(c - a) * cmath.exp(-a * lmz) \
        * _series_2f1(a, a - c + 1, a - b + 1, w, 5000)[0]
    t2 = gamma(a - b) * rgamma(a) * rgamma(c - b) * cmath.exp(-b * lmz) \
        * _series_2f1(b, b - c + 1, b - a + 1, w, 5000)[0]
    return gamma(c) * (t1 + t2)


def hyp2f1(a, b, c, z):
    """Gauss 2F1 on the principal branch.

    Series for |z| < 0.75, the 1/z connection formula for |z| > 2 when
    b - a is not close to an integer.  Elsewhere the hypergeometric ODE is integrated
    by Taylor steps from a point inside the unit disc, along a path that
    stays off the cut [1, inf).  Integer-degenerate parameter cases need no
    special treatment this way.  Points on the cut itself are taken from
    the lower side, as mpmath does.
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    if a == 0 or b == 0 or z == 0:
        return 1.0 + 0j
    nc = _nonpos_int(c)
    na, nb = _terminates(a), _terminates(b)
    nt = min([x for x in (na, nb) if x is not None], default=None)
    if nc is not None and (nt is None or nt > nc):
        raise PoleAt(-nc, "hyp2f1 c")
    if nt is not None:
        a = complex(-nt) if na == nt else a
        b = complex(-nt) if nb == nt else b
        s = 1.0 + 0j
        t = 1.0 + 0j
        for k in range(nt):
            t *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
            s += t
        return s
    if abs(z - 1.0) < 1e-15:
        if (c - a - b).real > 0:
            return gamma(c) * gamma(c - a - b) * rgamma(c - a) * rgamma(c - b)
        raise NonConvergent("2F1 at z=1 with Re(c-a-b) <= 0")
    if abs(z) < 0.75:
        s, k = _series_2f1(a, b, c, z, 5000)
        if k >= 5000:
            raise NonConvergent("2F1 series")
        return s
    d = b - a
    if abs(z) > 2.0 and not (z.imag == 0.0 and z.real > 1.0) \
            and (abs(d.imag) > 0.05 or abs(d.real - round(d.real)) > 0.05):
        return _large_z(a, b, c, z)
    pts = _path_points(z)
    first = pts[0]
    z0 = 0.5 * first / abs(first)
    w = _series_2f1(a, b, c, z0, 5000)[0]
    dw = a * b / c * _series_2f1(a + 1, b + 1, c + 1, z0, 5000)[0]
    cur = z0
    for target in pts:
        for _ in range(10000):
            rem = target - cur
            dist = abs(rem)
            if dist == 0.0:
                break
            rad = min(abs(cur), abs(1.0 - cur))
            step = min(dist, 0.45 * rad)
            h = rem if step == dist else rem * (step / dist)
            w, dw = _ode_step(a, b, c, cur, w, dw, h)
            cur = target if step == dist else cur + h
        else:
            raise NonConvergent("2F1 path continuation")
    return w


# ----------------------------------------------------------------- 3F2(1)

def _richardson_tail(partial_at, sexp):
    """Extrapolate partial sums S_K, K = 2^lo..2^hi, with S_K - S ~ sum_j c_j K^-(s+j).

    Doubling K makes each elimination step well conditioned.
    """
    rows = [list(partial_at)]
    best, best_d = None, math.inf
    for j in range(len(partial_at) - 1):
        f = 2.0 ** (sexp + j)
        prev = rows[-1]
        new = [(f * prev[i + 1] - prev[i]) / (f - 1.0) for i in range(len(prev) - 1)]
        rows.append(new)
        if len(new) >= 2:
            d = abs(new[-1] - new[-2])
            if d < best_d:
                best_d, best = d, new[-1]
    return best, best_d


def hyp3f2_at1(a, b):
    """3F2(a1,a2,a3; b1,b2; 1).

    Raw partial sums when they converge fast.  When the tail decays
    algebraically, Richardson extrapolation on doubling partial sums.
    Requires Re(s) > 0 for s = sum(b) - sum(a) unless some a_i is a
    nonpositive integer.
    """
    a = [complex(x) for x in a]
    b = [complex(x) for x in b]
    if len(a) != 3 or len(b) != 2:
        raise ValueError("need three a and two b parameters")
    nts = [_terminates(x) for x in a]
    nt = min([x for x in nts if x is not None], default=None)
    for bi in b:
        nb = _nonpos_int(bi)
        if nb is not None and (nt is None or nt > nb):
            raise PoleAt(-nb, "hyp3f2 b")
    if nt is not None:
        a = [complex(-nt) if nts[i] == nt else a[i] for i in range(3)]
        s = 1.0 + 0j
        t = 1.0 + 0j
        for k in range(nt):
            t *= (a[0] + k) * (a[1] + k) * (a[2] + k) / ((b[0] + k) * (b[1] + k) * (k + 1.0))
            s += t
        return s
    sexp = b[0] + b[1] - a[0] - a[1] - a[2]
    if sexp.real <= 0:
        raise Divergent(f"3F2 at 1 diverges: Re(s) = {sexp.real:.6g} <= 0")
    t = 1.0 + 0j
    total = 1.0 + 0j
    checkpoints = []
    for k in range(1 << 13):
        t *= (a[0] + k) * (a[1] + k) * (a[2] + k) / ((b[0] + k) * (b[1] + k) * (k + 1.0))
        total += t
        n = k + 1
        if n > 10 and abs(t) * n / sexp.real < 1e-17 * abs(total):
            return total
        if n >= 32 and n & (n - 1) == 0:
            checkpoints.append(total)
    # algebraic tail: Richardson over K = 32, 64, ..., 8192
    best, best_d = _richardson_tail(checkpoints, sexp)
    if best is None or not best_d < 1e-8 * max(1.0, abs(best)):
        raise NonConvergent("3F2 tail extrapolation failed")
    return best
