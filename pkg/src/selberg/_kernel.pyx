# cython: language_level=3
"""Compiled tensor-grid summation for one sector of the ordered-region integral."""
from libc.math cimport exp, log, log1p, sin, cos, INFINITY

cimport cython


cdef inline double _lse_run(double* lg, int start, int length, int M) nogil:
    cdef int t, k
    cdef double mx = -INFINITY
    cdef double s = 0.0
    for t in range(length):
        k = (start + t) % M
        if lg[k] > mx:
            mx = lg[k]
    if mx == -INFINITY:
        return mx
    for t in range(length):
        k = (start + t) % M
        s += exp(lg[k] - mx)
    return mx + log(s)


cdef inline double _log_sin_run(double* g, double* lg, int start, int length, int M) nogil:
    """log sin(theta) for theta the sum of a run of gaps."""
    cdef int t
    cdef double th = 0.0
    cdef double lt
    for t in range(length):
        th += g[(start + t) % M]
    if th > 1e-5:
        return log(sin(th))
    if th > 1e-290:
        return log(th) - th * th / 6.0
    lt = _lse_run(lg, start, length, M)
    return lt - exp(2.0 * lt) / 6.0


@cython.boundscheck(False)
@cython.wraparound(False)
def sector_sum(int N, int M,
               const double[::1] lw, const double[::1] lwt,
               const double[::1] kappa, const double[::1] lkappa, const double[::1] svec,
               const int[:, ::1] path, const int[::1] gap_arc, const int[::1] gap_in_t,
               const double[::1] log_len, const int[::1] p_arc,
               const int[::1] pair_a, const int[::1] pair_len,
               const double[::1] e_re, const double[::1] e_im,
               double c_re, double c_im):
    """Return (re, im, log_scale, count): sum = (re + i im) * exp(log_scale)."""
    cdef int n = lw.shape[0]
    cdef int P = pair_a.shape[0]
    cdef int idx[8]
    cdef double lu[8]
    cdef double lg[16]
    cdef double g[16]
    cdef double logt[16]
    cdef double T[3]
    cdef double l1p[3]
    cdef int v, k, a, q, t
    cdef double base, lr, li, lt, ls, jac, mag
    cdef double acc_re = 0.0, acc_im = 0.0, m = -INFINITY
    cdef long count = 0
    cdef bint done = False

    if N > 8 or M > 16:
        raise ValueError("dimension too large for the compiled kernel")
    for v in range(N):
        idx[v] = 0

    with nogil:
        while not done:
            base = 0.0
            for v in range(N):
                lu[v] = lw[idx[v]] / kappa[v]
                base += svec[v] * lu[v] - lkappa[v] + lwt[idx[v]]
            T[0] = 0.0
            T[1] = 0.0
            T[2] = 0.0
            for k in range(M):
                lt = 0.0
                for v in range(N):
                    if path[k, v]:
                        lt += lu[v]
                logt[k] = lt
                if gap_in_t[k]:
                    T[gap_arc[k]] += exp(lt)
            jac = 0.0
            for a in range(3):
                l1p[a] = log1p(T[a])
                jac += (p_arc[a] - 1) * log_len[a] - p_arc[a] * l1p[a]
            for k in range(M):
                lg[k] = log_len[gap_arc[k]] - l1p[gap_arc[k]] + logt[k]
                g[k] = exp(lg[k])
            lr = c_re + base + jac
            li = c_im
            for q in range(P):
                ls = _log_sin_run(g, lg, pair_a[q], pair_len[q], M)
                lr += e_re[q] * ls
                li += e_im[q] * ls
            if lr > m:
                mag = exp(m - lr)
                acc_re *= mag
                acc_im *= mag
                m = lr
            mag = exp(lr - m)
            acc_re += mag * cos(li)
            acc_im += mag * sin(li)
            count += 1
            # odometer
            t = N - 1
            while t >= 0:
                idx[t] += 1
                if idx[t] < n:
                    break
                idx[t] = 0
                t -= 1
            if t < 0:
                done = True
    return acc_re, acc_im, m, count
