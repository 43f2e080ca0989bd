"""numpy version of the sector summation kernel (same contract as _kernel)."""
import numpy as np


def _lse(cols):
    mx = np.max(cols, axis=0)
    safe = np.where(np.isfinite(mx), mx, 0.0)
    return safe + np.log(np.sum(np.exp(cols - safe), axis=0))


def _log_sin_run(lg_run):
    """log sin of the summed run; the run never wraps past a large gap."""
    th = np.sum(np.exp(lg_run), axis=0)
    out = np.empty_like(th)
    big = th > 1e-5
    mid = (~big) & (th > 1e-290)
    tiny = ~(big | mid)
    out[big] = np.log(np.sin(th[big]))
    out[mid] = np.log(th[mid]) - th[mid] ** 2 / 6.0
    if np.any(tiny):
        lt = _lse(lg_run[:, tiny])
        out[tiny] = lt - np.exp(2 * lt) / 6.0
    return out


def sector_sum(N, M, lw, lwt, kappa, lkappa, svec, path, gap_arc, gap_in_t,
               log_len, p_arc, pair_a, pair_len, e_re, e_im, c_re, c_im):
    n = lw.shape[0]
    grids = np.meshgrid(*([np.arange(n)] * N), indexing="ij")
    idx = [g.ravel() for g in grids]
    lu = np.stack([lw[idx[v]] / kappa[v] for v in range(N)])
    base = np.zeros(lu.shape[1])
    for v in range(N):
        base += svec[v] * lu[v] - lkappa[v] + lwt[idx[v]]
    logt = np.asarray(path, dtype=float) @ lu
    T = np.zeros((3, lu.shape[1]))
    for k in range(M):
        if gap_in_t[k]:
            T[gap_arc[k]] += np.exp(logt[k])
    l1p = np.log1p(T)
    jac = np.zeros_like(base)
    for a in range(3):
        jac += (p_arc[a] - 1) * log_len[a] - p_arc[a] * l1p[a]
    lg = np.stack([log_len[gap_arc[k]] - l1p[gap_arc[k]] + logt[k] for k in range(M)])
    lr = c_re + base + jac
    li = np.full_like(lr, c_im)
    for q in range(len(pair_a)):
        a, ln = int(pair_a[q]), int(pair_len[q])
        ls = _log_sin_run(lg[[(a + t) % M for t in range(ln)]])
        lr += e_re[q] * ls
        li += e_im[q] * ls
    m = float(np.max(lr))
    mag = np.exp(lr - m)
    return (float(np.sum(mag * np.cos(li))), float(np.sum(mag * np.sin(li))), m, lr.size)
