"""Compiled inner loops shared by the public API and the solvers.

Everything bit-sensitive lives here once: objective evaluation, exact line
search, the rank-one Cholesky update, low-rank sampling, and the per-scheme
iteration kernels. Public functions call the same routines the solver
kernels inline, so a solver trajectory and a step-by-step reconstruction
through the public API agree bit for bit (the test suite asserts this).

Transcendental constants that also appear in interpreted code (the step
size exponentials, theta, square roots of learning rates) are computed by
the callers in plain Python and passed in as arguments, never recomputed
here, so both sides share identical doubles.
"""

from __future__ import annotations

import numpy as np
from numba import njit

KIND_QUAD = 0
KIND_ROSEN = 1

STATUS_SUCCESS = 0
STATUS_BUDGET = 1
STATUS_LS_FAIL = 2
STATUS_NONFINITE = 3
STATUS_CHOL_FAIL = 4

INV_SQRT10 = 1.0 / np.sqrt(10.0)
BRACKET_DELTA = 1e-8
MAX_EXPANSIONS = 128


@njit(cache=True)
def eval_objective(kind, coeffs, x):
    if kind == KIND_QUAD:
        s = 0.0
        for i in range(x.shape[0]):
            s += coeffs[i] * (x[i] * x[i])
        return 0.5 * s
    s = 0.0
    for i in range(x.shape[0] - 1):
        d = x[i] * x[i] - x[i + 1]
        e = x[i] - 1.0
        s += 100.0 * (d * d) + e * e
    return s


@njit(cache=True)
def vec_norm(u):
    s = 0.0
    for i in range(u.shape[0]):
        s += u[i] * u[i]
    return np.sqrt(s)


@njit(cache=True)
def fill_standard_normal(gen, out):
    for i in range(out.shape[0]):
        out[i] = gen.standard_normal()


@njit(cache=True)
def tri_matvec_lower(lfac, z, out):
    # out = lfac @ z for a lower-triangular factor, sequential sums
    n = lfac.shape[0]
    for i in range(n):
        s = 0.0
        for j in range(i + 1):
            s += lfac[i, j] * z[j]
        out[i] = s


@njit(cache=True)
def lowrank_sample(gen, sqrt_alpha, sqrt_w, paths, live, out):
    # out = sqrt_alpha*z + sum_i sqrt_w[i]*zeta_i*path_i, live path last;
    # draw order (z block, then one zeta per term) is a determinism contract
    n = out.shape[0]
    for i in range(n):
        out[i] = sqrt_alpha * gen.standard_normal()
    for t in range(paths.shape[0]):
        s = sqrt_w[t] * gen.standard_normal()
        for i in range(n):
            out[i] = out[i] + s * paths[t, i]
    s = sqrt_w[sqrt_w.shape[0] - 1] * gen.standard_normal()
    for i in range(n):
        out[i] = out[i] + s * live[i]


@njit(cache=True)
def choldate_core(lfac, w):
    # in place: lfac lfac^T += w w^T; w is workspace and is destroyed.
    # Returns False when rounding destroys the positive diagonal.
    n = lfac.shape[0]
    for k in range(n):
        lkk = lfac[k, k]
        if not (lkk > 0.0) or not np.isfinite(lkk):
            return False
        wk = w[k]
        r = np.sqrt(lkk * lkk + wk * wk)
        if not np.isfinite(r) or r <= 0.0:
            return False
        c = r / lkk
        s = wk / lkk
        lfac[k, k] = r
        for i in range(k + 1, n):
            lfac[i, k] = (lfac[i, k] + s * w[i]) / c
            w[i] = c * w[i] - s * lfac[i, k]
    return True


@njit(cache=True)
def dense_cholesky(c, out):
    # Cholesky-Banachiewicz; returns False instead of raising on PD loss
    n = c.shape[0]
    for i in range(n):
        for j in range(i + 1):
            s = c[i, j]
            for t in range(j):
                s -= out[i, t] * out[j, t]
            if i == j:
                if not (s > 0.0) or not np.isfinite(s):
                    return False
                out[i, i] = np.sqrt(s)
            else:
                out[i, j] = s / out[j, j]
        for j in range(i + 1, n):
            out[i, j] = 0.0
    return True


@njit(cache=True)
def exactls_quad(coeffs, x, u, fx, xn):
    """Closed-form ray minimization for a diagonal quadratic.

    Probes f at x +/- u/|u|, interpolates the exact 1-D parabola, and
    reports the step relative to the raw u so that x + st*u is the
    minimizer. Returns (st, f(x_next), evals, ok); xn receives x_next.
    """
    n = x.shape[0]
    unorm = vec_norm(u)
    for i in range(n):
        xn[i] = x[i] + u[i] / unorm
    fp = eval_objective(KIND_QUAD, coeffs, xn)
    for i in range(n):
        xn[i] = x[i] - u[i] / unorm
    fm = eval_objective(KIND_QUAD, coeffs, xn)
    evals = 2
    a = (fp + fm - 2.0 * fx) / 2.0
    b = (fp - fm) / 2.0
    if a <= 0.0 or not np.isfinite(a) or not np.isfinite(b):
        # flat or degenerate direction: defensive zero step
        for i in range(n):
            xn[i] = x[i]
        return 0.0, fx, evals, True
    lam = -b / (2.0 * a)
    st = lam / unorm
    for i in range(n):
        xn[i] = x[i] + st * u[i]
    fnext = eval_objective(KIND_QUAD, coeffs, xn)
    evals += 1
    if not (fnext <= fx):
        # rounding made the interpolated point worse: keep the iterate
        for i in range(n):
            xn[i] = x[i]
        return 0.0, fx, evals, True
    return st, fnext, evals, True


@njit(cache=True)
def _ray_eval(kind, coeffs, x, u, unorm, lam, xn):
    for i in range(x.shape[0]):
        xn[i] = x[i] + lam * (u[i] / unorm)
    return eval_objective(kind, coeffs, xn)


@njit(cache=True)
def exactls_golden(kind, coeffs, x, u, fx, tol, xn):
    """Ray minimization for non-quadratics: factor-2 bracketing from a
    1e-8 probe, then golden-section to a relative width of tol.

    Same return convention as exactls_quad; ok=False signals a bracketing
    failure (no turn within MAX_EXPANSIONS doublings).
    """
    n = x.shape[0]
    unorm = vec_norm(u)
    delta = BRACKET_DELTA
    fp = _ray_eval(kind, coeffs, x, u, unorm, delta, xn)
    fm = _ray_eval(kind, coeffs, x, u, unorm, -delta, xn)
    evals = 2
    if fp >= fx and fm >= fx:
        # no descent at probe scale along either sign
        for i in range(n):
            xn[i] = x[i]
        return 0.0, fx, evals, True
    if fp < fm:
        sgn = 1.0
        fb = fp
    else:
        sgn = -1.0
        fb = fm
    # walk t along sgn*u/|u| until the function turns upward
    a = 0.0
    fa = fx
    b = delta
    c = 2.0 * delta
    fc = _ray_eval(kind, coeffs, x, u, unorm, sgn * c, xn)
    evals += 1
    expansions = 0
    while fc < fb:
        expansions += 1
        if expansions > MAX_EXPANSIONS:
            for i in range(n):
                xn[i] = x[i]
            return 0.0, fx, evals, False
        a = b
        fa = fb
        b = c
        fb = fc
        c = 2.0 * c
        fc = _ray_eval(kind, coeffs, x, u, unorm, sgn * c, xn)
        evals += 1
    # golden section on (a, c), interior point b already below both ends
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    lo = a
    hi = c
    p1 = hi - inv_phi * (hi - lo)
    p2 = lo + inv_phi * (hi - lo)
    f1 = _ray_eval(kind, coeffs, x, u, unorm, sgn * p1, xn)
    f2 = _ray_eval(kind, coeffs, x, u, unorm, sgn * p2, xn)
    evals += 2
    guard = 0
    while (hi - lo) > tol * (np.abs(lo) + np.abs(hi)) + 1e-300 and guard < 256:
        guard += 1
        if f1 <= f2:
            hi = p2
            p2 = p1
            f2 = f1
            p1 = hi - inv_phi * (hi - lo)
            f1 = _ray_eval(kind, coeffs, x, u, unorm, sgn * p1, xn)
        else:
            lo = p1
            p1 = p2
            f1 = f2
            p2 = lo + inv_phi * (hi - lo)
            f2 = _ray_eval(kind, coeffs, x, u, unorm, sgn * p2, xn)
        evals += 1
    t = p1 if f1 <= f2 else p2
    st = (sgn * t) / unorm
    for i in range(n):
        xn[i] = x[i] + st * u[i]
    fnext = eval_objective(kind, coeffs, xn)
    evals += 1
    if not (fnext <= fx):
        for i in range(n):
            xn[i] = x[i]
        return 0.0, fx, evals, True
    return st, fnext, evals, True


@njit(cache=True)
def checkpoint_push(it, fval, sigma, dval, level,
                    thr_it, thr_f, thr_s, thr_d,
                    st_it, st_f, st_s, st_d,
                    counts, stride_state):
    """Record (it, fval, sigma) into the bounded checkpoint buffers.

    Threshold buffer: one entry per half-decade ladder level crossed
    (the level pointer only moves down, so non-monotone fval sequences
    cannot re-record a level). Stride buffer: one entry every `stride`
    iterations; when full it keeps every other entry and doubles the
    stride, so memory stays bounded for any budget. Returns the new level.
    """
    if fval < level:
        k = counts[0]
        if k < thr_it.shape[0]:
            thr_it[k] = it
            thr_f[k] = fval
            thr_s[k] = sigma
            thr_d[k] = dval
            counts[0] = k + 1
        while fval < level:
            level *= INV_SQRT10
    stride = stride_state[0]
    if it % stride == 0:
        k = counts[1]
        if k == st_it.shape[0]:
            h = k // 2
            for j in range(h):
                st_it[j] = st_it[2 * j + 1]
                st_f[j] = st_f[2 * j + 1]
                st_s[j] = st_s[2 * j + 1]
                st_d[j] = st_d[2 * j + 1]
            counts[1] = h
            stride_state[0] = stride * 2
            if it % stride_state[0] != 0:
                return level
            k = h
        st_it[k] = it
        st_f[k] = fval
        st_s[k] = sigma
        st_d[k] = dval
        counts[1] = k + 1
    return level


@njit(cache=True)
def rp_kernel(gen, kind, coeffs, x, sigma0, up, down, exact, ls_tol,
              budget, target, f0, level0,
              thr_it, thr_f, thr_s, thr_d, st_it, st_f, st_s, st_d,
              counts, stride_state):
    """Isotropic random direction search; x is advanced in place.

    Returns (status, its, fx, sigma, evals, accepts). evals excludes the
    initial f(x0), which the caller already computed as f0.
    """
    n = x.shape[0]
    u = np.empty(n)
    cand = np.empty(n)
    sigma = sigma0
    fx = f0
    level = level0
    evals = 0
    accepts = 0
    for k in range(1, budget + 1):
        for i in range(n):
            u[i] = gen.standard_normal()
        if exact:
            if kind == KIND_QUAD:
                st, fn, ev, ok = exactls_quad(coeffs, x, u, fx, cand)
            else:
                st, fn, ev, ok = exactls_golden(kind, coeffs, x, u, fx, ls_tol, cand)
            evals += ev
            if not ok:
                return STATUS_LS_FAIL, k, fx, sigma, evals, accepts
            for i in range(n):
                x[i] = cand[i]
            fx = fn
            sigma = st
            if st != 0.0:
                accepts += 1
        else:
            for i in range(n):
                cand[i] = x[i] + sigma * u[i]
            fc = eval_objective(kind, coeffs, cand)
            evals += 1
            if fc <= fx:
                for i in range(n):
                    x[i] = cand[i]
                fx = fc
                sigma = sigma * up
                accepts += 1
            else:
                sigma = sigma * down
        if not np.isfinite(fx):
            return STATUS_NONFINITE, k, fx, sigma, evals, accepts
        level = checkpoint_push(k, fx, sigma, 0.0, level,
                                thr_it, thr_f, thr_s, thr_d,
                                st_it, st_f, st_s, st_d, counts, stride_state)
        if fx <= target:
            return STATUS_SUCCESS, k, fx, sigma, evals, accepts
    return STATUS_BUDGET, budget, fx, sigma, evals, accepts


@njit(cache=True)
def sarp_kernel(gen, kind, coeffs, x, y, v, sigma0, up, down, exact, ls_tol,
                theta, drift_coef, verbatim, record_drift,
                budget, target, f0, level0,
                thr_it, thr_f, thr_s, thr_d, st_it, st_f, st_s, st_d,
                counts, stride_state):
    """Accelerated random search with the estimate-sequence coupling.

    x, y, v are advanced in place (all start at x0). The query point is y;
    the reported objective value tracks x, which is what the line search
    emits. drift_coef = theta*n*(lmax/mu) scales the exploration term in
    the v update; verbatim selects the post-update step size for that term
    instead of the step actually taken.
    """
    n = x.shape[0]
    u = np.empty(n)
    cand = np.empty(n)
    sigma = sigma0
    fx = f0
    level = level0
    evals = 0
    accepts = 0
    for k in range(1, budget + 1):
        for i in range(n):
            u[i] = gen.standard_normal()
        fy = eval_objective(kind, coeffs, y)
        evals += 1
        if exact:
            if kind == KIND_QUAD:
                st, fn, ev, ok = exactls_quad(coeffs, y, u, fy, cand)
            else:
                st, fn, ev, ok = exactls_golden(kind, coeffs, y, u, fy, ls_tol, cand)
            evals += ev
            if not ok:
                return STATUS_LS_FAIL, k, fx, sigma, evals, accepts
            for i in range(n):
                x[i] = cand[i]
            fx = fn
            staken = st
            sigma = st
            if st != 0.0:
                accepts += 1
        else:
            for i in range(n):
                cand[i] = y[i] + sigma * u[i]
            fc = eval_objective(kind, coeffs, cand)
            evals += 1
            if fc <= fy:
                for i in range(n):
                    x[i] = cand[i]
                fx = fc
                staken = sigma
                sigma = sigma * up
                accepts += 1
            else:
                for i in range(n):
                    x[i] = y[i]
                fx = fy
                staken = 0.0
                sigma = sigma * down
        stilde = sigma if verbatim else staken
        c2 = drift_coef * stilde
        for i in range(n):
            yi = (theta * v[i] + x[i]) / (1.0 + theta)
            v[i] = (1.0 - theta) * v[i] + theta * yi + c2 * u[i]
            y[i] = yi
        if not np.isfinite(fx):
            return STATUS_NONFINITE, k, fx, sigma, evals, accepts
        dval = 0.0
        if record_drift:
            s2 = 0.0
            for i in range(n):
                d = y[i] - x[i]
                s2 += d * d
            dval = np.sqrt(s2)
        level = checkpoint_push(k, fx, sigma, dval, level,
                                thr_it, thr_f, thr_s, thr_d,
                                st_it, st_f, st_s, st_d, counts, stride_state)
        if fx <= target:
            return STATUS_SUCCESS, k, fx, sigma, evals, accepts
    return STATUS_BUDGET, budget, fx, sigma, evals, accepts


@njit(cache=True)
def cma11_kernel(gen, kind, coeffs, x, sigma0, up, down,
                 one_m_cc, sqrt_cc2, one_m_cp,
                 one_m_ccov, sqrt_one_m_ccov, c_cov, sqrt_ccov,
                 budget, target, f0, level0, lfac, cdense, p,
                 thr_it, thr_f, thr_s, thr_d, st_it, st_f, st_s, st_d,
                 counts, stride_state):
    """Single-parent CMA with success-gated rank-one covariance updates.

    lfac (lower Cholesky factor), cdense (tracked dense covariance, used
    to rebuild the factor if rounding breaks it), and p (evolution path)
    are advanced in place.
    """
    n = x.shape[0]
    z = np.empty(n)
    u = np.empty(n)
    cand = np.empty(n)
    w = np.empty(n)
    sigma = sigma0
    fx = f0
    level = level0
    evals = 0
    accepts = 0
    for k in range(1, budget + 1):
        for i in range(n):
            z[i] = gen.standard_normal()
        tri_matvec_lower(lfac, z, u)
        for i in range(n):
            cand[i] = x[i] + sigma * u[i]
        fc = eval_objective(kind, coeffs, cand)
        evals += 1
        if fc <= fx:
            for i in range(n):
                x[i] = cand[i]
            fx = fc
            for i in range(n):
                p[i] = one_m_cc * p[i] + sqrt_cc2 * u[i]
            for i in range(n):
                pi = p[i]
                for j in range(n):
                    cdense[i, j] = one_m_ccov * cdense[i, j] + c_cov * (pi * p[j])
            for i in range(n):
                for j in range(i + 1):
                    lfac[i, j] = sqrt_one_m_ccov * lfac[i, j]
                w[i] = sqrt_ccov * p[i]
            if not choldate_core(lfac, w):
                if not dense_cholesky(cdense, lfac):
                    return STATUS_CHOL_FAIL, k, fx, sigma, evals, accepts
            sigma = sigma * up
            accepts += 1
        else:
            for i in range(n):
                p[i] = one_m_cp * p[i]
            sigma = sigma * down
        if not np.isfinite(fx):
            return STATUS_NONFINITE, k, fx, sigma, evals, accepts
        level = checkpoint_push(k, fx, sigma, 0.0, level,
                                thr_it, thr_f, thr_s, thr_d,
                                st_it, st_f, st_s, st_d, counts, stride_state)
        if fx <= target:
            return STATUS_SUCCESS, k, fx, sigma, evals, accepts
    return STATUS_BUDGET, budget, fx, sigma, evals, accepts


@njit(cache=True)
def epcma_kernel(gen, kind, coeffs, x, sigma0, up, down,
                 one_m_cc, sqrt_cc2, one_m_cp, sqrt_alpha, sqrt_w,
                 shift_interval, budget, target, f0, level0, ring, p,
                 thr_it, thr_f, thr_s, thr_d, st_it, st_f, st_s, st_d,
                 counts, stride_state):
    """Evolution-path biased search with m-term low-rank sampling.

    ring holds the m-1 stored path snapshots (oldest first) and p the live
    path; both advance in place. sqrt_w has length m with the live path's
    weight last. Snapshots rotate every shift_interval iterations. Zero
    snapshots still consume their Gaussian draw and their covariance
    weight, mirroring the unconditional sequential construction.
    """
    n = x.shape[0]
    m = sqrt_w.shape[0]
    u = np.empty(n)
    cand = np.empty(n)
    sigma = sigma0
    fx = f0
    level = level0
    evals = 0
    accepts = 0
    q = 0
    for k in range(1, budget + 1):
        lowrank_sample(gen, sqrt_alpha, sqrt_w, ring, p, u)
        for i in range(n):
            cand[i] = x[i] + sigma * u[i]
        fc = eval_objective(kind, coeffs, cand)
        evals += 1
        if fc <= fx:
            for i in range(n):
                x[i] = cand[i]
            fx = fc
            for i in range(n):
                p[i] = one_m_cc * p[i] + sqrt_cc2 * u[i]
            sigma = sigma * up
            accepts += 1
        else:
            for i in range(n):
                p[i] = one_m_cp * p[i]
            sigma = sigma * down
        if m > 1 and k > q + shift_interval:
            for t in range(m - 2):
                for i in range(n):
                    ring[t, i] = ring[t + 1, i]
            for i in range(n):
                ring[m - 2, i] = p[i]
            q = k
        if not np.isfinite(fx):
            return STATUS_NONFINITE, k, fx, sigma, evals, accepts
        level = checkpoint_push(k, fx, sigma, 0.0, level,
                                thr_it, thr_f, thr_s, thr_d,
                                st_it, st_f, st_s, st_d, counts, stride_state)
        if fx <= target:
            return STATUS_SUCCESS, k, fx, sigma, evals, accepts
    return STATUS_BUDGET, budget, fx, sigma, evals, accepts


@njit(cache=True)
def mc_one_step_ratio(gen, coeffs, x, trials):
    """Monte Carlo mean and M2 (Welford) of f(x_next)/f(x) for one exact
    line search step along random isotropic directions, on a diagonal
    quadratic. Test and self-check support."""
    n = x.shape[0]
    u = np.empty(n)
    xn = np.empty(n)
    fx = eval_objective(KIND_QUAD, coeffs, x)
    mean = 0.0
    m2 = 0.0
    for t in range(trials):
        for i in range(n):
            u[i] = gen.standard_normal()
        st, fn, ev, ok = exactls_quad(coeffs, x, u, fx, xn)
        r = fn / fx
        d = r - mean
        mean += d / (t + 1)
        m2 += d * (r - mean)
    return mean, m2


@njit(cache=True)
def choldate_stress(gen, n, updates):
    """Reconstruction error after many random convex-combination rank-one
    updates, against an independently accumulated dense matrix."""
    lfac = np.eye(n)
    c = np.eye(n)
    w = np.empty(n)
    v = np.empty(n)
    for t in range(updates):
        cw = 0.01 + 0.19 * gen.random()
        sc = 1.0 - cw
        for i in range(n):
            v[i] = gen.standard_normal()
        for i in range(n):
            for j in range(n):
                c[i, j] = sc * c[i, j] + cw * (v[i] * v[j])
        ssc = np.sqrt(sc)
        scw = np.sqrt(cw)
        for i in range(n):
            for j in range(i + 1):
                lfac[i, j] = ssc * lfac[i, j]
            w[i] = scw * v[i]
        if not choldate_core(lfac, w):
            return 1e300
    err = 0.0
    for i in range(n):
        for j in range(n):
            s = 0.0
            for t2 in range(min(i, j) + 1):
                s += lfac[i, t2] * lfac[j, t2]
            e = abs(s - c[i, j])
            if e > err:
                err = e
    return err
