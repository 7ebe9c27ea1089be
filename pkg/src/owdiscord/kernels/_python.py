"""Measurement-optimization kernels, plain numpy.

This file is also the source the numba backend compiles (see ``_numba.py``),
so everything outside ``average_conditional`` sticks to the numba-supported
subset of numpy. ``average_conditional`` is replaced by the loop version
``average_conditional_loops`` when compiled.

Objective data layout: ``R`` is a bipartite density matrix reshaped to
``(dX, dY, dX, dY)``; measurement acts on Y, entropies are taken on X.
"""

import numpy as np

CUTOFF = 1e-12

MODE_ENTROPY = 0
MODE_CONCURRENCE = 1


def coisometry(params, d, K):
    """First ``d`` rows of diag(e^{i a}) G_01 G_02 ... G_{K-2,K-1}.

    Layout of ``params`` (length K*K): K(K-1)/2 Givens angles, K(K-1)/2
    Givens phases (pairs in lexicographic order), then K diagonal phases.
    """
    npair = K * (K - 1) // 2
    W = np.zeros((d, K), dtype=np.complex128)
    for i in range(d):
        W[i, i] = 1.0
    p = 0
    for i in range(K - 1):
        for j in range(i + 1, K):
            c = np.cos(params[p])
            s = np.sin(params[p])
            ph = np.exp(1j * params[npair + p])
            for r in range(d):
                wi = W[r, i]
                wj = W[r, j]
                W[r, i] = c * wi + s * np.conj(ph) * wj
                W[r, j] = -s * ph * wi + c * wj
            p += 1
    for r in range(d):
        e = np.exp(1j * params[2 * npair + r])
        for k in range(K):
            W[r, k] = W[r, k] * e
    return W


def _xlogx_sum(lam, p):
    # sum of -q log2 q over q = lam / p, dropping q <= CUTOFF
    s = 0.0
    for x in lam:
        q = x / p
        if q > CUTOFF:
            s -= q * np.log2(q)
    return s


def average_conditional(params, R, dX, dY, K, mode):
    """Sum_k p_k f(rho_k^X) for the POVM built from ``params`` acting on Y.

    f is the von Neumann entropy (MODE_ENTROPY) or, for dX == 2, the
    concurrence 2 sqrt(det) of a pure component's marginal (MODE_CONCURRENCE).
    """
    V = coisometry(params, dY, K)
    sig = np.einsum("bk,abcd,dk->kac", V.conj(), R, V)
    p = np.einsum("kaa->k", sig).real
    if mode == MODE_CONCURRENCE:
        det = (sig[:, 0, 0] * sig[:, 1, 1] - sig[:, 0, 1] * sig[:, 1, 0]).real
        return float(2.0 * np.sum(np.sqrt(np.clip(det[p > CUTOFF], 0.0, None))))
    lam = np.linalg.eigvalsh(sig[p > CUTOFF])
    total = 0.0
    for k, pk in enumerate(p[p > CUTOFF]):
        total += pk * _xlogx_sum(lam[k], pk)
    return total


def average_conditional_loops(params, R, dX, dY, K, mode):
    """Loop form of :func:`average_conditional`; closed-form 2x2 spectra."""
    V = coisometry(params, dY, K)
    sig = np.empty((dX, dX), dtype=np.complex128)
    lam = np.empty(dX)
    total = 0.0
    for k in range(K):
        for a in range(dX):
            for c in range(dX):
                acc = 0j
                for b in range(dY):
                    vb = np.conj(V[b, k])
                    if vb == 0:
                        continue
                    for e in range(dY):
                        acc += vb * R[a, b, c, e] * V[e, k]
                sig[a, c] = acc
        pk = 0.0
        for a in range(dX):
            pk += sig[a, a].real
        if pk <= CUTOFF:
            continue
        if mode == MODE_CONCURRENCE:
            det = (sig[0, 0] * sig[1, 1] - sig[0, 1] * sig[1, 0]).real
            if det > 0.0:
                total += 2.0 * np.sqrt(det)
            continue
        if dX == 2:
            half = 0.5 * (sig[0, 0].real - sig[1, 1].real)
            off = sig[0, 1].real ** 2 + sig[0, 1].imag ** 2
            rad = np.sqrt(half * half + off)
            lam[0] = 0.5 * pk + rad
            lam[1] = 0.5 * pk - rad
        else:
            for a in range(dX):
                sig[a, a] = sig[a, a].real
                for c in range(a + 1, dX):
                    sig[c, a] = np.conj(sig[a, c])
            lam[:] = np.linalg.eigvalsh(sig)
        total += pk * _xlogx_sum(lam, pk)
    return total


def nelder_mead(x0, R, dX, dY, K, mode, sign, step, maxiter, fatol):
    """Minimize ``sign * average_conditional`` from ``x0``.

    Stops once the spread of objective values over the simplex is at most
    ``fatol``, or after ``maxiter`` iterations. Adaptive coefficients for
    dimension >= 4.

    Returns (x_best, f_best, iterations, converged) with f_best unsigned.
    """
    n = x0.shape[0]
    if n >= 4:
        rho = 1.0
        chi = 1.0 + 2.0 / n
        psi = 0.75 - 1.0 / (2.0 * n)
        sigma = 1.0 - 1.0 / n
    else:
        rho, chi, psi, sigma = 1.0, 2.0, 0.5, 0.5
    sim = np.empty((n + 1, n))
    fs = np.empty(n + 1)
    for i in range(n + 1):
        for j in range(n):
            sim[i, j] = x0[j]
        if i > 0:
            sim[i, i - 1] += step
        fs[i] = sign * average_conditional(sim[i], R, dX, dY, K, mode)
    xbar = np.empty(n)
    it = 0
    converged = False
    while it < maxiter:
        order = np.argsort(fs, kind="mergesort")
        sim = sim[order]
        fs = fs[order]
        if fs[n] - fs[0] <= fatol:
            converged = True
            break
        it += 1
        for j in range(n):
            acc = 0.0
            for i in range(n):
                acc += sim[i, j]
            xbar[j] = acc / n
        xr = (1.0 + rho) * xbar - rho * sim[n]
        fr = sign * average_conditional(xr, R, dX, dY, K, mode)
        shrink = False
        if fr < fs[0]:
            xe = (1.0 + rho * chi) * xbar - rho * chi * sim[n]
            fe = sign * average_conditional(xe, R, dX, dY, K, mode)
            if fe < fr:
                sim[n] = xe
                fs[n] = fe
            else:
                sim[n] = xr
                fs[n] = fr
        elif fr < fs[n - 1]:
            sim[n] = xr
            fs[n] = fr
        elif fr < fs[n]:
            xc = (1.0 + psi * rho) * xbar - psi * rho * sim[n]
            fc = sign * average_conditional(xc, R, dX, dY, K, mode)
            if fc <= fr:
                sim[n] = xc
                fs[n] = fc
            else:
                shrink = True
        else:
            xcc = (1.0 - psi) * xbar + psi * sim[n]
            fcc = sign * average_conditional(xcc, R, dX, dY, K, mode)
            if fcc < fs[n]:
                sim[n] = xcc
                fs[n] = fcc
            else:
                shrink = True
        if shrink:
            for i in range(1, n + 1):
                sim[i] = sim[0] + sigma * (sim[i] - sim[0])
                fs[i] = sign * average_conditional(sim[i], R, dX, dY, K, mode)
    best = np.argmin(fs)
    return sim[best].copy(), sign * fs[best], it, converged


def multistart(starts, R, dX, dY, K, mode, sign, step, maxiter, fatol, polish):
    """Run :func:`nelder_mead` from every row of ``starts``.

    Each converged run is restarted from its own optimum with a fresh simplex,
    up to ``polish`` times, until a restart no longer improves by more than
    ``fatol``; this guards against simplex collapse on a non-stationary point.
    """
    nstart = starts.shape[0]
    n = starts.shape[1]
    values = np.empty(nstart)
    xs = np.empty((nstart, n))
    iters = np.zeros(nstart, dtype=np.int64)
    conv = np.zeros(nstart, dtype=np.bool_)
    for r in range(nstart):
        x, f, it, ok = nelder_mead(starts[r], R, dX, dY, K, mode, sign, step, maxiter, fatol)
        total = it
        for _ in range(polish):
            if not ok:
                break
            x2, f2, it2, ok2 = nelder_mead(x, R, dX, dY, K, mode, sign, step, maxiter, fatol)
            total += it2
            improved = sign * (f - f2) > fatol
            if sign * f2 < sign * f:
                x = x2
                f = f2
            ok = ok2
            if not improved:
                break
        values[r] = f
        xs[r] = x
        iters[r] = total
        conv[r] = ok
    return values, xs, iters, conv
