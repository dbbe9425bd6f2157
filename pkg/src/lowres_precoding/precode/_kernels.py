"""Compiled hot loops for coordinate minimization over the transmit alphabet.

State layout shared by all kernels:

* ``x``      (T, N)     current transmit symbols
* ``hx``     (T, K)     noiseless channel output ``sum_tau H[tau] x[t - tau]``
* ``resid``  (T, K)     ``u - alpha * hx``
* ``cols``   (N, L, K)  ``cols[n, tau] = H[tau][:, n]``
* ``cum_energy`` (N, L + 1) running sums of ``||H[tau][:, n]||^2`` over tau

Changing ``x[t, n]`` by ``d`` moves the cost by
``alpha^2 |d|^2 E - 2 alpha Re(conj(d) g)`` where ``g`` correlates the
column taps with the residual window ``t .. min(t + L, T) - 1``.
Operation counts are complex multiplications.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def best_move(x, resid, cols, cum_energy, points, alpha, t, n):
    n_slots, n_ue = resid.shape
    width = min(cols.shape[1], n_slots - t)
    g = 0j
    for tau in range(width):
        for k in range(n_ue):
            g += np.conj(cols[n, tau, k]) * resid[t + tau, k]
    energy = cum_energy[n, width]
    old = x[t, n]
    best = -1
    best_delta = 0.0
    a2e = alpha * alpha * energy
    for i in range(points.size):
        d = points[i] - old
        delta = a2e * (d.real * d.real + d.imag * d.imag) - 2.0 * alpha * (d.real * g.real + d.imag * g.imag)
        if delta < best_delta:
            best_delta = delta
            best = i
    return best, best_delta, width * n_ue + points.size


@njit(cache=True)
def apply_move(x, hx, resid, cols, alpha, t, n, new):
    n_slots, n_ue = resid.shape
    width = min(cols.shape[1], n_slots - t)
    d = new - x[t, n]
    x[t, n] = new
    for tau in range(width):
        for k in range(n_ue):
            dh = d * cols[n, tau, k]
            hx[t + tau, k] += dh
            resid[t + tau, k] -= alpha * dh
    return width * n_ue


@njit(cache=True)
def sweep(x, hx, resid, cols, cum_energy, points, alpha, cost, order, active, greedy, start, stop, trace):
    """Run flattened updates ``start .. stop - 1`` of one pass over the block.

    Update ``j`` belongs to slot ``j // N``.  With ``greedy`` the antenna is
    chosen jointly with its symbol among the still-``active`` antennas;
    otherwise ``order[t, j % N]`` fixes it.  Only strict improvements are
    applied.  Returns the new cached cost and the operation count.
    """
    n_tx = x.shape[1]
    ops = 0
    for j in range(start, stop):
        t = j // n_tx
        r = j - t * n_tx
        if greedy:
            if r == 0:
                active[:] = True
            sel_n = -1
            sel_i = -1
            sel_delta = 0.0
            for n in range(n_tx):
                if not active[n]:
                    continue
                i, delta, c = best_move(x, resid, cols, cum_energy, points, alpha, t, n)
                ops += c
                if delta < sel_delta:
                    sel_delta = delta
                    sel_i = i
                    sel_n = n
            if sel_n >= 0:
                ops += apply_move(x, hx, resid, cols, alpha, t, sel_n, points[sel_i])
                cost += sel_delta
                active[sel_n] = False
            else:
                # nothing improves: later rounds of this slot see the same state
                active[:] = False
        else:
            n = order[t, r]
            i, delta, c = best_move(x, resid, cols, cum_energy, points, alpha, t, n)
            ops += c
            if i >= 0:
                ops += apply_move(x, hx, resid, cols, alpha, t, n, points[i])
                cost += delta
        if trace.size > 0:
            trace[j - start] = cost
    return cost, ops
