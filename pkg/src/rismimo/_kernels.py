"""Hot numeric kernels with two interchangeable backends.

Each kernel exists twice: a plain-numpy implementation (suffix ``_numpy``)
and a numba-compiled loop version.  The active backend is picked once at
import time: numba is used when it imports cleanly and the environment
variable ``RISMIMO_NUMBA`` is not set to ``0``/``false``/``off``.  Both
backends compute the same quantities; they may differ at the level of
floating-point summation order only.

Kernels:
  gain_batch(theta, zeta)      per-user complex array gains for a batch of
                               phase vectors,
  rates_batch(...)             closed-form per-user rates for a batch of
                               gain vectors (the GA fitness hot path),
  channel_stats(G)             squared norms and pairwise |g_k^H g_i|^2 for
                               a batch of sampled cascaded channels.
"""

from __future__ import annotations

import os

import numpy as np


def _numba_requested() -> bool:
    return os.environ.get("RISMIMO_NUMBA", "1").strip().lower() not in {
        "0",
        "false",
        "off",
        "no",
    }


# -------------------------------------------------------------- numpy path

def gain_batch_numpy(theta: np.ndarray, zeta: np.ndarray) -> np.ndarray:
    """Sum_n exp(j*(zeta[c, n] + theta[p, n])) for every (p, c).

    theta: (P, N) phase vectors, zeta: (C, N) per-element offsets toward
    each user.  Returns (P, C) complex.
    """
    return np.exp(1j * (theta[:, None, :] + zeta[None, :, :])).sum(axis=2)


def rates_batch_numpy(
    f: np.ndarray,
    gram: np.ndarray,
    M: int,
    N: int,
    delta: float,
    eps: np.ndarray,
    balpha: np.ndarray,
    p: np.ndarray,
    sigma2: float,
) -> np.ndarray:
    """Closed-form per-user rates for a batch of gain vectors f (P, K).

    gram[k, i] is the inner product of the deterministic user vectors
    h̄_k^H h̄_i; balpha[k] = beta * alpha[k].  Returns (P, K) rates in
    bits/s/Hz.  Mirrors the scalar formulas in :mod:`rismimo.moments`.
    """
    P, K = f.shape
    d = float(delta)
    f2 = np.abs(f) ** 2  # (P, K)
    ck = balpha / ((d + 1.0) * (eps + 1.0))  # (K,)

    noise = M * ck * (d * eps * f2 + (d + eps + 1.0) * N)  # (P, K)

    e = eps
    sig_poly = (
        M * N**2 * (2 * d**2 + e**2 + 2 * d * e + 2 * d + 2 * e + 1)
        + N**2 * (e**2 + 2 * d * e + 2 * d + 2 * e + 1)
        + M * N * (2 * d + 2 * e + 1)
        + N * (2 * d + 2 * e + 1)
    )  # (K,)
    signal = M * ck**2 * (
        M * (d * e) ** 2 * f2**2
        + 2 * d * e * f2 * (2 * M * N * d + M * N * e + M * N + 2 * M + N * e + N + 2)
        + sig_poly
    )  # (P, K)

    # pairwise interference, (P, K, K); the diagonal is ignored
    ek = e[:, None]
    ei = e[None, :]
    cki = (balpha[:, None] * balpha[None, :]) / (
        (d + 1.0) ** 2 * (ek + 1.0) * (ei + 1.0)
    )
    f2k = f2[:, :, None]
    f2i = f2[:, None, :]
    cross = np.real(np.conj(f)[:, :, None] * f[:, None, :] * gram.T[None, :, :])
    interf = M * cki[None, :, :] * (
        M * d**2 * ek * ei * f2k * f2i
        + d * ek * f2k * (d * M * N + N * ei + N + 2 * M)
        + d * ei * f2i * (d * M * N + N * ek + N + 2 * M)
        + N**2 * (M * d**2 + d * (ei + ek + 2.0) + (ek + 1.0) * (ei + 1.0))
        + M * N * (2 * d + ei + ek + 1.0)
        + M * ek * ei * np.abs(gram[None, :, :]) ** 2
        + 2 * M * d * ek * ei * cross
    )

    inter_sum = (p[None, None, :] * interf).sum(axis=2) - np.einsum(
        "pkk->pk", p[None, None, :] * interf
    )
    sinr = p * signal / (inter_sum + sigma2 * noise)
    return np.log2(1.0 + sinr)


def channel_stats_numpy(G: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-sample squared norms and |g_k^H g_i|^2 for G of shape (S, M, K).

    Returns (n2, x2): n2 is (S, K) real, x2 is (S, K, K) with
    x2[s, k, i] = |g_k^H g_i|^2 (diagonal holds the squared norm squared).
    """
    inner = np.einsum("smk,sml->skl", G.conj(), G)
    n2 = np.einsum("skk->sk", inner).real.copy()
    x2 = np.abs(inner) ** 2
    return n2, x2


# -------------------------------------------------------------- numba path

def _build_numba_kernels():
    from numba import njit

    @njit(cache=True)
    def gain_batch_nb(theta, zeta):
        P, N = theta.shape
        C = zeta.shape[0]
        out = np.empty((P, C), dtype=np.complex128)
        for ip in range(P):
            for c in range(C):
                re = 0.0
                im = 0.0
                for n in range(N):
                    ang = zeta[c, n] + theta[ip, n]
                    re += np.cos(ang)
                    im += np.sin(ang)
                out[ip, c] = complex(re, im)
        return out

    @njit(cache=True)
    def rates_batch_nb(f, gram, M, N, delta, eps, balpha, p, sigma2):
        P, K = f.shape
        d = delta
        out = np.empty((P, K))
        gram2 = np.abs(gram) ** 2
        ck = balpha / ((d + 1.0) * (eps + 1.0))
        sig_poly = np.empty(K)
        for k in range(K):
            e = eps[k]
            sig_poly[k] = (
                M * N**2 * (2 * d**2 + e**2 + 2 * d * e + 2 * d + 2 * e + 1)
                + N**2 * (e**2 + 2 * d * e + 2 * d + 2 * e + 1)
                + M * N * (2 * d + 2 * e + 1)
                + N * (2 * d + 2 * e + 1)
            )
        for ip in range(P):
            for k in range(K):
                e = eps[k]
                f2k = abs(f[ip, k]) ** 2
                noise = M * ck[k] * (d * e * f2k + (d + e + 1.0) * N)
                signal = M * ck[k] ** 2 * (
                    M * (d * e) ** 2 * f2k**2
                    + 2 * d * e * f2k
                    * (2 * M * N * d + M * N * e + M * N + 2 * M + N * e + N + 2)
                    + sig_poly[k]
                )
                acc = 0.0
                for i in range(K):
                    if i == k:
                        continue
                    ei = eps[i]
                    f2i = abs(f[ip, i]) ** 2
                    cki = balpha[k] * balpha[i] / (
                        (d + 1.0) ** 2 * (e + 1.0) * (ei + 1.0)
                    )
                    cross = (np.conj(f[ip, k]) * f[ip, i] * gram[i, k]).real
                    interf = M * cki * (
                        M * d**2 * e * ei * f2k * f2i
                        + d * e * f2k * (d * M * N + N * ei + N + 2 * M)
                        + d * ei * f2i * (d * M * N + N * e + N + 2 * M)
                        + N**2 * (M * d**2 + d * (ei + e + 2.0) + (e + 1.0) * (ei + 1.0))
                        + M * N * (2 * d + ei + e + 1.0)
                        + M * e * ei * gram2[k, i]
                        + 2 * M * d * e * ei * cross
                    )
                    acc += p[i] * interf
                sinr = p[k] * signal / (acc + sigma2 * noise)
                out[ip, k] = np.log2(1.0 + sinr)
        return out

    @njit(cache=True)
    def channel_stats_nb(G):
        S, M, K = G.shape
        n2 = np.empty((S, K))
        x2 = np.empty((S, K, K))
        for s in range(S):
            for k in range(K):
                for i in range(k, K):
                    re = 0.0
                    im = 0.0
                    for m in range(M):
                        v = np.conj(G[s, m, k]) * G[s, m, i]
                        re += v.real
                        im += v.imag
                    a2 = re * re + im * im
                    x2[s, k, i] = a2
                    x2[s, i, k] = a2
                    if i == k:
                        n2[s, k] = re
        return n2, x2

    return gain_batch_nb, rates_batch_nb, channel_stats_nb


NUMBA_ACTIVE = False
gain_batch = gain_batch_numpy
rates_batch = rates_batch_numpy
channel_stats = channel_stats_numpy

if _numba_requested():
    try:
        gain_batch, rates_batch, channel_stats = _build_numba_kernels()
        NUMBA_ACTIVE = True
    except ImportError:
        pass
