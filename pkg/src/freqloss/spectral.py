"""2D transforms over single image planes.

Fast paths delegate to scipy/numpy pocketfft (mixed-radix, any size):

* dct2/idct2 -- separable orthonormal DCT-II and its inverse. Orthonormal
  scaling (s_0 = sqrt(1/N), s_k = sqrt(2/N)) makes the transform an isometry,
  so Parseval holds exactly and the adjoint equals the inverse.
* fft2 -- unnormalized forward DFT, coeff(u,v) = sum x(m,n) exp(-2*pi*i*(um/M + vn/N)),
  full M x N complex spectrum.

naive_dct2/naive_dft2 evaluate the defining sums directly (O(M^2 N^2), pure
Python accumulation) and exist solely as test oracles for the fast paths.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
import scipy.fft


def _as_plane(plane: np.ndarray) -> np.ndarray:
    a = np.asarray(plane, dtype=np.float64)
    if a.ndim == 3 and a.shape[2] == 1:
        a = a[:, :, 0]
    if a.ndim != 2:
        raise ValueError(f"expected a single 2D plane, got shape {a.shape}")
    return a


def dct2(plane: np.ndarray) -> np.ndarray:
    """Orthonormal 2D DCT-II of a single plane."""
    return scipy.fft.dctn(_as_plane(plane), type=2, norm="ortho")


def idct2(spec: np.ndarray) -> np.ndarray:
    """Inverse (= adjoint) of dct2."""
    a = np.asarray(spec, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"expected a 2D spectrum, got shape {a.shape}")
    return scipy.fft.idctn(a, type=2, norm="ortho")


def fft2(plane: np.ndarray) -> np.ndarray:
    """Unnormalized forward 2D DFT of a single real plane (full spectrum)."""
    return np.fft.fft2(_as_plane(plane))


def naive_dct2(plane: np.ndarray) -> np.ndarray:
    """Brute-force orthonormal 2D DCT-II from the defining sum (test oracle).

    X(u,v) = s_u s_v * sum_{m,n} x(m,n) cos(pi(2m+1)u / 2M) cos(pi(2n+1)v / 2N)

    Independent of the fast path: cosines via math.cos, compensated
    accumulation via math.fsum. Intended for small planes (tests cap at 32).
    """
    x = _as_plane(plane)
    m_len, n_len = x.shape
    cm = [[math.cos(math.pi * (2 * m + 1) * u / (2 * m_len)) for m in range(m_len)]
          for u in range(m_len)]
    cn = [[math.cos(math.pi * (2 * n + 1) * v / (2 * n_len)) for n in range(n_len)]
          for v in range(n_len)]
    su = [math.sqrt((1.0 if u == 0 else 2.0) / m_len) for u in range(m_len)]
    sv = [math.sqrt((1.0 if v == 0 else 2.0) / n_len) for v in range(n_len)]
    out = np.empty((m_len, n_len), dtype=np.float64)
    for u in range(m_len):
        for v in range(n_len):
            acc = math.fsum(
                x[m, n] * cm[u][m] * cn[v][n]
                for m in range(m_len)
                for n in range(n_len)
            )
            out[u, v] = su[u] * sv[v] * acc
    return out


def naive_dft2(plane: np.ndarray) -> np.ndarray:
    """Brute-force unnormalized 2D DFT from the defining sum (test oracle)."""
    x = _as_plane(plane)
    m_len, n_len = x.shape
    out = np.empty((m_len, n_len), dtype=np.complex128)
    for u in range(m_len):
        for v in range(n_len):
            re_parts = []
            im_parts = []
            for m in range(m_len):
                for n in range(n_len):
                    w = cmath.exp(-2j * math.pi * (u * m / m_len + v * n / n_len))
                    re_parts.append(x[m, n] * w.real)
                    im_parts.append(x[m, n] * w.imag)
            out[u, v] = complex(math.fsum(re_parts), math.fsum(im_parts))
    return out
