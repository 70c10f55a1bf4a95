"""Classical reference stack: DFT, radix-2 FFT, d-dimensional discrete Hilbert
transform, the analytic benchmark pair, and envelope extraction.

Everything here is independent of the quantum simulator and serves as the
ground truth it is checked against. Conventions:

* forward transform kernel e^{-2*pi*i*j*w/N}, unnormalized;
* inverse applies the conjugate kernel and a 1/N factor;
* frequency bins 1..N/2 count as positive/Nyquist and carry the -i Hilbert
  multiplier, bins N/2+1..N-1 carry +i, and the DC bin is zeroed. The Nyquist
  bin is deliberately grouped with the -i side so the output matches the
  quantum circuit bin for bin (textbook variants that zero the Nyquist
  multiplier do not).

All functions are pure and safe for concurrent use.
"""

from __future__ import annotations

import numpy as np

from .errors import NonPowerOfTwoLength, ShapeMismatch, ZeroNorm


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def tensor_dims(f: np.ndarray) -> tuple[int, int]:
    """(d, n) of an order-d tensor of shape N x ... x N with N = 2**n >= 2."""
    f = np.asarray(f)
    if f.ndim < 1:
        raise ShapeMismatch("expected an order >= 1 tensor")
    side = f.shape[0]
    if any(s != side for s in f.shape):
        raise ShapeMismatch(f"sides differ: {f.shape}")
    if side < 2 or not _is_pow2(side):
        raise ShapeMismatch(f"side {side} is not a power of two >= 2")
    return f.ndim, side.bit_length() - 1


def dft_bruteforce(x) -> np.ndarray:
    """O(N^2) forward DFT, X_w = sum_j x_j e^{-2*pi*i*j*w/N}. Test oracle only."""
    x = np.asarray(x, dtype=np.complex128).ravel()
    n = len(x)
    j = np.arange(n)
    kernel = np.exp(-2j * np.pi * np.outer(j, j) / n)
    return kernel @ x


def _fft_rows(a: np.ndarray, inverse: bool) -> np.ndarray:
    """Radix-2 FFT along the last axis of a 2-D array, iterative bit-reversal form."""
    rows, n = a.shape
    if n == 1:
        return a.copy()
    bits = n.bit_length() - 1
    rev = np.zeros(n, dtype=np.intp)
    for i in range(1, n):
        rev[i] = (rev[i >> 1] >> 1) | ((i & 1) << (bits - 1))
    out = a[:, rev].astype(np.complex128)
    sgn = 1.0 if inverse else -1.0
    size = 2
    while size <= n:
        half = size // 2
        twiddle = np.exp(sgn * 2j * np.pi * np.arange(half) / size)
        blocks = out.reshape(rows, n // size, size)
        even = blocks[:, :, :half].copy()
        odd = blocks[:, :, half:] * twiddle
        blocks[:, :, :half] = even + odd
        blocks[:, :, half:] = even - odd
        size *= 2
    if inverse:
        out /= n
    return out


def fft(x, inverse: bool = False) -> np.ndarray:
    """Radix-2 Cooley-Tukey FFT of a power-of-two-length vector."""
    x = np.asarray(x, dtype=np.complex128).ravel()
    if not _is_pow2(len(x)):
        raise NonPowerOfTwoLength(f"length {len(x)} is not a power of two")
    return _fft_rows(x[np.newaxis, :], inverse)[0]


def fft_nd(t: np.ndarray, inverse: bool = False) -> np.ndarray:
    """Separable d-dimensional FFT: the 1-D transform applied along every axis."""
    t = np.asarray(t, dtype=np.complex128)
    d, _ = tensor_dims(t)
    out = t
    for axis in range(d):
        moved = np.moveaxis(out, axis, -1)
        shape = moved.shape
        flat = _fft_rows(moved.reshape(-1, shape[-1]), inverse)
        out = np.moveaxis(flat.reshape(shape), -1, axis)
    return out


def hilbert_multiplier(n_side: int) -> np.ndarray:
    """Per-axis frequency filter: 0 at DC, -i on bins 1..N/2, +i on bins N/2+1..N-1."""
    mu = np.zeros(n_side, dtype=np.complex128)
    mu[1 : n_side // 2 + 1] = -1j
    mu[n_side // 2 + 1 :] = 1j
    return mu


def dht_classical(t: np.ndarray) -> np.ndarray:
    """d-dimensional discrete Hilbert transform via FFT and per-axis sign filter.

    The output is complex in general: any spectral energy on a Nyquist bin
    produces an imaginary component, because the unit-magnitude Nyquist
    multiplier cannot preserve conjugate symmetry there.
    """
    t = np.asarray(t, dtype=np.complex128)
    d, n = tensor_dims(t)
    side = 1 << n
    spec = fft_nd(t)
    mu = hilbert_multiplier(side)
    for axis in range(d):
        shape = [1] * d
        shape[axis] = side
        spec = spec * mu.reshape(shape)
    return fft_nd(spec, inverse=True)


def spectral_energy(t: np.ndarray) -> np.ndarray:
    """|f_hat|^2 on every frequency bin, unnormalized-forward convention."""
    return np.abs(fft_nd(t)) ** 2


def analytic_pair(x):
    """Benchmark function sin(x)/(1+x^4) and its closed-form Hilbert transform."""
    x = np.asarray(x, dtype=np.float64)
    denom = 1.0 + x**4
    f = np.sin(x) / denom
    c = np.exp(-1.0 / np.sqrt(2.0))
    hf = (c * np.cos(1.0 / np.sqrt(2.0)) + c * np.sin(1.0 / np.sqrt(2.0)) * x**2 - np.cos(x)) / denom
    return f, hf


def envelope(f) -> np.ndarray:
    """Instantaneous amplitude sqrt(f^2 + H[f]^2) of a real signal.

    Uses the real part of the transform; the imaginary Nyquist residue is an
    artifact of the bin convention, not signal content.
    """
    f = np.asarray(f, dtype=np.float64).ravel()
    if not _is_pow2(len(f)) or len(f) < 2:
        raise NonPowerOfTwoLength(f"length {len(f)} is not a power of two >= 2")
    h = dht_classical(f)
    return np.sqrt(f**2 + h.real**2)


def fidelity(a, b) -> float:
    """|<a|b>|^2 between the unit-normalized vectors; insensitive to global phase."""
    a = np.asarray(a, dtype=np.complex128).ravel()
    b = np.asarray(b, dtype=np.complex128).ravel()
    if a.shape != b.shape:
        raise ShapeMismatch(f"lengths differ: {a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ZeroNorm("fidelity of a zero vector is undefined")
    return float(np.abs(np.vdot(a / na, b / nb)) ** 2)
