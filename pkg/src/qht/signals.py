"""Demo signal generators and detection helpers shared by tests, service, and CLI."""

from __future__ import annotations

import numpy as np


def analytic_grid(n: int = 7, step: float = 0.01) -> np.ndarray:
    """N = 2**n sample points (k - N/2) * step, centered about x = 0."""
    size = 1 << n
    return (np.arange(size) - size // 2) * step


def fit_length(values: np.ndarray, n: int | None = None) -> tuple[np.ndarray, str | None]:
    """Zero-pad (or truncate, when n forces it) a signal to a power-of-two length.

    Returns the adjusted signal and a human-readable warning, or None if the
    length already fit.
    """
    values = np.asarray(values, dtype=np.float64).ravel()
    size = len(values)
    if n is None:
        target = 1 << max(1, int(np.ceil(np.log2(size)))) if size > 1 else 2
    else:
        target = 1 << n
    if size == target:
        return values, None
    if size > target:
        return values[:target], f"truncated {size} samples to {target}"
    out = np.zeros(target)
    out[:size] = values
    return out, f"zero-padded {size} samples to {target}"


def make_two_fault_signal(
    length: int = 1024,
    fault_indices: tuple[int, int] = (300, 700),
    fault_durations: tuple[int, int] = (8, 20),
    carrier_cycles: int = 8,
    fault_amplitude: float = 2.0,
    noise: float = 0.0,
    seed: int = 0,
) -> np.ndarray:
    """Cosine carrier with two short high-frequency bursts at known samples.

    Stands in for a two-fault grid current trace: the instantaneous amplitude
    is flat away from the bursts and spikes inside them.
    """
    k = np.arange(length)
    signal = np.cos(2 * np.pi * carrier_cycles * k / length)
    for start, duration in zip(fault_indices, fault_durations):
        idx = np.arange(start, min(start + duration, length))
        window = np.hanning(len(idx) + 2)[1:-1]
        signal[idx] += fault_amplitude * window * np.cos(2 * np.pi * 0.3 * idx)
    if noise > 0.0:
        signal += noise * np.random.default_rng(seed).standard_normal(length)
    return signal


def detect_bursts(ia: np.ndarray, count: int = 2, min_separation: int | None = None):
    """Windows around the `count` largest deviations of the envelope from its median.

    Returns [(start, end)] index pairs, inclusive, sorted by position.
    """
    ia = np.asarray(ia, dtype=np.float64).ravel()
    size = len(ia)
    if min_separation is None:
        min_separation = max(4, size // 16)
    half_width = max(8, size // 64)
    deviation = np.abs(ia - np.median(ia))
    picked: list[int] = []
    for idx in np.argsort(deviation)[::-1]:
        if all(abs(int(idx) - p) >= min_separation for p in picked):
            picked.append(int(idx))
        if len(picked) == count:
            break
    windows = [(max(0, p - half_width), min(size - 1, p + half_width)) for p in picked]
    return sorted(windows)


def make_chessboard(side: int = 256, squares: int = 8, low: int = 0, high: int = 255) -> np.ndarray:
    """Grayscale chessboard image, uint8, side x side, squares x squares fields."""
    if side % squares:
        raise ValueError(f"side {side} not divisible into {squares} squares")
    block = side // squares
    i, j = np.meshgrid(np.arange(side), np.arange(side), indexing="ij")
    board = ((i // block + j // block) % 2).astype(np.uint8)
    return np.where(board == 1, np.uint8(high), np.uint8(low))


def find_corners(magnitude: np.ndarray, tau: float = 0.5) -> list[tuple[int, int]]:
    """Pixels that are 8-neighborhood local maxima above tau * global max.

    Neighborhoods wrap around the image edges, matching the periodic topology
    the transform lives on. Comparisons use a 1e-6 relative slack so that the
    quantum and classical magnitude fields (which agree to ~1e-9) always pick
    identical sets even on symmetry-induced plateaus.
    """
    mag = np.asarray(magnitude, dtype=np.float64)
    if mag.ndim != 2:
        raise ValueError("corner detection needs a 2-D magnitude field")
    peak = float(mag.max())
    if peak <= 0.0:
        return []
    slack = 1e-6 * peak
    neighbor_max = np.full(mag.shape, -np.inf)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            neighbor_max = np.maximum(neighbor_max, np.roll(mag, (-di, -dj), axis=(0, 1)))
    hits = (mag >= tau * peak) & (mag >= neighbor_max - slack)
    return [(int(i), int(j)) for i, j in np.argwhere(hits)]


def corner_clusters(corners, shape: tuple[int, int] | None = None) -> list[list[tuple[int, int]]]:
    """Group corner pixels into 8-connected components (one junction can
    surface as a small plateau of tied maxima). With a shape, adjacency wraps,
    so a junction split across image edges counts once."""
    remaining = set(corners)
    clusters = []
    while remaining:
        seed = remaining.pop()
        stack = [seed]
        cluster = [seed]
        while stack:
            ci, cj = stack.pop()
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    nb = (ci + di, cj + dj)
                    if shape is not None:
                        nb = (nb[0] % shape[0], nb[1] % shape[1])
                    if nb in remaining:
                        remaining.remove(nb)
                        stack.append(nb)
                        cluster.append(nb)
        clusters.append(sorted(cluster))
    return sorted(clusters)
