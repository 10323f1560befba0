"""NumPy implementation of the nearest-codeword kernels."""
import numpy as np

_CHUNK_ELEMENTS = 1 << 22


def nearest_sq(points, codebook):
    points = np.ascontiguousarray(points, dtype=np.float64)
    codebook = np.ascontiguousarray(codebook, dtype=np.float64)
    if codebook.shape[1] != points.shape[1]:
        raise ValueError("points and codebook dimensions differ")
    if len(codebook) == 0:
        raise ValueError("empty codebook")
    n_pts = len(points)
    dist = np.empty(n_pts)
    idx = np.empty(n_pts, dtype=np.int64)
    chunk = max(1, _CHUNK_ELEMENTS // (len(codebook) * points.shape[1]))
    for start in range(0, n_pts, chunk):
        block = points[start:start + chunk]
        sq = ((block[:, None, :] - codebook[None, :, :]) ** 2).sum(axis=2)
        best = np.argmin(sq, axis=1)
        idx[start:start + chunk] = best
        dist[start:start + chunk] = sq[np.arange(len(block)), best]
    return dist, idx


def cell_sums(points, labels, n_cells):
    points = np.asarray(points, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    counts = np.bincount(labels, minlength=n_cells).astype(np.int64)
    sums = np.column_stack(
        [np.bincount(labels, weights=points[:, t], minlength=n_cells) for t in range(points.shape[1])]
    )
    return sums.reshape(n_cells, points.shape[1]), counts
