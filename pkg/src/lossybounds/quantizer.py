"""Empirical quantization: codebooks, Monte Carlo distortion and V_n estimates."""
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .kernels import cell_sums, nearest_sq
from .mc import RunningMoments, stream
from .report import BoundReport
from .spaces.base import UniformModel

DEFAULT_BATCH = 1 << 16

# stream tags keep the phases of one computation on disjoint streams
_TAG_EVAL, _TAG_CODEWORDS, _TAG_SCREEN, _TAG_TRAIN, _TAG_INIT, _TAG_HELDOUT = range(6)


@dataclass(frozen=True)
class Codebook:
    points: np.ndarray
    history: tuple = ()

    def __post_init__(self):
        if len(self.points) < 1:
            raise ValueError("a codebook needs at least one codeword")

    @property
    def n(self):
        return len(self.points)


@dataclass(frozen=True)
class DistortionEstimate:
    """Monte Carlo mean distortion; ``ci_halfwidth`` is one standard error."""

    mean: float
    ci_halfwidth: float
    samples: int
    codebook: Optional[Codebook] = field(default=None, compare=False)


def _sampler(space, dist_model):
    return (dist_model or UniformModel(space)).sample


def min_distortion(space, points, codebook_points):
    """Per-point distortion to the nearest codeword, and its index (lowest wins ties)."""
    emb = space.embed(points)
    book = space.embed_codewords(codebook_points)
    sq, idx = nearest_sq(emb, book)
    return space.distortion_from_sqdist(sq), idx


def nearest_distortion(codebook, space, dist_model=None, samples=100_000, seed=0, key=(), batch=DEFAULT_BATCH):
    """Estimate E min_i rho(X, y_i); batch b uses the stream (seed, *key, b)."""
    points_of = codebook.points if isinstance(codebook, Codebook) else np.asarray(codebook)
    if len(points_of) == 0:
        raise ValueError("empty codebook")
    sample = _sampler(space, dist_model)
    book = space.embed_codewords(points_of)
    moments = RunningMoments()
    for b, start in enumerate(range(0, samples, batch)):
        rng = stream(seed, *key, _TAG_EVAL, b)
        pts = sample(min(batch, samples - start), rng)
        sq, _ = nearest_sq(space.embed(pts), book)
        moments.add(space.distortion_from_sqdist(sq))
    return DistortionEstimate(moments.mean, moments.standard_error, samples)


def random_codebook_estimate(space, dist_model, n, trials, samples, seed, codeword_sampler=None, key=()):
    """Average distortion of codebooks drawn i.i.d. from the codeword measure.

    With two or more trials the error bar comes from the spread of the
    per-trial means, which covers both codebook and sample randomness.
    """
    if n < 1 or trials < 1:
        raise ValueError("need n >= 1 and trials >= 1")
    draw = codeword_sampler or space.sample_codewords
    means = []
    last = None
    for t in range(trials):
        book = draw(n, stream(seed, *key, _TAG_CODEWORDS, t))
        last = nearest_distortion(book, space, dist_model, samples, seed, key=(*key, t))
        means.append(last.mean)
    means = np.array(means)
    if trials >= 2:
        half = float(means.std(ddof=1) / math.sqrt(trials))
    else:
        half = last.ci_halfwidth
    return DistortionEstimate(float(means.mean()), half, samples * trials)


def lloyd_refine(codebook, space, dist_model=None, iterations=50, samples=100_000, seed=0, key=(),
                 training=None, tol=1e-10):
    """Lloyd iterations on a fixed training sample.

    Centroids are averaged in the space's Euclidean embedding and mapped back
    with ``space.project``.  Empty cells are dropped; a shrinking codebook
    triggers a warning.  The per-iteration training distortion is kept in
    ``history``.
    """
    points = np.asarray(codebook.points if isinstance(codebook, Codebook) else codebook)
    n_in = len(points)
    if training is None:
        training = _sampler(space, dist_model)(samples, stream(seed, *key, _TAG_TRAIN))
    emb = space.embed(training)
    history = []
    for _ in range(iterations):
        sq, idx = nearest_sq(emb, space.embed_codewords(points))
        history.append(float(np.mean(space.distortion_from_sqdist(sq))))
        if len(history) > 1 and history[-2] - history[-1] <= tol * history[-2]:
            break
        sums, counts = cell_sums(emb, idx, len(points))
        keep = counts > 0
        points = space.project(sums[keep] / counts[keep, None])
    else:
        sq, _ = nearest_sq(emb, space.embed_codewords(points))
        history.append(float(np.mean(space.distortion_from_sqdist(sq))))
    if len(points) < n_in:
        warnings.warn(f"Lloyd collapsed the codebook from {n_in} to {len(points)} codewords", RuntimeWarning)
    return Codebook(points, tuple(history))


def vn_estimate(space, dist_model=None, n=1, budget=400_000, seed=0, key=(), random_books=4, iterations=60):
    """Achievable-distortion estimate of V_n.

    A quarter of the budget screens random, data-seeded and space-specific
    codebooks; half trains Lloyd from the best screen; the last quarter is a
    held-out sample on which the selected codebook is scored, so the result
    is an honest (upward-biased) estimate of V_n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    sample = _sampler(space, dist_model)
    screen_n = max(budget // 4, 1)
    train_n = max(budget // 2, 1)
    held_n = max(budget - screen_n - train_n, 1)

    screen = sample(screen_n, stream(seed, *key, _TAG_SCREEN))
    init_rng = stream(seed, *key, _TAG_INIT)
    candidates = list(space.special_codebooks(n))
    candidates += space.initial_codebooks(n, screen[: min(screen_n, 50_000)], init_rng)
    for t in range(random_books):
        candidates.append(space.sample_codewords(n, stream(seed, *key, _TAG_CODEWORDS, t)))
    scores = [float(np.mean(min_distortion(space, screen, c)[0])) for c in candidates]
    best = candidates[int(np.argmin(scores))]

    training = sample(train_n, stream(seed, *key, _TAG_TRAIN))
    refined = lloyd_refine(best, space, iterations=iterations, training=training)
    base_score = float(np.mean(min_distortion(space, training, best)[0]))
    chosen = refined if refined.history[-1] <= base_score else Codebook(np.asarray(best))

    est = nearest_distortion(chosen, space, dist_model, held_n, seed, key=(*key, _TAG_HELDOUT))
    return DistortionEstimate(est.mean, est.ci_halfwidth, budget, chosen)


def sandwich_report(space, dist_model=None, n_list=(1, 2, 4), budget=200_000, seed=0, p=1.0, sigma_p=None,
                    exact_vn=None, workers=1, alpha=0.5, sigmas=3.0):
    """Check L_n <= V_n <= U_n row by row.

    V_n is replaced by ``exact_vn(n)`` when given, otherwise estimated with
    ``vn_estimate`` (keyed by n, so rows do not depend on ``workers``).
    Because the estimate sits above V_n, the L-side test L_n <= v_hat + 3 se
    is weaker than L_n <= V_n; the report metadata says so.
    """
    model = dist_model or UniformModel(space)
    if sigma_p is None:
        sigma_p = model.sigma_p(p)
    sub, sup = space.certificates()
    ref = sup if sup is not None else sub
    exponent = ref.k / (ref.m if ref is sup else ref.m / p)

    def row(n):
        lower, upper = space.quant_bounds(n, p=p, sigma_p=sigma_p, alpha=alpha)
        if exact_vn is not None:
            v_hat, v_ci = float(exact_vn(n)), 0.0
        else:
            est = vn_estimate(space, model, n, budget, seed, key=(int(n),))
            v_hat, v_ci = est.mean, est.ci_halfwidth
        ok = True
        if lower is not None:
            ok &= lower <= v_hat + sigmas * v_ci
        if upper is not None:
            ok &= v_hat - sigmas * v_ci <= upper
        scale = float(n) ** exponent
        return dict(
            space_id=space.space_id,
            n=int(n),
            L_n=lower,
            U_n=upper,
            v_hat=v_hat,
            v_ci=v_ci,
            scaled_L=None if lower is None else scale * lower,
            scaled_U=None if upper is None else scale * upper,
            scaled_v=scale * v_hat,
            **{"pass": bool(ok)},
        )

    n_list = [int(n) for n in n_list]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, n_list))
    else:
        rows = [row(n) for n in n_list]
    report = BoundReport(space.space_id, meta={
        "scale_exponent": exponent,
        "v_hat_source": "exact" if exact_vn is not None else "monte-carlo",
        "lower_check": "L_n <= V_n" if exact_vn is not None else "L_n <= v_hat + 3se (weaker than L_n <= V_n)",
        "p": p,
        "sigma_p": sigma_p,
    })
    for r in rows:
        report.add(**r)
    return report
