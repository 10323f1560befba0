"""Special functions used by the bound formulas.

Everything here is scalar and pure Python so the closed forms stay
auditable; the test-suite checks each routine against quadrature.
"""
import math

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_TINY = 1e-300
_EPS = 1e-16


def _check_positive(name, value):
    if not (value > 0.0) or math.isnan(value):
        raise ValueError(f"{name} must be positive, got {value!r}")


def _lanczos_sum(x):
    # x is the shifted argument (a - 1)
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (x + i)
    return acc


def log_gamma(a):
    """Natural log of the gamma function for a > 0 (Lanczos, g=7)."""
    a = float(a)
    _check_positive("a", a)
    if a < 0.5:
        # reflection keeps the Lanczos sum in its accurate range
        return math.log(math.pi / math.sin(math.pi * a)) - log_gamma(1.0 - a)
    x = a - 1.0
    t = x + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (x + 0.5) * math.log(t) - t + math.log(_lanczos_sum(x))


def gamma(a):
    """Gamma function for a > 0. Returns ``inf`` on overflow."""
    a = float(a)
    _check_positive("a", a)
    if a < 0.5:
        return math.pi / (math.sin(math.pi * a) * gamma(1.0 - a))
    if a > 171.6:
        return math.inf
    x = a - 1.0
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * _lanczos_sum(x)


def log_beta(a, b):
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)


# incomplete gamma ---------------------------------------------------------

def _gamma_p_series(a, s):
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(100000):
        ap += 1.0
        term *= s / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-s + a * math.log(s) - log_gamma(a))


def _gamma_q_fraction(a, s):
    # modified Lentz on the Legendre continued fraction
    b = s + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, 100000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-s + a * math.log(s) - log_gamma(a)) * h


def regularized_gamma(a, s):
    """Return (P(a, s), Q(a, s)), the regularized lower and upper parts."""
    a = float(a)
    s = float(s)
    _check_positive("a", a)
    if s < 0.0 or math.isnan(s):
        raise ValueError(f"s must be >= 0, got {s!r}")
    if s == 0.0:
        return 0.0, 1.0
    if math.isinf(s):
        return 1.0, 0.0
    if s < a + 1.0:
        p = _gamma_p_series(a, s)
        return p, 1.0 - p
    q = _gamma_q_fraction(a, s)
    return 1.0 - q, q


def gamma_family(a, s):
    """Return (Gamma(a), lower incomplete gamma, upper incomplete gamma)."""
    full = gamma(a)
    p, q = regularized_gamma(a, s)
    if q < 0.5:
        upper = q * full
        return full, full - upper, upper
    lower = p * full
    return full, lower, full - lower


def lower_incomplete_gamma(a, s):
    return gamma_family(a, s)[1]


def upper_incomplete_gamma(a, s):
    return gamma_family(a, s)[2]


# incomplete beta ----------------------------------------------------------

def _beta_fraction(a, b, s):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * s / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, 100000):
        m2 = 2 * m
        aa = m * (b - m) * s / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * s / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h


def regularized_beta(a, b, s):
    """Regularized incomplete beta function I_{a,b}(s) on s in [0, 1]."""
    a = float(a)
    b = float(b)
    s = float(s)
    _check_positive("a", a)
    _check_positive("b", b)
    if not (0.0 <= s <= 1.0):
        raise ValueError(f"s must lie in [0, 1], got {s!r}")
    if s == 0.0:
        return 0.0
    if s == 1.0:
        return 1.0
    log_front = a * math.log(s) + b * math.log1p(-s) - log_beta(a, b)
    if s < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _beta_fraction(a, b, s) / a
    return 1.0 - math.exp(log_front) * _beta_fraction(b, a, 1.0 - s) / b


def incomplete_beta(a, b, s):
    """Unregularized incomplete beta B_{a,b}(s)."""
    return regularized_beta(a, b, s) * math.exp(log_beta(a, b))


def inverse_regularized_beta(a, b, u, max_iter=200):
    """Solve I_{a,b}(s) = u for s, using Newton steps inside a bisection bracket."""
    a = float(a)
    b = float(b)
    u = float(u)
    _check_positive("a", a)
    _check_positive("b", b)
    if not (0.0 <= u <= 1.0):
        raise ValueError(f"u must lie in [0, 1], got {u!r}")
    if u == 0.0:
        return 0.0
    if u == 1.0:
        return 1.0
    lb = log_beta(a, b)
    # leading-order tail inversions give a good start at either end
    if u < 0.5:
        log_start = (math.log(u) + math.log(a) + lb) / a
        if log_start < -700.0:
            # the root is below the smallest normal double
            return math.exp(log_start)
        s = math.exp(log_start)
    else:
        s = -math.expm1((math.log1p(-u) + math.log(b) + lb) / b)
    lo, hi = 0.0, 1.0
    if not (0.0 < s < 1.0):
        s = 0.5
    for _ in range(max_iter):
        f = regularized_beta(a, b, s) - u
        if f == 0.0:
            return s
        if f > 0.0:
            hi = s
        else:
            lo = s
        log_pdf = (a - 1.0) * math.log(s) + (b - 1.0) * math.log1p(-s) - lb
        step = f / math.exp(log_pdf) if log_pdf < 700.0 else 0.0
        if step != 0.0 and abs(step) <= 4e-16 * s:
            return s
        cand = s - step
        if not (lo < cand < hi) or step == 0.0:
            if lo > 0.0 and hi / lo > 16.0:
                cand = math.sqrt(lo * hi)
            else:
                cand = 0.5 * (lo + hi)
        if abs(cand - s) <= 4e-16 * max(s, 1e-300):
            return cand
        s = cand
    return s


# modified Bessel function of the first kind -------------------------------

def _log_bessel_series(alpha, kappa):
    half = 0.5 * kappa
    quarter_sq = half * half
    term = 1.0
    total = 1.0
    j = 0
    while True:
        j += 1
        term *= quarter_sq / (j * (j + alpha))
        total += term
        if term < total * _EPS:
            break
        if j > 100000:
            break
    return alpha * math.log(half) - log_gamma(alpha + 1.0) + math.log(total)


def _log_bessel_asymptotic(alpha, kappa):
    mu = 4.0 * alpha * alpha
    term = 1.0
    total = 1.0
    k = 0
    prev = math.inf
    while k < 60:
        k += 1
        term *= -(mu - (2 * k - 1) ** 2) / (k * 8.0 * kappa)
        if abs(term) >= prev:
            break
        total += term
        prev = abs(term)
        if abs(term) < _EPS * abs(total):
            break
    return kappa - 0.5 * math.log(2.0 * math.pi * kappa) + math.log(total)


def log_bessel_i(alpha, kappa):
    """log of the modified Bessel function I_alpha(kappa), alpha >= 0, kappa >= 0."""
    alpha = float(alpha)
    kappa = float(kappa)
    if alpha < 0.0 or kappa < 0.0:
        raise ValueError("bessel_i requires alpha >= 0 and kappa >= 0")
    if kappa == 0.0:
        return 0.0 if alpha == 0.0 else -math.inf
    if kappa > 40.0 and kappa > 2.0 * alpha * alpha:
        return _log_bessel_asymptotic(alpha, kappa)
    return _log_bessel_series(alpha, kappa)


def bessel_i(alpha, kappa):
    """Modified Bessel function of the first kind I_alpha(kappa)."""
    return math.exp(log_bessel_i(alpha, kappa))


# elementary helpers --------------------------------------------------------

def sinc(x):
    """Normalized sinc, sin(pi x) / (pi x)."""
    x = float(x)
    if x == 0.0:
        return 1.0
    px = math.pi * x
    return math.sin(px) / px


def sphere_area(d, r=1.0):
    """Surface area of the sphere S^{d-1}(r) in R^d."""
    if d < 1:
        raise ValueError("dimension d must be >= 1")
    if r <= 0:
        raise ValueError("radius must be positive")
    return 2.0 * math.pi ** (d / 2.0) / gamma(d / 2.0) * r ** (d - 1)


def ball_volume(d, r=1.0):
    """Volume of the Euclidean ball of radius r in R^d."""
    if d < 1:
        raise ValueError("dimension d must be >= 1")
    if r <= 0:
        raise ValueError("radius must be positive")
    return math.pi ** (d / 2.0) / gamma(d / 2.0 + 1.0) * r ** d


def sphere_geometry(d, r=1.0):
    """Return (area of S^{d-1}(r), volume of the d-ball of radius r)."""
    return sphere_area(d, r), ball_volume(d, r)
