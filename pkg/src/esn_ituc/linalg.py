"""Dense real linear algebra used by the reservoir code.

Matrices are plain 2-D ``float64`` numpy arrays. The eigenvalue path
(balancing, Householder reduction to upper Hessenberg form and the Francis
double-shift QR iteration) is compiled with numba; the singular value is a
power iteration on ``A A^T`` and the ridge solve goes through a Cholesky
factorization.
"""
import math

import numba
import numpy as np
from scipy import linalg as sla

from .errors import ConvergenceError, ParameterError, ShapeError, SingularMatrixError
from .rng import Stream

DEFAULT_TOL = 1e-10
POWER_MAX_ITER = 10_000
QR_SWEEPS_PER_ROW = 100

_EPS = np.finfo(np.float64).eps


def as_matrix(a, name="matrix"):
    """Return ``a`` as a finite 2-D float64 array (copying only if needed)."""
    m = np.asarray(a, dtype=np.float64)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise ShapeError(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ParameterError(f"{name} contains NaN or Inf")
    return m


def mat_mul(a, b):
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


# --------------------------------------------------------------------------
# eigenvalues
# --------------------------------------------------------------------------

@numba.njit(cache=True)
def _balance(a):
    # Exact power-of-two diagonal similarity; equalizes row/column norms.
    n = a.shape[0]
    radix = 2.0
    sqrdx = radix * radix
    done = False
    while not done:
        done = True
        for i in range(n):
            r = 0.0
            c = 0.0
            for j in range(n):
                if j != i:
                    c += abs(a[j, i])
                    r += abs(a[i, j])
            if c != 0.0 and r != 0.0:
                g = r / radix
                f = 1.0
                s = c + r
                while c < g:
                    f *= radix
                    c *= sqrdx
                g = r * radix
                while c > g:
                    f /= radix
                    c /= sqrdx
                if (c + r) / f < 0.95 * s:
                    done = False
                    g = 1.0 / f
                    for j in range(n):
                        a[i, j] *= g
                    for j in range(n):
                        a[j, i] *= f


@numba.njit(cache=True)
def _hessenberg(a):
    # In-place Householder reduction; entries below the subdiagonal are zeroed.
    n = a.shape[0]
    v = np.empty(n)
    for k in range(n - 2):
        norm = 0.0
        for i in range(k + 1, n):
            norm += a[i, k] * a[i, k]
        norm = math.sqrt(norm)
        if norm == 0.0:
            continue
        alpha = -norm if a[k + 1, k] >= 0.0 else norm
        for i in range(k + 1, n):
            v[i] = a[i, k]
        v[k + 1] -= alpha
        vnorm2 = 0.0
        for i in range(k + 1, n):
            vnorm2 += v[i] * v[i]
        if vnorm2 == 0.0:
            continue
        beta = 2.0 / vnorm2
        # H = I - beta v v^T applied from the left: rows k+1.., columns k..
        for j in range(k, n):
            s = 0.0
            for i in range(k + 1, n):
                s += v[i] * a[i, j]
            s *= beta
            for i in range(k + 1, n):
                a[i, j] -= s * v[i]
        # and from the right: all rows, columns k+1..
        for i in range(n):
            s = 0.0
            for j in range(k + 1, n):
                s += a[i, j] * v[j]
            s *= beta
            for j in range(k + 1, n):
                a[i, j] -= s * v[j]
        a[k + 1, k] = alpha
        for i in range(k + 2, n):
            a[i, k] = 0.0


@numba.njit(cache=True)
def _hqr(h, wr, wi, defl, max_sweeps):
    """Eigenvalues of an upper Hessenberg matrix by Francis double-shift QR.

    ``h`` is padded to 1-based indexing (row/column 0 unused) and is
    destroyed. Returns the number of sweeps used, or -1 when ``max_sweeps``
    is exhausted; in that case unconverged slots of ``wr`` hold the current
    diagonal and are flagged with ``wi = nan``.
    """
    n = h.shape[0] - 1
    anorm = 0.0
    for i in range(1, n + 1):
        for j in range(max(i - 1, 1), n + 1):
            anorm += abs(h[i, j])
    nn = n
    t = 0.0
    sweeps = 0
    x = 0.0
    y = 0.0
    z = 0.0
    w = 0.0
    p = 0.0
    q = 0.0
    r = 0.0
    while nn >= 1:
        its = 0
        while True:
            l = 1
            for ll in range(nn, 1, -1):
                s = abs(h[ll - 1, ll - 1]) + abs(h[ll, ll])
                if s == 0.0:
                    s = anorm
                if abs(h[ll, ll - 1]) <= defl * s:
                    h[ll, ll - 1] = 0.0
                    l = ll
                    break
            x = h[nn, nn]
            if l == nn:
                wr[nn] = x + t
                wi[nn] = 0.0
                nn -= 1
                break
            y = h[nn - 1, nn - 1]
            w = h[nn, nn - 1] * h[nn - 1, nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                q = p * p + w
                z = math.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + (z if p >= 0.0 else -z)
                    wr[nn - 1] = x + z
                    wr[nn] = x + z
                    if z != 0.0:
                        wr[nn] = x - w / z
                    wi[nn - 1] = 0.0
                    wi[nn] = 0.0
                else:
                    wr[nn - 1] = x + p
                    wr[nn] = x + p
                    wi[nn - 1] = -z
                    wi[nn] = z
                nn -= 2
                break
            if sweeps >= max_sweeps:
                for i in range(1, nn + 1):
                    wr[i] = h[i, i] + t
                    wi[i] = np.nan
                return -1
            if its > 0 and its % 10 == 0:
                # exceptional shift
                t += x
                for i in range(1, nn + 1):
                    h[i, i] -= x
                s = abs(h[nn, nn - 1]) + abs(h[nn - 1, nn - 2])
                x = 0.75 * s
                y = x
                w = -0.4375 * s * s
            its += 1
            sweeps += 1
            m = nn - 2
            while m >= l:
                z = h[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / h[m + 1, m] + h[m, m + 1]
                q = h[m + 1, m + 1] - z - r - s
                r = h[m + 2, m + 1]
                s = abs(p) + abs(q) + abs(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = abs(h[m, m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(h[m - 1, m - 1]) + abs(z) + abs(h[m + 1, m + 1]))
                if u <= _EPS * v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                h[i, i - 2] = 0.0
                if i != m + 2:
                    h[i, i - 3] = 0.0
            for k in range(m, nn):
                if k != m:
                    p = h[k, k - 1]
                    q = h[k + 1, k - 1]
                    r = 0.0
                    if k != nn - 1:
                        r = h[k + 2, k - 1]
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p /= x
                        q /= x
                        r /= x
                s = math.sqrt(p * p + q * q + r * r)
                if p < 0.0:
                    s = -s
                if s != 0.0:
                    if k == m:
                        if l != m:
                            h[k, k - 1] = -h[k, k - 1]
                    else:
                        h[k, k - 1] = -s * x
                    p += s
                    x = p / s
                    y = q / s
                    z = r / s
                    q /= p
                    r /= p
                    for j in range(k, nn + 1):
                        p = h[k, j] + q * h[k + 1, j]
                        if k != nn - 1:
                            p += r * h[k + 2, j]
                            h[k + 2, j] -= p * z
                        h[k + 1, j] -= p * y
                        h[k, j] -= p * x
                    mmin = nn if nn < k + 3 else k + 3
                    for i in range(l, mmin + 1):
                        p = x * h[i, k] + y * h[i, k + 1]
                        if k != nn - 1:
                            p += z * h[i, k + 2]
                            h[i, k + 2] -= p * r
                        h[i, k + 1] -= p * q
                        h[i, k] -= p
            if l >= nn - 1:
                break
    return sweeps


def eigenvalues(a, tol=DEFAULT_TOL):
    """All eigenvalues of a real square matrix, as a complex array.

    A subdiagonal entry is treated as zero once it falls below
    ``max(tol, eps)`` times the size of its neighbouring diagonal entries.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"eigenvalues need a square matrix, got {a.shape}")
    if not tol > 0:
        raise ParameterError("tol must be positive")
    n = a.shape[0]
    h = np.zeros((n + 1, n + 1))
    h[1:, 1:] = a
    work = np.ascontiguousarray(h[1:, 1:])
    _balance(work)
    _hessenberg(work)
    h[1:, 1:] = work
    wr = np.zeros(n + 1)
    wi = np.zeros(n + 1)
    used = _hqr(h, wr, wi, max(tol, _EPS), QR_SWEEPS_PER_ROW * n)
    lam = wr[1:] + 1j * np.nan_to_num(wi[1:])
    if used < 0:
        raise ConvergenceError(
            f"QR iteration did not converge within {QR_SWEEPS_PER_ROW * n} sweeps",
            best_estimate=float(np.max(np.abs(lam))),
        )
    return lam


def spectral_radius(a, tol=DEFAULT_TOL):
    """Largest eigenvalue modulus of a square matrix.

    Complex conjugate pairs are resolved by the double-shift QR iteration, so
    this is safe for the nonsymmetric reservoirs whose dominant eigenvalues
    are usually complex.
    """
    return float(np.max(np.abs(eigenvalues(a, tol))))


# --------------------------------------------------------------------------
# singular value
# --------------------------------------------------------------------------

def largest_singular_value(a, tol=DEFAULT_TOL, max_iter=POWER_MAX_ITER):
    """Square root of the spectral radius of ``a @ a.T``.

    Power iteration on the symmetric positive semidefinite matrix ``a a^T``
    (applied implicitly as ``a (a^T v)``). Iteration stops once the Rayleigh
    quotient's change, extrapolated with the observed contraction ratio,
    drops below ``tol`` relative to the quotient.
    """
    a = as_matrix(a)
    if not tol > 0:
        raise ParameterError("tol must be positive")
    m = a.shape[0]
    v = Stream(0x5EED).uniform(-1.0, 1.0, m) + 1.0 / math.sqrt(m)
    v /= np.linalg.norm(v)
    lam = 0.0
    prev_delta = np.inf
    for _ in range(max_iter):
        u = a.T @ v
        lam_new = float(u @ u)
        w = a @ u
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0 if lam_new == 0.0 else math.sqrt(lam_new)
        v = w / norm
        delta = abs(lam_new - lam)
        lam = lam_new
        if delta == 0.0:
            break
        if np.isfinite(prev_delta):
            q = delta / prev_delta  # observed contraction of the quotient
            if q < 1.0 and delta * q / (1.0 - q) <= tol * lam:
                break
        prev_delta = delta
    else:
        raise ConvergenceError(
            f"power iteration did not converge in {max_iter} steps",
            best_estimate=math.sqrt(lam),
        )
    return math.sqrt(lam)


# --------------------------------------------------------------------------
# ridge regression
# --------------------------------------------------------------------------

def solve_ridge(s, b, gamma):
    """Readout weights ``B S^T (S S^T + gamma^2 I)^{-1}``.

    ``s`` is ``n_s x T`` (one state per column), ``b`` is ``n_b x T``. The
    regularizer enters squared. The symmetric system is solved with a
    Cholesky factorization rather than an explicit inverse.
    """
    s = as_matrix(s, "s")
    b = as_matrix(b, "b")
    if s.shape[1] != b.shape[1]:
        raise ShapeError(f"s has {s.shape[1]} columns but b has {b.shape[1]}")
    if gamma < 0:
        raise ParameterError("gamma must be non-negative")
    gram = s @ s.T
    gram[np.diag_indices_from(gram)] += gamma * gamma
    rhs = s @ b.T  # (B S^T)^T
    try:
        factor = sla.cho_factor(gram, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(
            "S S^T + gamma^2 I is not positive definite; use a positive gamma"
        ) from exc
    if gamma == 0:
        # A numerically zero pivot passes cho_factor but yields garbage.
        diag = np.abs(np.diag(factor[0]))
        if diag.min() <= 1e-7 * diag.max():
            raise SingularMatrixError(
                "S S^T is numerically singular; use a positive gamma"
            )
    w = sla.cho_solve(factor, rhs, check_finite=False).T
    if not np.all(np.isfinite(w)):
        raise SingularMatrixError("ridge solution is not finite; use a positive gamma")
    return w
