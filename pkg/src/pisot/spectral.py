"""Characteristic polynomials, Pisot classification and the stable projection."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .words import ValidationError, is_primitive


class ConvergenceError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# Exact integer polynomials (coefficient lists, constant term first)
# ---------------------------------------------------------------------------

def char_poly(M) -> list[int]:
    """Coefficients c_0..c_d of det(X I - M), exact, via Faddeev-LeVerrier."""
    A = [[int(x) for x in row] for row in np.asarray(M).tolist()]
    d = len(A)
    coeffs = [0] * (d + 1)
    coeffs[d] = 1
    # N_k = A N_{k-1} + c_{d-k+1} I, c_{d-k} = -tr(A N_k) / k  (division is exact)
    N = [[int(i == j) for j in range(d)] for i in range(d)]
    for k in range(1, d + 1):
        AN = [[sum(A[i][m] * N[m][j] for m in range(d)) for j in range(d)] for i in range(d)]
        c = -sum(AN[i][i] for i in range(d))
        assert c % k == 0
        c //= k
        coeffs[d - k] = c
        N = [[AN[i][j] + (c if i == j else 0) for j in range(d)] for i in range(d)]
    return coeffs


def format_poly(coeffs, var: str = "X") -> str:
    terms = []
    for power in range(len(coeffs) - 1, -1, -1):
        c = coeffs[power]
        if c == 0:
            continue
        mag = abs(c)
        if power == 0:
            body = str(mag)
        else:
            base = var if power == 1 else f"{var}^{power}"
            body = base if mag == 1 else f"{mag}*{base}"
        sign = "-" if c < 0 else "+"
        terms.append(("-" + body if sign == "-" else body) if not terms else f" {sign} {body}")
    return "".join(terms) or "0"


def poly_eval(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_divmod(num, den):
    """Division of integer polynomials by a monic divisor; returns (quotient, remainder)."""
    num = list(num)
    dq = len(den) - 1
    if len(num) - 1 < dq:
        return [0], num
    q = [0] * (len(num) - dq)
    for i in range(len(num) - 1, dq - 1, -1):
        c = num[i]
        q[i - dq] = c
        if c:
            for j in range(dq + 1):
                num[i - dq + j] -= c * den[j]
    rem = num[:dq] or [0]
    return q, rem


def _divisors(n):
    n = abs(n)
    small = [k for k in range(1, int(n ** 0.5) + 1) if n % k == 0]
    out = set(small) | {n // k for k in small}
    return sorted(out | {-k for k in out})


def _integer_root(coeffs):
    if coeffs[0] == 0:
        return 0
    for r in _divisors(coeffs[0]):
        if poly_eval(coeffs, r) == 0:
            return r
    return None


def _quadratic_factor(coeffs):
    """Monic integer quadratic factor X^2 + pX + q, searched within root-modulus bounds."""
    bound = 1 + max(abs(c) for c in coeffs[:-1])          # Cauchy bound on root moduli
    for q in _divisors(coeffs[0]):
        if abs(q) > bound * bound:
            continue
        for p in range(-2 * bound, 2 * bound + 1):
            _, rem = poly_divmod(coeffs, [q, p, 1])
            if not any(rem):
                return [q, p, 1]
    return None


def _numeric_factor(coeffs, roots):
    """Search root subsets whose product polynomial is an exact integer factor."""
    d = len(coeffs) - 1
    for size in range(1, d // 2 + 1):
        for subset in combinations(range(d), size):
            cand = np.poly(roots[list(subset)])[::-1]
            if np.abs(cand.imag).max() > 1e-6:
                continue
            ints = np.rint(cand.real)
            if np.abs(cand.real - ints).max() > 1e-6:
                continue
            factor = [int(c) for c in ints]
            _, rem = poly_divmod(coeffs, factor)
            if not any(rem):
                return factor
    return None


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    irreducible: bool
    unimodular: bool
    pisot: bool
    reasons: str
    irreducibility_exact: bool = True

    @property
    def ok(self) -> bool:
        return self.irreducible and self.unimodular and self.pisot


def classify(M, tol: float = 1e-6) -> Classification:
    coeffs = char_poly(M)
    d = len(coeffs) - 1
    reasons = []

    det = (-1) ** d * coeffs[0]
    unimodular = abs(det) == 1
    reasons.append(f"det = {det}")

    roots = np.roots(coeffs[::-1]) if d > 0 else np.array([])
    exact = True
    factor = None
    if d >= 2:
        r = _integer_root(coeffs)
        if r is not None:
            factor = [-r, 1]
        elif d == 4:
            factor = _quadratic_factor(coeffs)
        elif d > 4:
            factor = _numeric_factor(coeffs, roots)
            exact = factor is not None
    irreducible = factor is None
    if factor is not None:
        reasons.append(f"reducible: factor {format_poly(factor)}")
    elif not exact:
        reasons.append("irreducible (heuristic: no factor found from numeric roots, d > 4)")
    else:
        reasons.append("irreducible over Q")

    pisot = False
    if d:
        order = np.argsort(-np.abs(roots), kind="stable")
        dominant = roots[order[0]]
        others = np.abs(roots[order[1:]])
        if abs(dominant.imag) > tol or dominant.real <= 1:
            reasons.append(f"dominant root {dominant:.6g} is not real > 1")
        elif others.size and others.max() >= 1 - tol:
            reasons.append(f"a non-dominant root has modulus {others.max():.6g} >= 1")
        else:
            pisot = True
            reasons.append(f"Pisot: beta = {dominant.real:.10g}, conjugate moduli < 1")
    return Classification(irreducible, unimodular, pisot, "; ".join(reasons), exact)


# ---------------------------------------------------------------------------
# Perron-Frobenius data and the stable projection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PerronData:
    beta: float
    right: np.ndarray      # M u = beta u, sum(u) = 1
    left: np.ndarray       # v M = beta v, <v, u> = 1
    basis: np.ndarray      # (d-1, d) orthonormal rows spanning {x : <v, x> = 0}
    tol: float

    @property
    def d(self) -> int:
        return self.right.shape[0]


def _inverse_iteration(A, beta, steps=8):
    d = A.shape[0]
    shift = beta * (1 + 1e-12) + 1e-14
    x = np.ones(d)
    for _ in range(steps):
        try:
            y = np.linalg.solve(A - shift * np.eye(d), x)
        except np.linalg.LinAlgError:
            shift += 1e-9 * max(1.0, beta)
            continue
        x = y / np.linalg.norm(y)
    return x


def perron_data(M, tol: float = 1e-10, max_iter: int = 100_000) -> PerronData:
    A = np.asarray(M, dtype=float)
    d = A.shape[0]
    if not is_primitive(M):
        raise ValidationError("matrix is not primitive")

    x = np.ones(d) / d
    beta = 0.0
    for _ in range(max_iter):
        y = A @ x
        beta_new = y.sum()          # x sums to 1 and stays positive
        y /= beta_new
        done = np.abs(y - x).max() < 1e-12 and abs(beta_new - beta) < 1e-12 * beta_new
        x, beta = y, beta_new
        if done:
            break
    else:
        raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")

    coeffs = char_poly(M)
    deriv = [k * c for k, c in enumerate(coeffs)][1:]
    for _ in range(50):
        f = poly_eval(coeffs, beta)
        if abs(f) < tol * 1e-3:
            break
        fp = poly_eval(deriv, beta)
        if fp == 0:
            break
        beta -= f / fp
    if abs(poly_eval(coeffs, beta)) >= tol:
        raise ConvergenceError(f"Newton polish left residual {poly_eval(coeffs, beta):.3g}")

    right = np.abs(_inverse_iteration(A, beta))
    right /= right.sum()
    left = np.abs(_inverse_iteration(A.T, beta))
    left /= left @ right

    # basis: Gram-Schmidt on the stable parts of e_1..e_{d-1}
    basis = []
    for i in range(d - 1):
        e = np.zeros(d)
        e[i] = 1.0
        w = e - left[i] * right
        for b in basis:
            w -= (w @ b) * b
        basis.append(w / np.linalg.norm(w))
    basis = np.array(basis).reshape(d - 1, d)
    return PerronData(float(beta), right, left, basis, tol)


def project_stable(pd: PerronData, x) -> np.ndarray:
    """Coordinates, in the stable basis, of x projected along the expanding direction.

    Accepts one vector of length d or an (n, d) array.
    """
    x = np.asarray(x, dtype=float)
    y = x - np.multiply.outer(x @ pd.left, pd.right)
    return y @ pd.basis.T


def embed_stable(pd: PerronData, coords) -> np.ndarray:
    """Inverse of :func:`project_stable` on the stable hyperplane."""
    return np.asarray(coords, dtype=float) @ pd.basis


def stable_action(pd: PerronData, M) -> np.ndarray:
    """Matrix of M restricted to the stable hyperplane, in basis coordinates."""
    return pd.basis @ np.asarray(M, dtype=float) @ pd.basis.T
