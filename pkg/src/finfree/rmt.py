"""Random-matrix ground truth for the convolution formulas.

Two independent routes to the expected characteristic polynomials:

* Monte Carlo over Haar-distributed orthogonal matrices (:func:`mc_sym_additive`,
  :func:`mc_sym_multiplicative`, :func:`mc_asym_additive`);
* exact averages over the finite group of signed permutation matrices
  (:func:`quad_sym_additive`, :func:`quad_asym_additive`), which must equal
  the coefficient formulas as rationals.

RNG contract
------------
Sample ``j`` belongs to chunk ``j // chunk``. Chunk ``c`` draws from
``Generator(Philox(key=seed).jumped(c))``, so a chunk's samples depend only
on ``(seed, chunk, c)`` and not on how chunks are scheduled across workers.
Per-chunk mean and sum of squared deviations are merged in chunk order
(Chan et al. pairwise update), so the estimate is bit-for-bit reproducible for
any ``workers``.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

import numpy as np

from finfree import _kernels
from finfree.errors import BudgetError, DomainError
from finfree.poly import Polynomial, RootList, SignedCoeffs, to_fraction

__all__ = [
    "RationalMatrix",
    "OrthogonalSource",
    "OrthogonalSample",
    "MonteCarloEstimate",
    "make_rng",
    "sample_haar",
    "sample_signed_perm",
    "charpoly_exact",
    "eigen_sym",
    "mc_sym_additive",
    "mc_sym_multiplicative",
    "mc_asym_additive",
    "quad_sym_additive",
    "quad_asym_additive",
    "z_scores",
    "SYM_QUAD_MAX_D",
    "ASYM_QUAD_MAX_D",
    "DEFAULT_CHUNK",
]

SYM_QUAD_MAX_D = 6
ASYM_QUAD_MAX_D = 4
DEFAULT_CHUNK = 4096
SYM_TOL = 1e-12


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class RationalMatrix:
    """Square matrix of exact rationals.

    ``symmetric`` is checked, not trusted: constructing with
    ``symmetric=True`` from a non-symmetric array raises ``ValueError``.
    """

    entries: tuple[tuple[Fraction, ...], ...]
    symmetric: bool = False

    def __post_init__(self):
        rows = tuple(tuple(to_fraction(v) for v in row) for row in self.entries)
        d = len(rows)
        if d == 0 or any(len(r) != d for r in rows):
            raise ValueError("matrix must be square and non-empty")
        object.__setattr__(self, "entries", rows)
        if self.symmetric and not self._is_symmetric():
            raise ValueError("matrix flagged symmetric is not symmetric")

    @classmethod
    def from_rows(cls, rows, symmetric: bool | None = None) -> RationalMatrix:
        """``symmetric=None`` detects symmetry exactly."""
        m = cls(tuple(tuple(r) for r in rows), False)
        if symmetric is None:
            symmetric = m._is_symmetric()
        return cls(m.entries, bool(symmetric))

    @classmethod
    def diag(cls, values) -> RationalMatrix:
        values = list(values)
        d = len(values)
        return cls.from_rows([[values[i] if i == j else 0 for j in range(d)] for i in range(d)], True)

    @classmethod
    def identity(cls, d: int) -> RationalMatrix:
        return cls.diag([1] * d)

    @classmethod
    def zeros(cls, d: int) -> RationalMatrix:
        return cls.diag([0] * d)

    def _is_symmetric(self) -> bool:
        e = self.entries
        return all(e[i][j] == e[j][i] for i in range(len(e)) for j in range(i))

    @property
    def d(self) -> int:
        return len(self.entries)

    def to_float(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.entries])

    def transpose(self) -> RationalMatrix:
        return RationalMatrix.from_rows(zip(*self.entries), self.symmetric)

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        cols = list(zip(*other.entries))
        return RationalMatrix.from_rows(
            [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols] for row in self.entries]
        )

    def gram(self) -> RationalMatrix:
        """``M M^T``."""
        return RationalMatrix.from_rows((self @ self.transpose()).entries, True)

    def scaled_to_integers(self, scale: int) -> np.ndarray:
        out = [[v * scale for v in row] for row in self.entries]
        if any(v.denominator != 1 for row in out for v in row):
            raise ValueError("scale does not clear denominators")
        return np.array([[int(v) for v in row] for row in out], dtype=object)

    def to_json(self) -> dict:
        return {
            "rows": [[f"{v.numerator}/{v.denominator}" for v in row] for row in self.entries],
            "symmetric": self.symmetric,
        }

    @classmethod
    def from_json(cls, obj: dict) -> RationalMatrix:
        if not isinstance(obj, dict) or "rows" not in obj:
            raise ValueError("matrix JSON needs a 'rows' field")
        return cls.from_rows(obj["rows"], obj.get("symmetric"))


class OrthogonalSource(enum.Enum):
    HAAR = "haar"
    SIGNED_PERMUTATION = "signed-permutation"


@dataclass(frozen=True)
class OrthogonalSample:
    matrix: np.ndarray
    source: OrthogonalSource


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Per-coefficient sample mean and standard error in the signed convention.

    ``coeff_mean[i]`` estimates ``a_i`` where ``p = sum (-1)**i a_i x**(d-i)``.
    """

    coeff_mean: np.ndarray
    coeff_stderr: np.ndarray
    n_samples: int
    seed: int
    chunk: int = DEFAULT_CHUNK

    @property
    def d(self) -> int:
        return len(self.coeff_mean) - 1

    def to_json(self) -> dict:
        return {
            "coeff_mean": [float(v) for v in self.coeff_mean],
            "coeff_stderr": [float(v) for v in self.coeff_stderr],
            "n_samples": int(self.n_samples),
            "seed": int(self.seed),
            "chunk": int(self.chunk),
        }

    @classmethod
    def from_json(cls, obj: dict) -> MonteCarloEstimate:
        return cls(
            np.array(obj["coeff_mean"], dtype=np.float64),
            np.array(obj["coeff_stderr"], dtype=np.float64),
            int(obj["n_samples"]),
            int(obj["seed"]),
            int(obj.get("chunk", DEFAULT_CHUNK)),
        )


def z_scores(est: MonteCarloEstimate, exact: Polynomial) -> np.ndarray:
    """``(mean - exact) / stderr`` per signed coefficient.

    Coefficients that are constant across samples (e.g. ``a_0 = 1``, or the
    trace) have a standard error at rounding level; the denominator is floored
    at ``1e-12 * (1 + |exact|)`` so rounding noise does not read as a z-score.
    """
    target = np.array([float(v) for v in SignedCoeffs.from_polynomial(exact, est.d).a])
    floor = 1e-12 * (1.0 + np.abs(target))
    return (est.coeff_mean - target) / np.maximum(est.coeff_stderr, floor)


# ---------------------------------------------------------------------------
# sampling


def make_rng(seed: int, substream: int = 0) -> np.random.Generator:
    """Philox generator keyed by ``seed``, advanced by ``substream`` jumps."""
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.Philox(key=seed).jumped(int(substream)))


def _haar_batch(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((n, d, d))
    q, r = np.linalg.qr(g)
    s = np.sign(np.diagonal(r, axis1=1, axis2=2))
    s[s == 0] = 1.0
    return q * s[:, None, :]


def sample_haar(d: int, rng: np.random.Generator) -> OrthogonalSample:
    """Haar orthogonal matrix: QR of a Gaussian matrix with ``R``'s diagonal signs folded into ``Q``."""
    if d < 1:
        raise ValueError("d must be at least 1")
    return OrthogonalSample(_haar_batch(1, d, rng)[0], OrthogonalSource.HAAR)


def sample_signed_perm(d: int, rng: np.random.Generator) -> OrthogonalSample:
    """Uniform signed permutation: uniform permutation times independent signs."""
    if d < 1:
        raise ValueError("d must be at least 1")
    perm = rng.permutation(d)
    signs = rng.choice(np.array([-1.0, 1.0]), size=d)
    m = np.zeros((d, d))
    m[np.arange(d), perm] = signs
    return OrthogonalSample(m, OrthogonalSource.SIGNED_PERMUTATION)


# ---------------------------------------------------------------------------
# exact characteristic polynomial and symmetric eigenvalues


def charpoly_exact(m: RationalMatrix) -> Polynomial:
    """``det(x I - M)`` by the Faddeev-LeVerrier recursion over the rationals."""
    a = [list(row) for row in m.entries]
    d = len(a)
    coeffs = [Fraction(0)] * (d + 1)
    coeffs[d] = Fraction(1)
    mk = [[Fraction(0)] * d for _ in range(d)]
    for k in range(1, d + 1):
        # M_k = A M_{k-1} + c_{d-k+1} I ; c_{d-k} = -tr(A M_k) / k
        mk = [[sum((a[i][l] * mk[l][j] for l in range(d)), Fraction(0)) for j in range(d)] for i in range(d)]
        for i in range(d):
            mk[i][i] += coeffs[d - k + 1]
        tr = sum((a[i][l] * mk[l][i] for i in range(d) for l in range(d)), Fraction(0))
        coeffs[d - k] = -tr / k
    return Polynomial(coeffs)


def _check_symmetric(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square")
    if not np.all(np.abs(m - m.T) <= SYM_TOL):
        raise DomainError(f"{name} is not symmetric within {SYM_TOL}")
    return m


def eigen_sym(m) -> RootList:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi, sorted descending."""
    m = _check_symmetric(m)
    return RootList(tuple(float(v) for v in _kernels.jacobi_eigvals_batch(m[None])[0]))


# ---------------------------------------------------------------------------
# Monte Carlo


def _chunk_stats(x: np.ndarray):
    # shift by the first row so identical samples give exactly zero spread
    shift = x[0]
    y = x - shift
    mean_y = y.mean(axis=0)
    m2 = ((y - mean_y) ** 2).sum(axis=0)
    return x.shape[0], shift + mean_y, m2


def _merge(a, b):
    na, ma, sa = a
    nb, mb, sb = b
    n = na + nb
    delta = mb - ma
    mean = ma + delta * (nb / n)
    m2 = sa + sb + delta * delta * (na * nb / n)
    return n, mean, m2


def _run_mc(sample_eigs, d: int, n: int, seed: int, chunk: int, workers: int) -> MonteCarloEstimate:
    if n < 1:
        raise ValueError("n must be at least 1")
    if chunk < 1:
        raise ValueError("chunk must be at least 1")
    n_chunks = -(-n // chunk)

    def work(c):
        size = min(chunk, n - c * chunk)
        rng = make_rng(seed, c)
        eig = sample_eigs(size, rng)
        return _chunk_stats(_kernels.elementary_symmetric_batch(eig))

    if workers > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(work, range(n_chunks)))
    else:
        stats = [work(c) for c in range(n_chunks)]
    acc = stats[0]
    for s in stats[1:]:
        acc = _merge(acc, s)
    total, mean, m2 = acc
    if total > 1:
        stderr = np.sqrt(m2 / (total - 1)) / math.sqrt(total)
    else:
        stderr = np.zeros(d + 1)
    return MonteCarloEstimate(mean, stderr, int(total), int(seed), int(chunk))


def _as_square(m, name: str) -> np.ndarray:
    if isinstance(m, RationalMatrix):
        m = m.to_float()
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square matrix")
    return m


def _same_d(a: np.ndarray, b: np.ndarray) -> int:
    if a.shape != b.shape:
        raise ValueError("A and B must have the same size")
    return a.shape[0]


def _symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + np.swapaxes(m, -1, -2))


def mc_sym_additive(a, b, n: int, seed: int, chunk: int = DEFAULT_CHUNK, workers: int = 1) -> MonteCarloEstimate:
    """Estimate ``E_Q chi(A + Q B Q^T)`` over Haar ``Q``."""
    a = _check_symmetric(_as_square(a, "A"), "A")
    b = _check_symmetric(_as_square(b, "B"), "B")
    d = _same_d(a, b)

    def eigs(size, rng):
        q = _haar_batch(size, d, rng)
        m = a[None] + _symmetrize(q @ b @ np.swapaxes(q, 1, 2))
        return _kernels.jacobi_eigvals_batch(m)

    return _run_mc(eigs, d, n, seed, chunk, workers)


def _psd_sqrt(a: np.ndarray, name: str) -> np.ndarray:
    w, v = np.linalg.eigh(a)
    scale = max(1.0, float(np.max(np.abs(w))))
    if w.min() < -1e-12 * scale:
        raise DomainError(f"{name} is not positive semidefinite (eigenvalue {w.min()})")
    return _symmetrize((v * np.sqrt(np.clip(w, 0.0, None))) @ v.T)


def mc_sym_multiplicative(
    a, b, n: int, seed: int, chunk: int = DEFAULT_CHUNK, workers: int = 1
) -> MonteCarloEstimate:
    """Estimate ``E_Q chi(A Q B Q^T)`` via the symmetric ``A^{1/2} Q B Q^T A^{1/2}``.

    When ``B = c I`` the product is ``c A`` for every ``Q``; that case is
    evaluated without sampling (every sample is identical, so the spread is 0).
    """
    a = _check_symmetric(_as_square(a, "A"), "A")
    b = _check_symmetric(_as_square(b, "B"), "B")
    d = _same_d(a, b)
    s = _psd_sqrt(a, "A")
    _psd_sqrt(b, "B")
    scalar = np.all(b == b[0, 0] * np.eye(d))

    def eigs(size, rng):
        if scalar:
            m = np.broadcast_to(b[0, 0] * a, (size, d, d))
        else:
            q = _haar_batch(size, d, rng)
            m = _symmetrize(s @ q @ b @ np.swapaxes(q, 1, 2) @ s)
        return _kernels.jacobi_eigvals_batch(m)

    return _run_mc(eigs, d, n, seed, chunk, workers)


def mc_asym_additive(a, b, n: int, seed: int, chunk: int = DEFAULT_CHUNK, workers: int = 1) -> MonteCarloEstimate:
    """Estimate ``E_{R,Q} chi((A + R B Q)(A + R B Q)^T)`` over independent Haar ``R, Q``."""
    a = _as_square(a, "A")
    b = _as_square(b, "B")
    d = _same_d(a, b)

    def eigs(size, rng):
        r = _haar_batch(size, d, rng)
        q = _haar_batch(size, d, rng)
        c = a[None] + r @ b @ q
        return _kernels.jacobi_eigvals_batch(_symmetrize(c @ np.swapaxes(c, 1, 2)))

    return _run_mc(eigs, d, n, seed, chunk, workers)


# ---------------------------------------------------------------------------
# signed-permutation quadrature


def _signed_perms(d: int, fix_first_sign: bool):
    """All ``(perm, signs)`` with ``P[i, perm[i]] = signs[i]``."""
    perms = np.array(list(permutations(range(d))), dtype=np.int64)
    sign_rows = list(product((1, -1), repeat=d))
    if fix_first_sign:
        sign_rows = [s for s in sign_rows if s[0] == 1]
    signs = np.array(sign_rows, dtype=np.int64)
    perm_idx = np.repeat(np.arange(len(perms)), len(signs))
    sign_idx = np.tile(np.arange(len(signs)), len(perms))
    return perms[perm_idx], signs[sign_idx]


def _common_scale(*mats: RationalMatrix) -> int:
    scale = 1
    for m in mats:
        for row in m.entries:
            for v in row:
                scale = math.lcm(scale, v.denominator)
    return scale


def _charpoly_sum(mats: np.ndarray) -> list[int]:
    """Sum of integer characteristic polynomials (ascending) of a stack."""
    n, d, _ = mats.shape
    bound = int(np.max(np.abs(mats))) if n else 0
    if d * 2**d * (d * bound + 1) ** d < _kernels.INT64_SAFE:
        polys = _kernels.charpoly_int_batch(mats.astype(np.int64))
    else:
        polys = _kernels._charpoly_int_batch_numpy(mats.astype(object))
    return [int(v) for v in polys.astype(object).sum(axis=0)]


def _rescaled(total: list[int], count: int, d: int, scale: int) -> Polynomial:
    # chi_M(x) = scale**-d chi_{scale M}(scale x)
    return Polynomial(Fraction(total[k], count) * Fraction(scale) ** (k - d) for k in range(d + 1))


def _require_rational(m, name: str) -> RationalMatrix:
    if isinstance(m, RationalMatrix):
        return m
    return RationalMatrix.from_rows(m)


def quad_sym_additive(a, b) -> Polynomial:
    """Exact average of ``chi(A + P B P^T)`` over all ``2**d d!`` signed permutations.

    ``P`` and ``-P`` give the same conjugate, so only ``P`` with a positive
    first sign are enumerated.
    """
    a, b = _require_rational(a, "A"), _require_rational(b, "B")
    if not (a.symmetric and b.symmetric):
        raise DomainError("quad_sym_additive needs symmetric A and B")
    d = a.d
    if b.d != d:
        raise ValueError("A and B must have the same size")
    if d > SYM_QUAD_MAX_D:
        raise BudgetError(f"d={d} exceeds the enumeration budget d <= {SYM_QUAD_MAX_D}")
    scale = _common_scale(a, b)
    na = a.scaled_to_integers(scale)
    nb = b.scaled_to_integers(scale)
    perms, signs = _signed_perms(d, fix_first_sign=True)
    # (P B P^T)[i, j] = s_i s_j B[perm_i, perm_j]
    conj = nb[perms[:, :, None], perms[:, None, :]] * (signs[:, :, None] * signs[:, None, :])
    mats = na[None] + conj
    return _rescaled(_charpoly_sum(mats), len(perms), d, scale)


def quad_asym_additive(a, b) -> Polynomial:
    """Exact average of ``chi((A + P B S^T)(A + P B S^T)^T)`` over all pairs of signed permutations.

    ``(P, S)`` and ``(-P, -S)`` give the same matrix, so ``P`` has a positive
    first sign.
    """
    a, b = _require_rational(a, "A"), _require_rational(b, "B")
    d = a.d
    if b.d != d:
        raise ValueError("A and B must have the same size")
    if d > ASYM_QUAD_MAX_D:
        raise BudgetError(f"d={d} exceeds the enumeration budget d <= {ASYM_QUAD_MAX_D}")
    scale = _common_scale(a, b)
    na = a.scaled_to_integers(scale)
    nb = b.scaled_to_integers(scale)
    pp, ps = _signed_perms(d, fix_first_sign=True)
    sp, ss = _signed_perms(d, fix_first_sign=False)
    # (P B S^T)[i, j] = p_i s_j B[pi_i, sigma_j]
    x = nb[pp[:, None, :, None], sp[None, :, None, :]] * (ps[:, None, :, None] * ss[None, :, None, :])
    c = na[None, None] + x
    c = c.reshape(-1, d, d)
    # exact integer Gram matrices in object dtype, then narrowed if small enough
    gram = np.einsum("nij,nkj->nik", c, c) if c.dtype != object else np.array([m @ m.T for m in c])
    return _rescaled(_charpoly_sum(gram), c.shape[0], d, scale * scale)
