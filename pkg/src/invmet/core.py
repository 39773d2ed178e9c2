"""Complex linear algebra, certified intervals, and unit-sphere maximization.

Conventions used throughout the package:

* vectors are 1-d ``numpy`` arrays of ``complex`` (``CVector``);
* the Hermitian inner product ``hdot(u, v) = sum_i u_i conj(v_i)`` is linear in
  its first argument;
* a direction is only ever meaningful up to a unit phase, and canonical
  representatives make the first significant coordinate real positive.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize

from . import config
from .errors import (
    DegenerateInputError,
    DimensionMismatchError,
    EvaluationError,
    SingularMapError,
)

Array = np.ndarray


def cvector(data) -> Array:
    """Coerce to a complex 1-d vector (n >= 1)."""
    v = np.asarray(data, dtype=complex)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1 or v.size < 1:
        raise DimensionMismatchError("expected a 1-d vector with n >= 1")
    return v


def hdot(u, v) -> complex:
    """Hermitian inner product <u, v> = sum u_i conj(v_i); linear in u."""
    return complex(np.vdot(np.asarray(v, dtype=complex), np.asarray(u, dtype=complex)))


def norm(v) -> float:
    return float(np.linalg.norm(np.asarray(v, dtype=complex)))


def canonical_phase(v, tol: float = 1e-12) -> Array:
    """Rotate v by a unit phase so its first significant entry is real positive."""
    v = np.asarray(v, dtype=complex)
    mags = np.abs(v)
    peak = mags.max(initial=0.0)
    if peak == 0.0:
        return v.copy()
    k = int(np.argmax(mags > tol * peak))
    return v * (np.conj(v[k]) / mags[k])


class Interval:
    """Closed interval [lo, hi]; hi may be +inf for explicitly unbounded values."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float):
        lo = float(lo)
        hi = float(hi)
        if not np.isfinite(lo):
            raise ValueError("interval lower endpoint must be finite")
        if hi < lo:
            raise ValueError(f"interval endpoints out of order: [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        if not np.isfinite(self.hi):
            raise ValueError("midpoint of an unbounded interval")
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol

    def scaled(self, c: float) -> "Interval":
        if c < 0:
            raise ValueError("scale factor must be nonnegative")
        return Interval(self.lo * c, self.hi * c)

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __eq__(self, other):
        return isinstance(other, Interval) and (self.lo, self.hi) == (other.lo, other.hi)


class CLinearMap:
    """Invertible-or-not complex linear map on C^n with a cached determinant."""

    __slots__ = ("matrix", "_det")

    def __init__(self, matrix):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError("expected a square matrix")
        m.setflags(write=False)
        self.matrix = m
        self._det = None

    @classmethod
    def identity(cls, n: int) -> "CLinearMap":
        return cls(np.eye(n, dtype=complex))

    @classmethod
    def diagonal(cls, entries) -> "CLinearMap":
        return cls(np.diag(np.asarray(entries, dtype=complex)))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def det(self) -> complex:
        if self._det is None:
            self._det = complex(np.linalg.det(self.matrix))
        return self._det

    def __call__(self, v) -> Array:
        return self.matrix @ np.asarray(v, dtype=complex)

    def compose(self, other: "CLinearMap") -> "CLinearMap":
        """self after other."""
        return CLinearMap(self.matrix @ other.matrix)

    def inverse(self, tol: float = 1e-12) -> "CLinearMap":
        n = self.dim
        sv = np.linalg.svd(self.matrix, compute_uv=False)
        if sv[-1] <= tol * max(1.0, sv[0]):
            raise SingularMapError("matrix is singular to working precision")
        inv = np.linalg.solve(self.matrix, np.eye(n, dtype=complex))
        return CLinearMap(inv)

    def adjoint(self) -> "CLinearMap":
        return CLinearMap(self.matrix.conj().T)

    def __repr__(self):
        return f"CLinearMap({self.matrix!r})"


class AffineMap:
    """z -> linear(z) + translation. Usable as a holomorphic map (has derivative)."""

    __slots__ = ("linear", "translation")

    def __init__(self, linear, translation):
        if not isinstance(linear, CLinearMap):
            linear = CLinearMap(linear)
        t = cvector(translation)
        if t.size != linear.dim:
            raise DimensionMismatchError("translation length does not match matrix size")
        self.linear = linear
        self.translation = t

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(CLinearMap.identity(n), np.zeros(n, dtype=complex))

    @classmethod
    def translation_by(cls, t) -> "AffineMap":
        t = cvector(t)
        return cls(CLinearMap.identity(t.size), t)

    @property
    def dim(self) -> int:
        return self.linear.dim

    def __call__(self, z) -> Array:
        z = np.asarray(z, dtype=complex)
        # supports batches: z of shape (..., n)
        return z @ self.linear.matrix.T + self.translation

    def derivative(self, z=None) -> Array:
        return self.linear.matrix

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other."""
        lin = self.linear.compose(other.linear)
        return AffineMap(lin, self.linear(other.translation) + self.translation)

    def inverse(self, tol: float = 1e-12) -> "AffineMap":
        linv = self.linear.inverse(tol)
        return AffineMap(linv, -linv(self.translation))

    def __repr__(self):
        return f"AffineMap({self.linear!r}, {self.translation!r})"


def orthonormal_complement_basis(vectors, dim: int | None = None,
                                 unit_tol: float = config.UNIT_NORM_TOL):
    """Orthonormal basis of the Hermitian-orthogonal complement of span(vectors).

    ``vectors`` is a sequence of unit vectors in C^dim, pairwise independent;
    an empty sequence (with ``dim`` given) yields a full orthonormal basis.
    Raises DegenerateInputError on non-unit inputs or rank deficiency.
    """
    vecs = [cvector(v) for v in vectors]
    if not vecs:
        if dim is None:
            raise DimensionMismatchError("dim is required when no vectors are given")
        return [np.eye(dim, dtype=complex)[:, j] for j in range(dim)]
    n = vecs[0].size
    if dim is not None and dim != n:
        raise DimensionMismatchError("dim does not match the supplied vectors")
    Q = np.column_stack(vecs)
    if Q.shape[0] < Q.shape[1]:
        raise DegenerateInputError("more vectors than the ambient dimension")
    norms = np.linalg.norm(Q, axis=0)
    if np.any(np.abs(norms - 1.0) > unit_tol):
        raise DegenerateInputError("input vectors must have unit norm")
    u, s, _ = np.linalg.svd(Q, full_matrices=True)
    k = Q.shape[1]
    if s[-1] <= 1e-8:
        raise DegenerateInputError("input vectors are linearly dependent")
    return [canonical_phase(u[:, j]) for j in range(k, n)]


def _as_batch_callable(f):
    """Wrap f so it accepts an (N, n) stack of directions, row-wise if needed."""

    def batched(V):
        V = np.asarray(V, dtype=complex)
        try:
            out = np.asarray(f(V), dtype=float)
            if out.shape == (V.shape[0],):
                return out
        except Exception:
            pass
        return np.array([float(f(v)) for v in V], dtype=float)

    return batched


def maximize_on_unit_sphere(f, basis=None, dim: int | None = None, *,
                            coarse: int | None = None, seed: int = 0,
                            refine: bool = True, xatol: float = 1e-10,
                            tie_band: float = config.SPHERE_TIE_BAND):
    """Maximize a phase-invariant functional over unit vectors of a complex subspace.

    ``basis``: orthonormal vectors spanning the subspace (columns); omit (with
    ``dim``) for the whole of C^dim.  Coarse sampling (2048 directions for
    subspace dimension <= 3, scaled 4x per extra dimension) is followed by a
    simplex refinement on a real chart; the returned value is never below the
    coarse-grid maximum.  Ties within a relative band resolve to the
    lexicographically smallest canonical representative.

    Returns ``(direction, value)`` with the direction phase-canonicalized.
    Raises EvaluationError if f produces a non-finite value.
    """
    if basis is None:
        if dim is None:
            raise DimensionMismatchError("need basis or dim")
        B = np.eye(dim, dtype=complex)
    else:
        B = np.column_stack([cvector(b) for b in basis])
    n, m = B.shape
    gram = B.conj().T @ B
    if np.max(np.abs(gram - np.eye(m))) > 1e-8:
        raise DegenerateInputError("subspace basis must be orthonormal")
    if coarse is None:
        coarse = config.SPHERE_COARSE_BASE * (4 ** max(0, m - 3))

    fb = _as_batch_callable(f)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    C = rng.standard_normal((coarse, m)) + 1j * rng.standard_normal((coarse, m))
    # deterministic anchors: coordinate directions of the subspace
    C = np.vstack([np.eye(m, dtype=complex), C])
    C /= np.linalg.norm(C, axis=1, keepdims=True)
    V = C @ B.T

    vals = fb(V)
    if not np.all(np.isfinite(vals)):
        bad = int(np.argmax(~np.isfinite(vals)))
        raise EvaluationError("functional returned a non-finite value",
                              direction=V[bad])

    best = float(vals.max())
    band = abs(best) * tie_band + tie_band
    cand_idx = np.flatnonzero(vals >= best - band)

    def lex_key(vec):
        w = canonical_phase(vec)
        return tuple(x for c in w for x in (round(c.real, 9), round(c.imag, 9)))

    start = min(cand_idx, key=lambda i: lex_key(V[i]))
    coarse_val = float(vals[start])
    best_coeff = C[start]
    best_vec = V[start]
    best_val = coarse_val

    if refine:
        def chart(params):
            c = params[:m] + 1j * params[m:]
            nc = np.linalg.norm(c)
            if nc == 0.0:
                return None
            return (c / nc) @ B.T

        def objective(params):
            v = chart(params)
            if v is None:
                return np.inf
            val = float(fb(v[None, :])[0])
            if not np.isfinite(val):
                raise EvaluationError("functional returned a non-finite value",
                                      direction=v)
            if val > 0:
                return -np.log(val)
            return -val

        p0 = np.concatenate([best_coeff.real, best_coeff.imag])
        res = minimize(objective, p0, method="Nelder-Mead",
                       options={"xatol": xatol, "fatol": 1e-14, "maxiter": 800})
        v = chart(res.x)
        if v is not None:
            val = float(fb(v[None, :])[0])
            if val > best_val:
                best_val = val
                best_vec = v

    # post: never below the coarse-grid max
    if best_val < coarse_val:
        best_val, best_vec = coarse_val, V[start]
    return canonical_phase(best_vec), best_val
