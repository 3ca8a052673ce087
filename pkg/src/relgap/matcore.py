"""Dense Hermitian linear algebra: eigendecomposition, SVD, spectral calculus,
spectral projectors and the operator / Hilbert-Schmidt norms used repo-wide.

All operations are pure functions of immutable inputs; real inputs stay real,
complex inputs stay complex.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

HERMITICITY_RTOL = 1e-13
ZERO_TOL = 1e-12  # relative rank cutoff for pseudo-inverse decisions
ORTHO_TOL = 1e-12


class ConvergenceError(RuntimeError):
    """An iterative kernel (eigensolver, quadrature) failed to converge."""


def _as_array(a) -> np.ndarray:
    if isinstance(a, HermitianMatrix):
        return a.mat
    return np.asarray(a)


def _tidy_field(mat: np.ndarray) -> np.ndarray:
    """Return a float64/complex128 copy; drop an identically-zero imaginary part."""
    mat = np.asarray(mat)
    if np.iscomplexobj(mat):
        mat = mat.astype(np.complex128)
        if not np.any(mat.imag):
            return mat.real.copy()
        return mat.copy()
    return mat.astype(np.float64)


@dataclass(frozen=True)
class HermitianMatrix:
    """A dense self-adjoint matrix over the real or complex scalars.

    The constructor rejects inputs whose asymmetry exceeds
    ``1e-13 * ||A||_F`` and symmetrizes the rest exactly.
    """

    mat: np.ndarray

    def __post_init__(self):
        mat = _tidy_field(self.mat)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {mat.shape}")
        if mat.shape[0] < 1:
            raise ValueError("dimension must be >= 1")
        scale = np.linalg.norm(mat, "fro")
        defect = np.linalg.norm(mat - mat.conj().T, "fro")
        if defect > HERMITICITY_RTOL * max(scale, 1e-300):
            raise ValueError(
                f"matrix is not Hermitian: asymmetry {defect:.3e} exceeds "
                f"{HERMITICITY_RTOL:.0e} * ||A||_F = {HERMITICITY_RTOL * scale:.3e}"
            )
        mat = (mat + mat.conj().T) / 2.0
        object.__setattr__(self, "mat", _tidy_field(mat))
        self.mat.setflags(write=False)

    @property
    def n(self) -> int:
        return self.mat.shape[0]

    @property
    def field(self) -> str:
        return "complex" if np.iscomplexobj(self.mat) else "real"

    def __array__(self, dtype=None, copy=None):
        return np.array(self.mat, dtype=dtype)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues plus orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", np.asarray(self.eigenvalues, dtype=np.float64))
        object.__setattr__(self, "vectors", _tidy_field(self.vectors))
        lam, v = self.eigenvalues, self.vectors
        if lam.ndim != 1 or v.shape != (lam.size, lam.size):
            raise ValueError("eigenvalues/vectors shapes are inconsistent")
        if np.any(np.diff(lam) < 0):
            raise ValueError("eigenvalues must be nondecreasing")
        gram_defect = np.linalg.norm(v.conj().T @ v - np.eye(lam.size), "fro")
        if gram_defect > 1e-11:
            raise ValueError(f"eigenvector columns are not orthonormal (defect {gram_defect:.3e})")

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.eigenvalues) @ self.vectors.conj().T


@dataclass(frozen=True)
class Projection:
    """An orthonormal basis of a subspace; the projector matrix is derived."""

    basis: np.ndarray

    def __post_init__(self):
        basis = _tidy_field(self.basis)
        if basis.ndim != 2:
            raise ValueError("basis must be a 2-d array of column vectors")
        n, k = basis.shape
        if k > n:
            raise ValueError(f"cannot have {k} orthonormal columns in dimension {n}")
        if k > 0:
            defect = np.linalg.norm(basis.conj().T @ basis - np.eye(k), "fro")
            if defect > 1e-10:
                raise ValueError(
                    f"columns are not orthonormal (defect {defect:.3e}); "
                    "use Projection.from_span to orthonormalize"
                )
        object.__setattr__(self, "basis", basis)
        self.basis.setflags(write=False)

    @classmethod
    def from_span(cls, cols: np.ndarray, rtol: float = ZERO_TOL) -> "Projection":
        """Orthonormal basis of the column span, rank decided at ``rtol``."""
        cols = _tidy_field(np.atleast_2d(cols))
        if cols.shape[1] == 0:
            return cls(cols)
        u, s, _ = np.linalg.svd(cols, full_matrices=False)
        keep = s > rtol * max(s[0], 1e-300) if s.size else np.zeros(0, bool)
        return cls(u[:, keep])

    @classmethod
    def zero(cls, n: int, complex_field: bool = False) -> "Projection":
        dtype = np.complex128 if complex_field else np.float64
        return cls(np.zeros((n, 0), dtype=dtype))

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def complement(self) -> "Projection":
        """Projection onto the orthogonal complement of the range."""
        n, k = self.basis.shape
        if k == 0:
            eye = np.eye(n, dtype=self.basis.dtype)
            return Projection(eye)
        u = np.linalg.svd(self.basis, full_matrices=True)[0]
        return Projection(u[:, k:])


def eig_herm(a) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Deterministic for a fixed input.  A LAPACK convergence failure is
    reported as a :class:`ConvergenceError` naming the off-diagonal residual.
    """
    mat = _as_array(a) if isinstance(a, HermitianMatrix) else HermitianMatrix(np.asarray(a)).mat
    try:
        lam, v = np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:
        offdiag = np.linalg.norm(mat - np.diag(np.diag(mat)), "fro")
        raise ConvergenceError(
            f"Hermitian eigensolver did not converge (off-diagonal residual {offdiag:.3e})"
        ) from exc
    return SpectralDecomposition(lam, v)


def svd(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Singular value decomposition ``A = U diag(s) V*``.

    Returns ``(s, U, V)`` with ``s`` nonnegative and descending, and the
    *right* singular vectors as columns of ``V`` (not conjugated).
    """
    mat = _tidy_field(_as_array(a))
    try:
        u, s, vh = np.linalg.svd(mat, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        offdiag = np.linalg.norm(mat, "fro")
        raise ConvergenceError(f"SVD did not converge (residual scale {offdiag:.3e})") from exc
    return s, u, vh.conj().T


def apply_spectral_fn(dec: SpectralDecomposition, f: Callable[[float], float],
                      zero_tol: float = ZERO_TOL) -> HermitianMatrix:
    """Evaluate ``V diag(f(lambda)) V*``.

    Eigenvalues with ``|lambda| <= zero_tol * max|lambda|`` are routed through
    ``f(0)``, which realizes the pseudo-inverse convention ``f(0) = 0``.
    """
    lam = dec.eigenvalues
    scale = np.max(np.abs(lam)) if lam.size else 0.0
    thresh = zero_tol * scale
    mapped = np.array([f(0.0) if abs(x) <= thresh else f(x) for x in lam], dtype=np.float64)
    if not np.all(np.isfinite(mapped)):
        bad = lam[~np.isfinite(mapped)]
        raise ValueError(f"spectral function is not finite on eigenvalue(s) {bad}")
    mat = (dec.vectors * mapped) @ dec.vectors.conj().T
    return HermitianMatrix(mat)


def fractional_power(dec: SpectralDecomposition, p: float,
                     zero_tol: float = ZERO_TOL) -> HermitianMatrix:
    """Fractional power by spectral calculus, with the pseudo-inverse
    convention for negative exponents (zero maps to zero).

    Raises if the power demands positivity but a significantly negative
    eigenvalue is present.
    """
    lam = dec.eigenvalues
    scale = np.max(np.abs(lam)) if lam.size else 0.0
    if p != round(p) or p < 0:
        lam_min = lam.min() if lam.size else 0.0
        if lam_min < -zero_tol * scale:
            raise ValueError(
                f"power {p} requires a nonnegative spectrum; "
                f"offending eigenvalue {lam_min:.6e}"
            )

    def f(x: float) -> float:
        if x <= 0.0:
            return 0.0 if p != 0 else 1.0
        return x ** p

    if p >= 0 and p == round(p):
        f = lambda x: x ** p  # noqa: E731  integer powers act on the full real line
    return apply_spectral_fn(dec, f, zero_tol=zero_tol)


def pseudo_inverse(dec: SpectralDecomposition, zero_tol: float = ZERO_TOL) -> HermitianMatrix:
    """Spectral-calculus inverse with zero eigenvalues mapped to zero."""
    return fractional_power(dec, -1.0, zero_tol=zero_tol)


def op_norm(a) -> float:
    mat = _tidy_field(_as_array(a))
    if mat.size == 0:
        return 0.0
    return float(np.linalg.norm(mat, 2))


def hs_norm(a) -> float:
    return float(np.linalg.norm(_tidy_field(_as_array(a)), "fro"))


@dataclass(frozen=True)
class Norms:
    op: float
    hs: float


def norms(a) -> Norms:
    """Operator (largest singular value) and Hilbert-Schmidt (Frobenius) norms."""
    return Norms(op=op_norm(a), hs=hs_norm(a))


def spectral_projector(dec: SpectralDecomposition, a: float, b: float) -> Projection:
    """Projection onto the span of eigenvectors with eigenvalue in ``[a, b]``.

    An empty selection yields a valid rank-0 projection.
    """
    if a > b:
        raise ValueError(f"interval bounds out of order: [{a}, {b}]")
    keep = (dec.eigenvalues >= a) & (dec.eigenvalues <= b)
    return Projection(dec.vectors[:, keep])


def spectral_projector_below(dec: SpectralDecomposition, d: float) -> Projection:
    """The spectral projector onto ``(-inf, d]`` (right-continuous convention)."""
    return spectral_projector(dec, -np.inf, d)


# ---------------------------------------------------------------------------
# shared matrix text format
#
#   first line:  n m field          (field in {real, complex})
#   then n*m whitespace-separated entries, row major; a complex entry is the
#   token pair "re im".  17 significant digits round-trip float64 exactly.
# ---------------------------------------------------------------------------

def save_matrix(path, a) -> None:
    mat = _tidy_field(np.atleast_2d(_as_array(a)))
    n, m = mat.shape
    field = "complex" if np.iscomplexobj(mat) else "real"
    lines = [f"{n} {m} {field}"]
    for row in mat:
        if field == "complex":
            toks = [f"{z.real:.17g} {z.imag:.17g}" for z in row]
        else:
            toks = [f"{x:.17g}" for x in row]
        lines.append(" ".join(toks))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 3:
            raise ValueError(f"malformed matrix header {header!r}; expected 'n m field'")
        n, m, field = int(header[0]), int(header[1]), header[2]
        if field not in ("real", "complex"):
            raise ValueError(f"unknown scalar field {field!r}")
        toks = fh.read().split()
    per_entry = 2 if field == "complex" else 1
    if len(toks) != per_entry * n * m:
        raise ValueError(f"expected {per_entry * n * m} numbers, found {len(toks)}")
    vals = np.array([float(t) for t in toks])
    if field == "complex":
        vals = vals[0::2] + 1j * vals[1::2]
    return vals.reshape(n, m)
