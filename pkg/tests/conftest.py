import os

import numpy as np
import pytest
from hypothesis import settings

from relgap.matcore import HermitianMatrix, Projection

SEED = int(os.environ.get("RELGAP_SEED", "20260808"))

settings.register_profile("relgap", deadline=None, max_examples=60)
settings.load_profile("relgap")


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def make_rng(offset: int = 0) -> np.random.Generator:
    return np.random.default_rng(SEED + offset)


def random_unitary(rng, n: int, complex_field: bool = True) -> np.ndarray:
    z = rng.standard_normal((n, n))
    if complex_field:
        z = z + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def hermitian_from_spectrum(rng, eigs, complex_field: bool = True) -> HermitianMatrix:
    eigs = np.asarray(eigs, dtype=np.float64)
    u = random_unitary(rng, eigs.size, complex_field)
    return HermitianMatrix(u @ np.diag(eigs) @ u.conj().T)


def random_hermitian(rng, n: int, complex_field: bool = False, scale: float = 1.0) -> HermitianMatrix:
    z = rng.standard_normal((n, n))
    if complex_field:
        z = z + 1j * rng.standard_normal((n, n))
    return HermitianMatrix(scale * (z + z.conj().T) / 2.0)


def random_pd(rng, n: int, complex_field: bool = False,
              eig_range: tuple[float, float] = (0.5, 10.0)) -> HermitianMatrix:
    eigs = rng.uniform(*eig_range, size=n)
    return hermitian_from_spectrum(rng, eigs, complex_field)


def random_pd_logcond(rng, n: int, max_log10_cond: float,
                      complex_field: bool = False) -> HermitianMatrix:
    span = rng.uniform(0.0, max_log10_cond)
    eigs = 10.0 ** rng.uniform(-span / 2.0, span / 2.0, size=n)
    eigs[0] = 10.0 ** (-span / 2.0)
    eigs[-1] = 10.0 ** (span / 2.0)
    return hermitian_from_spectrum(rng, eigs, complex_field)


def random_projection(rng, n: int, k: int, complex_field: bool = False) -> Projection:
    z = rng.standard_normal((n, k))
    if complex_field:
        z = z + 1j * rng.standard_normal((n, k))
    return Projection.from_span(z)
