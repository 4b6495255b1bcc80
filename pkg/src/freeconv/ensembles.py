"""Monte Carlo sampling of generalized Wishart ensembles.

A sample is X = (U_1 + ... + U_k) G_1 ... G_s with Haar unitaries U_i
(k = 0 drops the prefactor) and independent complex Ginibre blocks G_i
of shape N_{i-1} x N_i.  Each Ginibre factor is normalised by
1/sqrt(columns) and the unitary sum by 1/sqrt(k); eigenvalues of the
Gram matrix are computed on the smaller end of the chain and rescaled
by the deterministic factor N_s / N_0, which targets unit mean on the
N_s side without coupling samples through a random trace.  Structural
rank deficiency of rectangular chains shows up as an exact zero block
that is recorded rather than diagonalised.

Reproducibility: sample j draws from a PCG64 stream seeded with
``seed XOR j``, and Gaussians are produced by the polar Box-Muller map
from the stream's uniforms, so results are bit-identical for a given
(config, seed) regardless of how samples are scheduled.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._eigen import householder_tridiagonal, tql_implicit
from .errors import ConvergenceError, DomainError, ShapeError
from .measures import Arcsine, MarchenkoPastur, _rational_coerce

__all__ = [
    "EnsembleConfig",
    "EmpiricalSpectrum",
    "sample_ginibre",
    "sample_haar_unitary",
    "build_sample",
    "simulate",
    "hermitian_eigenvalues",
    "ks_distance",
]

RNG_INFO = ("PCG64 stream per sample, stream seed = seed XOR sample_index; "
            "complex Gaussians via polar Box-Muller from stream uniforms")


@dataclass(frozen=True)
class EnsembleConfig:
    """Dimensions and sampling plan for one ensemble.

    ``ginibre_shape_ratios`` lists one rectangularity c_i per Ginibre
    factor (1 = square); factor i has shape round(c_{i-1} N) x
    round(c_i N) with c_0 = 1.  ``unitary_sum_k`` = 0 omits the unitary
    prefactor; k = 2 gives the (U_1 + U_2) Bures-type prefactor.
    """

    n: int
    ginibre_shape_ratios: tuple = (Fraction(1),)
    unitary_sum_k: int = 0
    samples: int = 1
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "ginibre_shape_ratios",
                           tuple(_rational_coerce(c) for c in self.ginibre_shape_ratios))
        if self.n < 2:
            raise DomainError("matrix dimension must be at least 2")
        if any(c <= 0 for c in self.ginibre_shape_ratios):
            raise DomainError("shape ratios must be positive")
        if self.samples < 1:
            raise DomainError("need at least one sample")
        if self.unitary_sum_k < 0:
            raise DomainError("unitary summand count must be >= 0")

    def dims(self):
        """Chain dimensions [N_0, N_1, ..., N_s]."""
        out = [self.n]
        for c in self.ginibre_shape_ratios:
            ni = int(round(c * self.n))
            if ni < 1:
                raise ShapeError(f"shape ratio {c} collapses the chain at N={self.n}")
            out.append(ni)
        return out


@dataclass(frozen=True)
class EmpiricalSpectrum:
    """Pooled rescaled eigenvalues across samples, sorted ascending.

    ``values`` includes the structural zeros of rank-deficient chains;
    ``zero_count`` counts eigenvalues below the near-zero threshold
    1e-8 times the largest eigenvalue.
    """

    values: np.ndarray
    zero_count: int
    config: EnsembleConfig = field(compare=False, default=None)
    rng_info: str = field(compare=False, default=RNG_INFO)

    def atom_fraction(self):
        return self.zero_count / len(self.values)

    def mean(self):
        return float(self.values.mean())


def config_for_measure(spec, n=256, samples=40, seed=0):
    """Ensemble whose pooled Gram spectrum converges to ``spec``.

    Supported measures: products of Marchenko-Pastur factors with
    positive integer exponents, optionally times one arcsine factor
    (exponent 1), realised as a (U1 + U2) prefactor.  A chain with
    dimensions [N_0 .. N_s] converges to prod_i 1/(1 + (N_s/N_{i-1}) w)
    on the N_s side, so the shape ratios are solved from the requested
    rectangularities; a unit factor (when present) is placed first so
    that the unitary prefactor acts on the N_s-sized side, which is the
    placement that reproduces the arcsine factor with an unrescaled
    argument.  Fractional free powers have no finite matrix model and
    are rejected.
    """
    k = 0
    cs = []
    for factor, expo in spec.factors:
        if isinstance(factor, Arcsine):
            if expo != 1 or k:
                raise DomainError("only a single arcsine factor of exponent 1 "
                                  "has a matrix realisation here")
            k = 2
        elif isinstance(factor, MarchenkoPastur):
            if expo.denominator != 1 or expo < 1:
                raise DomainError(f"no finite matrix model for exponent {expo}")
            cs.extend([factor.c] * int(expo))
        else:
            raise DomainError(f"no matrix model for factor {factor.label()}")
    cs.sort(key=lambda c: c != 1)  # unit rectangularities first
    if cs:
        c1 = cs[0]
        shapes = tuple(c1 / c for c in cs[1:]) + (c1,)
    else:
        shapes = ()
    if k and shapes and shapes[-1] != 1:
        # the chain ends on a side of different size than the prefactor
        # acts on; the limiting law would carry a rescaled arcsine factor
        raise DomainError("arcsine times a non-square chain has no exact "
                          "realisation with a left unitary prefactor")
    return EnsembleConfig(n=n, ginibre_shape_ratios=shapes,
                          unitary_sum_k=k, samples=samples, seed=seed)


def _stream(seed, index):
    return np.random.Generator(np.random.PCG64(int(seed) ^ int(index)))


def _complex_gaussian(rng, rows, cols):
    # polar Box-Muller: sqrt(-ln U) e^{2 pi i V} is CN(0, 1)
    u = 1.0 - rng.random((rows, cols))
    v = rng.random((rows, cols))
    return np.sqrt(-np.log(u)) * np.exp(2j * np.pi * v)


def sample_ginibre(rows, cols, rng):
    """Complex Ginibre block: i.i.d. CN(0, 1) entries (unit |entry|^2
    mean, real and imaginary parts of variance 1/2)."""
    if rows < 1 or cols < 1:
        raise DomainError("Ginibre dimensions must be positive")
    return _complex_gaussian(rng, rows, cols)


def sample_haar_unitary(n, rng):
    """Haar-distributed unitary: QR of a Ginibre draw with the phases of
    R's diagonal divided out, which makes the law exactly invariant."""
    if n < 1:
        raise DomainError("unitary dimension must be positive")
    q, r = np.linalg.qr(_complex_gaussian(rng, n, n))
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def hermitian_eigenvalues(h, pair_tol=1e-8):
    """All eigenvalues of a complex Hermitian matrix, ascending.

    The N x N Hermitian matrix is embedded into the 2N x 2N real
    symmetric block form [[Re H, -Im H], [Im H, Re H]], reduced by
    Householder transforms and diagonalised by implicit-shift QL; the
    exactly doubled spectrum is then collapsed by pairing sorted
    neighbours.
    """
    H = np.asarray(h, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ShapeError("expected a square matrix")
    herm_defect = np.abs(H - H.conj().T).max()
    if herm_defect > 1e-10 * max(1.0, np.abs(H).max()):
        raise DomainError(f"matrix is not Hermitian (defect {herm_defect:.2e})")
    n = H.shape[0]
    if n == 1:
        return np.array([H[0, 0].real])
    emb = np.block([[H.real, -H.imag], [H.imag, H.real]])
    emb = 0.5 * (emb + emb.T)
    d, e = householder_tridiagonal(emb)
    status = tql_implicit(d, e)
    if status != 0:
        raise ConvergenceError("QL iteration exceeded 50 sweeps for an eigenvalue")
    vals = np.sort(d)
    scale = max(float(np.abs(vals).max()), 1e-300)
    pairs = vals.reshape(n, 2)
    gaps = pairs[:, 1] - pairs[:, 0]
    if float(gaps.max()) > pair_tol * scale:
        raise ConvergenceError(
            f"doubled-spectrum pairing gap {gaps.max():.2e} exceeds tolerance")
    return pairs.mean(axis=1)


def build_sample(cfg, rng):
    """One sample: (sorted rescaled eigenvalues, structural zero count).

    The structural zeros belong to the N_s side of the Gram spectrum
    when the chain contracts (N_s > N_0); they are appended as exact
    zeros by the caller rather than diagonalised.
    """
    dims = cfg.dims()
    x = None
    if cfg.unitary_sum_k >= 1:
        b = np.zeros((cfg.n, cfg.n), dtype=complex)
        for _ in range(cfg.unitary_sum_k):
            b += sample_haar_unitary(cfg.n, rng)
        x = b / math.sqrt(cfg.unitary_sum_k)
    for rows, cols in zip(dims[:-1], dims[1:]):
        g = sample_ginibre(rows, cols, rng) / math.sqrt(cols)
        x = g if x is None else x @ g
    if x is None:
        raise ShapeError("empty chain: need a unitary prefactor or a Ginibre factor")
    if dims[0] <= dims[-1]:
        gram = x @ x.conj().T
    else:
        gram = x.conj().T @ x
    eig = hermitian_eigenvalues(gram)
    eig = eig * (dims[-1] / dims[0])
    structural_zeros = dims[-1] - min(dims[0], dims[-1])
    return np.sort(eig), structural_zeros


def simulate(cfg):
    """Draw all samples and pool the rescaled eigenvalues.

    Independent per-sample RNG streams make the result bit-identical
    for a given (config, seed) no matter how the samples are scheduled;
    the FREECONV_THREADS environment variable sizes an optional thread
    pool (matrix kernels release the GIL).
    """
    threads = int(os.environ.get("FREECONV_THREADS", "1"))

    def one(j):
        return build_sample(cfg, _stream(cfg.seed, j))

    if threads > 1 and cfg.samples > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, range(cfg.samples)))
    else:
        results = [one(j) for j in range(cfg.samples)]

    chunks = []
    for eig, structural in results:
        if structural:
            chunks.append(np.zeros(structural))
        chunks.append(eig)
    values = np.sort(np.concatenate(chunks))
    neg = values < 0.0
    if neg.any():
        worst = values[neg].min()
        if worst < -1e-8 * max(1.0, values.max()):
            raise ConvergenceError(f"eigenvalue {worst:.2e} below the clipping floor")
        values = np.where(neg, 0.0, values)
    zero_count = int((values <= 1e-8 * values.max()).sum()) if values.max() > 0 else len(values)
    return EmpiricalSpectrum(values=values, zero_count=zero_count, config=cfg)


def ks_distance(spectrum, model_cdf):
    """Sup-norm distance between the empirical CDF (atoms included) and
    a model CDF callable.

    Tie blocks are compared as blocks, and the pre-jump side uses the
    model's left limit, so models with an atom (a CDF jump at zero) are
    compared correctly against the repeated zero eigenvalues.
    """
    x = np.asarray(spectrum.values if isinstance(spectrum, EmpiricalSpectrum)
                   else spectrum, dtype=float)
    if x.size == 0:
        raise DomainError("empty spectrum")
    n = x.size
    u, counts = np.unique(x, return_counts=True)
    above = np.cumsum(counts) / n
    below = above - counts / n
    F = np.asarray(model_cdf(u), dtype=float)
    F_left = np.asarray(model_cdf(u - 1e-9 * (1.0 + np.abs(u))), dtype=float)
    return float(max(np.abs(above - F).max(), np.abs(below - F_left).max()))
