"""Random-feature baselines: RKS, ORF, LKRF, EERF.

All four share the cosine feature map

    z(x) = (1/sqrt(M)) [cos(x^T g_m + b_m)]_{m=1..M}

with phases b_m ~ U[0, 2pi).  With single-cosine features and random phases
E[z(x)^T z(x')] converges to k(x, x') / 2, so ``kernel_estimate`` doubles
the dot product to obtain the unbiased kernel estimator.

RKS draws frequencies from a scaled Cauchy (Laplace kernel); ORF builds
orthogonal blocks approximating a Gaussian kernel; LKRF and EERF draw an
oversampled Cauchy pool and keep the top-M candidates by a label-alignment
score.  The two scores used here (squared alignment sum for LKRF, absolute
first moment for EERF) are simple stand-ins for the original reweighting
procedures; they rank only and never rescale surviving features.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimError, InvalidM

RKS = "rks"
ORF = "orf"
LKRF = "lkrf"
EERF = "eerf"


@dataclass(frozen=True)
class RandomFeatureMap:
    """Frozen cosine feature map: M frequency rows, M phases."""

    method: str
    frequencies: np.ndarray   # (M, D)
    phases: np.ndarray        # (M,)
    sigma: float
    seed: int
    M0: int = 0

    @property
    def M(self) -> int:
        return self.frequencies.shape[0]

    @property
    def dim(self) -> int:
        return self.frequencies.shape[1]


def rks_map(D: int, M: int, sigma: float, seed: int) -> RandomFeatureMap:
    """Cauchy-frequency map approximating exp(-sigma * ||x - x'||_1)."""
    if M < 1:
        raise InvalidM("M must be >= 1")
    rng = np.random.default_rng(seed)
    freqs = rng.standard_cauchy((M, D)) * sigma
    phases = rng.uniform(0.0, 2.0 * np.pi, M)
    return RandomFeatureMap(RKS, freqs, phases, sigma, seed)


def orf_map(D: int, M: int, sigma: float, seed: int) -> RandomFeatureMap:
    """Orthogonal blocks approximating exp(-sigma^2 ||x - x'||^2 / 2).

    Each D x D block is sigma * S * Q with Q from the QR factorization of a
    Gaussian matrix and S diagonal with chi(D)-distributed entries; blocks
    are stacked and truncated to M rows.
    """
    if M < 1:
        raise InvalidM("M must be >= 1")
    rng = np.random.default_rng(seed)
    blocks = []
    n_blocks = -(-M // D)
    for _ in range(n_blocks):
        G = rng.standard_normal((D, D))
        Q, R = np.linalg.qr(G)
        # fix signs so Q is Haar-distributed
        Q = Q * np.sign(np.diag(R))
        chi = np.sqrt(rng.chisquare(D, size=D))
        blocks.append(sigma * chi[:, None] * Q)
    freqs = np.vstack(blocks)[:M]
    phases = rng.uniform(0.0, 2.0 * np.pi, M)
    return RandomFeatureMap(ORF, freqs, phases, sigma, seed)


def rf_embed(fmap: RandomFeatureMap, x) -> np.ndarray:
    """Dense feature vector (1-D input) or matrix (2-D input)."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != fmap.dim:
        raise DimError(f"point dimension {x.shape[-1]} != map dimension {fmap.dim}")
    proj = x @ fmap.frequencies.T + fmap.phases
    return np.cos(proj) / np.sqrt(fmap.M)


def kernel_estimate(fmap: RandomFeatureMap, x, xp) -> float:
    """Unbiased Monte Carlo kernel estimate 2 z(x)^T z(x')."""
    return float(2.0 * rf_embed(fmap, x) @ rf_embed(fmap, xp))


def _raw_cosines(fmap: RandomFeatureMap, X) -> np.ndarray:
    return np.cos(np.asarray(X, dtype=float) @ fmap.frequencies.T + fmap.phases)


def _top_m(scores: np.ndarray, M: int) -> np.ndarray:
    # stable: ties keep the lower candidate index
    return np.sort(np.argsort(-scores, kind="stable")[:M])


def lkrf_select(pool: RandomFeatureMap, y, X, M: int) -> RandomFeatureMap:
    """Keep the top-M pool candidates by squared label alignment."""
    if M > pool.M:
        raise InvalidM(f"M={M} exceeds pool size {pool.M}")
    Z = _raw_cosines(pool, X)
    scores = (np.asarray(y, dtype=float) @ Z) ** 2
    keep = _top_m(scores, M)
    return RandomFeatureMap(LKRF, pool.frequencies[keep], pool.phases[keep],
                            pool.sigma, pool.seed, M0=pool.M)


def eerf_select(pool: RandomFeatureMap, y, X, M: int) -> RandomFeatureMap:
    """Keep the top-M pool candidates by absolute first-moment score."""
    if M > pool.M:
        raise InvalidM(f"M={M} exceeds pool size {pool.M}")
    Z = _raw_cosines(pool, X)
    scores = np.abs(np.asarray(y, dtype=float) @ Z) / len(y)
    keep = _top_m(scores, M)
    return RandomFeatureMap(EERF, pool.frequencies[keep], pool.phases[keep],
                            pool.sigma, pool.seed, M0=pool.M)
