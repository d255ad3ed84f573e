"""Johnson-Lindenstrauss compression of fingerprint vectors.

A :class:`JLMap` is an explicit ``m x D`` Gaussian matrix with entries of
variance ``1/m``, reproducible from ``(seed, D, m)``.  Fingerprint vectors of
long sketches are ``2N``-dimensional, so for protocol runs
:class:`SpanJLMap` applies the same Gaussian law to a known finite set of
vectors through an orthonormal basis of their span: a Gaussian matrix
restricted to a ``r``-dimensional subspace is again an ``m x r`` Gaussian
matrix in that subspace's coordinates, so the images have exactly the same
distribution without materialising the ``m x 2N`` matrix.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .fingerprint import raw_fingerprint_vector
from .seeding import derive_rng, derive_seed

NORM_TOL = 1e-9
DEGENERATE_NORM = 1e-12


def jl_dimension(num_vectors, eps_jl, constant=24.0):
    """``ceil(constant * ln(num_vectors + 1) / eps_jl^2)``; the ``+1`` covers the zero vector."""
    if num_vectors < 1:
        raise ValueError("num_vectors must be >= 1")
    if not 0 < eps_jl < 0.5:
        raise ValueError(f"eps_jl must lie in (0, 1/2), got {eps_jl}")
    return math.ceil(constant * math.log(num_vectors + 1) / eps_jl**2)


@dataclass(frozen=True, eq=False)
class JLMap:
    in_dim: int
    out_dim: int
    seed: int
    eps_jl: float
    entries: np.ndarray = field(repr=False)

    @classmethod
    def gaussian(cls, in_dim, out_dim, seed, eps_jl):
        rng = derive_rng(seed, "jl-map", in_dim, out_dim)
        entries = rng.standard_normal((out_dim, in_dim)) / math.sqrt(out_dim)
        return cls(in_dim, out_dim, int(seed), eps_jl, entries)

    @classmethod
    def from_matrix(cls, entries, eps_jl=0.25, seed=0):
        entries = np.asarray(entries, dtype=float)
        return cls(entries.shape[1], entries.shape[0], seed, eps_jl, entries)

    def apply(self, v):
        v = np.asarray(v, dtype=float)
        if v.shape[-1] != self.in_dim:
            raise ValueError(f"expected dimension {self.in_dim}, got {v.shape[-1]}")
        return v @ self.entries.T


def _unit(v):
    v = np.asarray(v, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
        raise ValueError("input vector must have unit norm")
    return v


def apply_and_normalize(jl_map, v):
    w = jl_map.apply(_unit(v))
    norm = np.linalg.norm(w)
    if norm < DEGENERATE_NORM:
        raise ValueError("projection collapsed the vector (norm below 1e-12)")
    return w / norm


def distortion_ok(gram, images, eps_jl):
    """Check ``(1-e)|u-v|^2 <= |f(u)-f(v)|^2 <= (1+e)|u-v|^2`` on ``U`` plus the zero vector.

    ``gram`` is the Gram matrix of the originals and ``images`` holds one
    mapped vector per row.
    """
    gram = np.asarray(gram, dtype=float)
    img_gram = images @ images.T
    # squared distances; the zero vector contributes the squared norms
    sq = np.diag(gram)[:, None] + np.diag(gram)[None, :] - 2 * gram
    img_sq = np.diag(img_gram)[:, None] + np.diag(img_gram)[None, :] - 2 * img_gram
    lo, hi = (1 - eps_jl) * sq, (1 + eps_jl) * sq
    slack = 1e-9 * np.maximum(sq, 1.0)
    pairs_ok = np.all((img_sq >= lo - slack) & (img_sq <= hi + slack))
    n0, n1 = np.diag(gram), np.diag(img_gram)
    norms_ok = np.all((n1 >= (1 - eps_jl) * n0 - 1e-12) & (n1 <= (1 + eps_jl) * n0 + 1e-12))
    return bool(pairs_ok and norms_ok)


def verify_jl(jl_map, vectors, eps_jl):
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    if np.any(np.abs(np.linalg.norm(vectors, axis=1) - 1.0) > NORM_TOL):
        raise ValueError("verify_jl expects unit vectors")
    return distortion_ok(vectors @ vectors.T, jl_map.apply(vectors), eps_jl)


def normalized_images(images):
    norms = np.linalg.norm(images, axis=1)
    if np.any(norms < DEGENERATE_NORM):
        raise ValueError("projection collapsed a vector (norm below 1e-12)")
    return images / norms[:, None]


def inner_product_errors(gram, images):
    """Pairwise ``|<u~,v~> - <u,v>|`` after normalising the images."""
    unit = normalized_images(images)
    return np.abs(unit @ unit.T - np.asarray(gram, dtype=float))


def gram_coordinates(gram, tol=1e-10):
    """Rows ``c_i`` with ``c_i . c_j == gram[i, j]`` in an orthonormal basis of the span."""
    gram = np.asarray(gram, dtype=float)
    w, V = np.linalg.eigh((gram + gram.T) / 2)
    keep = w > tol * max(1.0, w.max())
    return V[:, keep] * np.sqrt(w[keep])


@dataclass(frozen=True, eq=False)
class SpanJLMap:
    """Images of a fixed vector set under a Gaussian map, computed in span coordinates."""

    out_dim: int
    seed: int
    eps_jl: float
    gram: np.ndarray = field(repr=False)
    images: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, gram, out_dim, seed, eps_jl):
        coords = gram_coordinates(gram)
        rng = derive_rng(seed, "jl-span", out_dim, coords.shape[1])
        G = rng.standard_normal((out_dim, coords.shape[1])) / math.sqrt(out_dim)
        return cls(out_dim, int(seed), eps_jl, np.asarray(gram, dtype=float), coords @ G.T)

    def verified(self):
        return distortion_ok(self.gram, self.images, self.eps_jl)

    def unit_images(self):
        return normalized_images(self.images)


def find_verified_map(build, retries, seed):
    """Call ``build(attempt_seed)`` until the result verifies; returns ``(map, attempts)``."""
    for attempt in range(retries):
        candidate = build(derive_seed(seed, "jl-retry", attempt))
        if candidate.verified():
            return candidate, attempt + 1
    raise RuntimeError(f"no JL map passed verification in {retries} attempts")


@dataclass(frozen=True, eq=False)
class _ExplicitCandidate:
    jl_map: JLMap
    vectors: np.ndarray

    def verified(self):
        return verify_jl(self.jl_map, self.vectors, self.jl_map.eps_jl)


def verified_gaussian_map(vectors, eps_jl, seed, retries=10, constant=24.0):
    """Explicit Gaussian map for ``vectors`` that passes :func:`verify_jl`; returns ``(map, attempts)``."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    m = jl_dimension(len(vectors), eps_jl, constant)
    cand, attempts = find_verified_map(
        lambda s: _ExplicitCandidate(JLMap.gaussian(vectors.shape[1], m, s, eps_jl), vectors), retries, seed
    )
    return cand.jl_map, attempts


__all__ = [
    "JLMap",
    "SpanJLMap",
    "apply_and_normalize",
    "distortion_ok",
    "find_verified_map",
    "gram_coordinates",
    "inner_product_errors",
    "jl_dimension",
    "normalized_images",
    "raw_fingerprint_vector",
    "verified_gaussian_map",
    "verify_jl",
]
