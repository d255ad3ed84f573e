import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsketch.bits import BitString
from qsketch.graphs import embed_partial_cube, random_tree
from qsketch.jl import (
    JLMap,
    SpanJLMap,
    apply_and_normalize,
    distortion_ok,
    find_verified_map,
    gram_coordinates,
    inner_product_errors,
    jl_dimension,
    raw_fingerprint_vector,
    verified_gaussian_map,
    verify_jl,
)


def test_raw_vector_examples():
    assert list(raw_fingerprint_vector(BitString.from_str("0"))) == [1.0, 0.0]
    v = raw_fingerprint_vector(BitString.from_str("10"))
    assert v == pytest.approx([0, 1 / math.sqrt(2), 1 / math.sqrt(2), 0])


def test_jl_dimension_examples():
    assert jl_dimension(1, 0.49) == math.ceil(24 * math.log(2) / 0.49**2)
    assert jl_dimension(63, 0.2) == 2496
    a, b = jl_dimension(10, 0.2), jl_dimension(10, 0.1)
    assert abs(b - 4 * a) <= 4
    for bad in [(0, 0.1), (5, 0.5), (5, 0)]:
        with pytest.raises(ValueError):
            jl_dimension(*bad)


def test_map_is_reproducible():
    a = JLMap.gaussian(30, 200, seed=4, eps_jl=0.2)
    b = JLMap.gaussian(30, 200, seed=4, eps_jl=0.2)
    assert np.array_equal(a.entries, b.entries)
    assert not np.array_equal(a.entries, JLMap.gaussian(30, 200, seed=5, eps_jl=0.2).entries)
    # entries have variance 1/m
    big = JLMap.gaussian(50, 400, seed=1, eps_jl=0.2)
    assert big.entries.var() * 400 == pytest.approx(1.0, abs=0.03)


def test_apply_and_normalize_examples():
    u = raw_fingerprint_vector(BitString.from_str("0110"))
    m = JLMap.gaussian(8, 100, seed=0, eps_jl=0.2)
    a, b = apply_and_normalize(m, u), apply_and_normalize(m, u)
    assert a @ b == pytest.approx(1.0)
    Q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((8, 8)))
    assert apply_and_normalize(JLMap.from_matrix(Q), u) == pytest.approx(Q @ u)
    ident = JLMap.from_matrix(np.eye(8))
    assert apply_and_normalize(ident, u) == pytest.approx(u)
    with pytest.raises(ValueError, match="collapsed"):
        apply_and_normalize(JLMap.from_matrix(np.zeros((3, 8))), u)
    with pytest.raises(ValueError):
        apply_and_normalize(ident, 2 * u)
    with pytest.raises(ValueError):
        apply_and_normalize(ident, np.ones(3) / math.sqrt(3))


def test_verify_jl_examples():
    u = raw_fingerprint_vector(BitString.from_str("01"))
    assert verify_jl(JLMap.from_matrix(np.eye(4)), [u], 0.1)
    assert not verify_jl(JLMap.from_matrix(np.zeros((4, 4))), [u], 0.1)
    assert not verify_jl(JLMap.from_matrix(2 * np.eye(4)), [u], 0.1)


def tree_fingerprints(n=64, seed=3):
    T = random_tree(n, np.random.default_rng(seed))
    emb = embed_partial_cube(T)
    return np.array([raw_fingerprint_vector(l) for l in emb.labels])


def test_tree_fingerprints_verify_and_preserve_inner_products():
    V = tree_fingerprints()
    jl_map, attempts = verified_gaussian_map(V, 0.2, seed=11, retries=10)
    assert attempts <= 10
    assert jl_map.out_dim == jl_dimension(64, 0.2)
    err = inner_product_errors(V @ V.T, jl_map.apply(V))
    assert err.max() <= 4 * 0.2


@given(st.integers(0, 2**32))
def test_verified_maps_respect_inner_product_bound(seed):
    # whenever verification passes, every pair is within 4 eps of its original inner product
    rng = np.random.default_rng(seed)
    V = np.array([raw_fingerprint_vector(BitString.random(12, rng)) for _ in range(6)])
    eps = 0.3
    m = JLMap.gaussian(24, 40, seed, eps)
    if verify_jl(m, V, eps):
        assert inner_product_errors(V @ V.T, m.apply(V)).max() <= 4 * eps + 1e-12


def test_span_map_matches_gram():
    V = tree_fingerprints(20, seed=1)
    G = V @ V.T
    C = gram_coordinates(G)
    assert C @ C.T == pytest.approx(G, abs=1e-10)
    jl, attempts = find_verified_map(lambda s: SpanJLMap.build(G, 3000, s, 0.2), 10, seed=2)
    assert jl.verified() and distortion_ok(G, jl.images, 0.2)
    assert inner_product_errors(G, jl.images).max() <= 0.8


def test_span_map_has_gaussian_law():
    # <f(u), f(v)> for a Gaussian map has mean <u, v> and variance (|u|^2|v|^2 + <u,v>^2)/m
    u = raw_fingerprint_vector(BitString.from_str("0011"))
    v = raw_fingerprint_vector(BitString.from_str("0110"))
    G = np.array([[1, u @ v], [u @ v, 1]])
    m, trials = 50, 2000
    samples = [SpanJLMap.build(G, m, s, 0.4).images for s in range(trials)]
    ips = np.array([im[0] @ im[1] for im in samples])
    explicit = np.array(
        [(JLMap.gaussian(8, m, s, 0.4).apply(u)) @ JLMap.gaussian(8, m, s, 0.4).apply(v) for s in range(trials)]
    )
    var = (1 + (u @ v) ** 2) / m
    for arr in (ips, explicit):
        assert abs(arr.mean() - u @ v) <= 4 * math.sqrt(var / trials)
        assert arr.var() == pytest.approx(var, rel=0.15)


def test_retry_gives_up():
    class Never:
        def verified(self):
            return False

    with pytest.raises(RuntimeError):
        find_verified_map(lambda s: Never(), 3, seed=0)
