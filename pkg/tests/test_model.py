"""Model layer: specs, probabilities, sampling, contraction, expectations.

Frozen constants below come from direct hand evaluation of the closed
forms (noted inline) or from exhaustive enumeration oracles written in
the tests themselves; sampling checks compare seeded Monte Carlo output
against exact binomial moments.
"""

import json
import logging
import math
from itertools import combinations

import numpy as np
import pytest

import hypercomm as hc
from hypercomm import (
    Hypergraph,
    ModelSpec,
    SizeLimitError,
    contract,
    edge_probabilities,
    expected_adjacency,
    expected_model,
    sample_hsbm,
    sample_labels,
    weighted_adjacency,
)

from conftest import balanced_labels, rate_for_probability, single_layer

# 4*ln(100)/99 and ln(100)/99, evaluated directly.
P2_N100_A4 = 0.18606748226214512
Q2_N100_B1 = 0.04651687056553628


# ---------------------------------------------------------------- ModelSpec


def test_spec_validation_rejects_bad_inputs():
    with pytest.raises(ValueError):
        ModelSpec(n=7, layers={2: (4, 1)})  # odd
    with pytest.raises(ValueError):
        ModelSpec(n=6, layers={4: (4, 1)})  # n < 2m
    with pytest.raises(ValueError):
        ModelSpec(n=10, layers={2: (0, 1)})  # nonpositive rate
    with pytest.raises(ValueError):
        ModelSpec(n=10, layers={2: (4, -1)})
    with pytest.raises(ValueError):
        ModelSpec(n=10, layers={1: (4, 1)})  # arity < 2
    with pytest.raises(ValueError):
        ModelSpec(n=10, layers={})


def test_spec_properties_and_round_trip():
    spec = ModelSpec(n=20, layers={3: (6, 2), 2: (4, 1)})
    assert spec.arities == (2, 3)
    assert spec.assortative
    assert not ModelSpec(n=20, layers={2: (4, 1), 3: (2, 6)}).assortative
    again = ModelSpec.from_dict(spec.to_dict())
    assert again == spec
    with pytest.raises(ValueError):
        ModelSpec.from_dict({"n": 20})


# ------------------------------------------------------- edge probabilities


def test_edge_probabilities_reference_values():
    spec = single_layer(100, 2, 4.0, 1.0)
    probs = edge_probabilities(spec, 2)
    assert probs.p == pytest.approx(P2_N100_A4, rel=1e-14)
    assert probs.q == pytest.approx(Q2_N100_B1, rel=1e-14)
    assert not probs.clamped


def test_edge_probabilities_clamp_and_warning(caplog):
    # 50*ln(8)/7 = 14.85 overflows the unit interval and must clamp.
    spec = single_layer(8, 2, 50.0, 0.1)
    with caplog.at_level(logging.WARNING, logger="hypercomm"):
        probs = edge_probabilities(spec, 2)
    assert probs.p == 1.0
    assert probs.clamped
    assert 0.0 < probs.q < 1.0
    assert any("clamp" in rec.message for rec in caplog.records)


def test_edge_probabilities_equal_rates_give_equal_probs():
    probs = edge_probabilities(single_layer(30, 3, 5.0, 5.0), 3)
    assert probs.p == probs.q


def test_edge_probabilities_unknown_arity():
    with pytest.raises(ValueError):
        edge_probabilities(single_layer(10, 2, 4, 1), 3)


# ------------------------------------------------------------------ labels


def test_sample_labels_balanced_for_every_seed():
    for seed in range(50):
        labels = sample_labels(6, np.random.default_rng(seed))
        assert sorted(labels.tolist()) == [-1, -1, -1, 1, 1, 1]


def test_sample_labels_deterministic():
    a = sample_labels(12, np.random.default_rng(99))
    b = sample_labels(12, np.random.default_rng(99))
    assert np.array_equal(a, b)


def test_sample_labels_uniform_over_assignments():
    # With n=2 the first coordinate is a fair coin; 4000 draws give a
    # binomial standard deviation of ~0.008 on the frequency.
    rng = np.random.default_rng(7)
    hits = sum(sample_labels(2, rng)[0] == 1 for _ in range(4000))
    assert abs(hits / 4000 - 0.5) < 0.04


def test_sample_labels_odd_n_rejected():
    with pytest.raises(ValueError):
        sample_labels(5, np.random.default_rng(0))


# ------------------------------------------------------------- Hypergraph


def test_hypergraph_validation():
    ok = Hypergraph(n=5, layers={2: np.array([[0, 1], [0, 2]])})
    assert ok.edge_count() == 2
    with pytest.raises(ValueError):
        Hypergraph(n=5, layers={2: np.array([[1, 0]])})  # row not increasing
    with pytest.raises(ValueError):
        Hypergraph(n=5, layers={2: np.array([[0, 1], [0, 1]])})  # duplicate
    with pytest.raises(ValueError):
        Hypergraph(n=5, layers={2: np.array([[0, 2], [0, 1]])})  # not lex sorted
    with pytest.raises(ValueError):
        Hypergraph(n=5, layers={2: np.array([[0, 5]])})  # vertex out of range
    with pytest.raises(ValueError):
        Hypergraph(n=5, layers={3: np.array([[0, 1]])})  # wrong row width
    with pytest.raises(ValueError):
        Hypergraph(n=2, layers={3: np.empty((0, 3), dtype=np.int64)})  # arity > n


def test_hypergraph_json_round_trip():
    h = Hypergraph(
        n=6,
        layers={2: np.array([[0, 1]]), 3: np.array([[1, 2, 3], [2, 4, 5]])},
        labels=balanced_labels(6),
    )
    again = Hypergraph.from_json(h.to_json())
    assert again.n == h.n
    assert set(again.layers) == {2, 3}
    for m in (2, 3):
        assert np.array_equal(again.layers[m], h.layers[m])
    assert np.array_equal(again.labels, h.labels)
    with pytest.raises(ValueError):
        Hypergraph.from_json(json.dumps({"n": 4}))


# --------------------------------------------------------------- sampling


def test_sample_deterministic_blocks():
    # Rate 3 clamps p to 1 at n=4 while b=1e-12 keeps cross edges away,
    # so the draw is the two within-community pairs with certainty.
    spec = single_layer(4, 2, 3.0, 1e-12)
    labels = np.array([1, 1, -1, -1])
    h = sample_hsbm(spec, labels, np.random.default_rng(11))
    assert np.array_equal(h.layers[2], [[0, 1], [2, 3]])
    assert np.array_equal(h.labels, labels)


def test_sample_saturated_layer_uses_enumeration():
    # p=1 forces all 2*C(6,3)=40 in-cluster triples; the dense class goes
    # through the enumeration path rather than rejection.
    spec = single_layer(12, 3, 23.0, 1e-12)
    labels = balanced_labels(12)
    h = sample_hsbm(spec, labels, np.random.default_rng(5))
    assert len(h.layers[3]) == 40
    sgn = labels[h.layers[3]]
    assert np.all(sgn == sgn[:, :1])


def test_sample_respects_seed():
    spec = ModelSpec(n=30, layers={2: (5, 2), 3: (8, 3)})
    labels = balanced_labels(30)
    h1 = sample_hsbm(spec, labels, np.random.default_rng(42))
    h2 = sample_hsbm(spec, labels, np.random.default_rng(42))
    for m in (2, 3):
        assert np.array_equal(h1.layers[m], h2.layers[m])


def test_sample_edges_canonical_and_in_range():
    spec = ModelSpec(n=20, layers={2: (6, 3), 3: (10, 4), 4: (12, 6)})
    h = sample_hsbm(spec, balanced_labels(20), np.random.default_rng(1))
    for m, edges in h.layers.items():
        assert edges.shape[1] == m
        assert len(edges) <= math.comb(20, m)
        assert np.all(np.diff(edges, axis=1) > 0)  # strictly increasing rows
        as_tuples = [tuple(r) for r in edges.tolist()]
        assert as_tuples == sorted(as_tuples)  # lex sorted
        assert len(set(as_tuples)) == len(as_tuples)  # distinct


def test_sample_edge_count_matches_binomial_mean():
    # a=b makes every 3-subset an independent Bernoulli(p736) coin, so the
    # total count over 200 draws must sit within 4 standard errors of N*p.
    n, a = 100, 4.0
    spec = single_layer(n, 3, a, a)
    labels = balanced_labels(n)
    p = a * math.log(n) / math.comb(n - 1, 2)
    N = math.comb(n, 3)
    draws = 200
    rng = np.random.default_rng(17)
    counts = [len(sample_hsbm(spec, labels, rng).layers[3]) for _ in range(draws)]
    se = math.sqrt(N * p * (1 - p) / draws)
    assert abs(np.mean(counts) - N * p) < 4 * se


def test_sample_layers_are_independent():
    # With a=b each layer's chosen subset is a fair-ish coin independent of
    # labels; cross-tabulate one pair edge and one triple edge over 400
    # draws and require the chi-square statistic under the 0.1% critical
    # value 10.828 (1 degree of freedom).
    n = 30
    a2 = rate_for_probability(n, 2, 0.5)
    a3 = rate_for_probability(n, 3, 0.5)
    spec = ModelSpec(n=n, layers={2: (a2, a2), 3: (a3, a3)})
    labels = balanced_labels(n)
    rng = np.random.default_rng(23)
    table = np.zeros((2, 2))
    for _ in range(400):
        h = sample_hsbm(spec, labels, rng)
        has_pair = [0, 1] in h.layers[2].tolist()
        has_triple = [0, 1, 2] in h.layers[3].tolist()
        table[int(has_pair), int(has_triple)] += 1
    row = table.sum(axis=1, keepdims=True)
    col = table.sum(axis=0, keepdims=True)
    expected = row * col / table.sum()
    chi2 = ((table - expected) ** 2 / expected).sum()
    assert chi2 < 10.828
    # both margins are fair coins: 4 sigma band around 200
    assert abs(row[1, 0] - 200) < 40 and abs(col[0, 1] - 200) < 40


def test_sample_guard_on_giant_enumeration():
    # Saturating a layer whose class is too large to enumerate must refuse
    # rather than stall.
    n = 600
    a = rate_for_probability(n, 4, 1.0) + 1
    spec = single_layer(n, 4, a, 1e-12)
    with pytest.raises(SizeLimitError):
        sample_hsbm(spec, balanced_labels(n), np.random.default_rng(0))


# -------------------------------------------------------------- contraction


def test_contract_single_triple():
    h = Hypergraph(n=4, layers={3: np.array([[0, 1, 2]])})
    A = contract(h)
    expected = np.zeros((4, 4), dtype=np.int64)
    for i, j in [(0, 1), (0, 2), (1, 2)]:
        expected[i, j] = expected[j, i] = 1
    assert np.array_equal(A, expected)
    assert A.dtype == np.int64


def test_contract_overlapping_edges_accumulate():
    h = Hypergraph(n=4, layers={3: np.array([[0, 1, 2], [0, 1, 3]])})
    A = contract(h)
    assert A[0, 1] == 2
    assert A[2, 3] == 0
    assert np.array_equal(A, A.T)
    assert np.all(np.diag(A) == 0)


def test_contract_empty_hypergraph():
    h = Hypergraph(n=5, layers={2: np.empty((0, 2), dtype=np.int64)})
    assert not contract(h).any()


def test_contract_matches_pair_enumeration():
    # Independent oracle: count pair co-occurrences with plain dicts.
    spec = ModelSpec(n=16, layers={2: (5, 2), 3: (8, 3), 4: (10, 4)})
    h = sample_hsbm(spec, balanced_labels(16), np.random.default_rng(31))
    counts: dict[tuple[int, int], int] = {}
    for edges in h.layers.values():
        for row in edges.tolist():
            for i, j in combinations(row, 2):
                counts[(i, j)] = counts.get((i, j), 0) + 1
    A = contract(h)
    for i in range(16):
        for j in range(i + 1, 16):
            assert A[i, j] == counts.get((i, j), 0)
            assert A[j, i] == A[i, j]


# ----------------------------------------------------------- expectations


def test_expected_model_reference_values():
    em = expected_model(single_layer(100, 2, 4.0, 1.0))
    assert em.p == pytest.approx(P2_N100_A4, rel=1e-14)
    assert em.q == pytest.approx(Q2_N100_B1, rel=1e-14)
    # (p+q)*50 - p and (p-q)*50 - p, evaluated directly
    assert em.rho_n == pytest.approx(11.443150159121926, rel=1e-12)
    assert em.lambda2_star == pytest.approx(6.791463102568297, rel=1e-12)


def test_expected_model_identities():
    for spec in [
        single_layer(100, 2, 4, 1),
        ModelSpec(n=40, layers={2: (3, 2), 3: (9, 4), 5: (30, 11)}),
    ]:
        em = expected_model(spec)
        assert em.lambda1_star == em.rho_n
        assert em.lambda1_star - em.lambda2_star == pytest.approx(
            em.q * spec.n, rel=1e-12
        )


def test_expected_model_equal_rates_flip_sign():
    em = expected_model(ModelSpec(n=30, layers={2: (5, 5), 3: (7, 7)}))
    assert em.p == em.q
    assert em.lambda2_star == pytest.approx(-em.p)
    assert em.lambda2_star < 0


def test_expected_adjacency_block_structure():
    spec = single_layer(100, 2, 4.0, 1.0)
    labels = balanced_labels(100)
    A = expected_adjacency(spec, labels)
    em = expected_model(spec)
    same = np.equal.outer(labels, labels)
    np.fill_diagonal(same, False)
    assert np.all(A[same] == em.p)
    off = ~np.equal.outer(labels, labels)
    assert np.all(A[off] == em.q)
    assert np.all(np.diag(A) == 0)
    # every row sums to the expected degree
    np.testing.assert_allclose(A.sum(axis=1), em.rho_n, rtol=1e-12)


def test_expected_adjacency_second_eigenvector_is_labels():
    spec = ModelSpec(n=40, layers={2: (6, 2), 3: (12, 5)})
    labels = np.random.default_rng(2).permutation(balanced_labels(40))
    A = expected_adjacency(spec, labels)
    w, V = np.linalg.eigh(A)  # independent dense oracle
    second = V[:, np.argsort(w)[-2]]
    assert np.array_equal(np.sign(second * second[0]), labels * labels[0])
    em = expected_model(spec)
    assert w[np.argsort(w)[-2]] == pytest.approx(em.lambda2_star, rel=1e-12)


def test_expected_adjacency_dimension_mismatch():
    with pytest.raises(ValueError):
        expected_adjacency(single_layer(10, 2, 4, 1), balanced_labels(8))


def test_pair_layer_empirical_mean_matches_expected_adjacency():
    # For a pure pair layer the closed-form block matrix is the exact
    # entrywise mean of the contraction; 600 seeded draws must agree to
    # within 5 binomial standard errors, entry by entry.
    spec = single_layer(20, 2, 4.0, 1.0)
    labels = balanced_labels(20)
    em = expected_model(spec)
    target = expected_adjacency(spec, labels)
    draws = 600
    rng = np.random.default_rng(8)
    acc = np.zeros((20, 20))
    for _ in range(draws):
        acc += contract(sample_hsbm(spec, labels, rng))
    mean = acc / draws
    var = np.where(np.equal.outer(labels, labels), em.p * (1 - em.p), em.q * (1 - em.q))
    np.fill_diagonal(var, np.inf)  # diagonal is identically zero
    tol = 5 * np.sqrt(var / draws)
    assert np.all(np.abs(mean - target) <= tol)
    assert np.all(np.diag(mean) == 0)


def test_triple_layer_empirical_mean_matches_enumeration():
    # For arity 3 the exact entrywise mean comes from enumerating every
    # 3-subset covering the pair and adding its presence probability;
    # 600 seeded draws must agree within 5 standard errors.
    n, a, b = 16, 6.0, 2.0
    spec = single_layer(n, 3, a, b)
    labels = balanced_labels(n)
    probs = edge_probabilities(spec, 3)
    mean_exact = np.zeros((n, n))
    var_exact = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i == j:
                var_exact[i, j] = np.inf
                continue
            for k in set(range(n)) - {i, j}:
                pr = probs.p if labels[i] == labels[j] == labels[k] else probs.q
                mean_exact[i, j] += pr
                var_exact[i, j] += pr * (1 - pr)
    draws = 600
    rng = np.random.default_rng(13)
    acc = np.zeros((n, n))
    for _ in range(draws):
        acc += contract(sample_hsbm(spec, labels, rng))
    mean = acc / draws
    # sanity-pin the two cell kinds: 6p+8q within blocks, 14q across
    assert mean_exact[0, 1] == pytest.approx(6 * probs.p + 8 * probs.q, rel=1e-12)
    assert mean_exact[0, 8] == pytest.approx(14 * probs.q, rel=1e-12)
    assert np.all(np.abs(mean - mean_exact) <= 5 * np.sqrt(var_exact / draws))


# ---------------------------------------------------- weighted adjacency


def test_weighted_adjacency_single_pair_edge():
    spec = single_layer(4, 2, 2.0, 1.0)
    probs = edge_probabilities(spec, 2)
    h = Hypergraph(n=4, layers={2: np.array([[0, 1]])})
    labels = np.array([1, 1, -1, -1])
    W = weighted_adjacency(h, labels, spec)
    w = math.log(probs.p / probs.q)
    assert W[0, 1] == pytest.approx(w)
    assert W[1, 0] == pytest.approx(w)
    assert np.count_nonzero(W) == 2


def test_weighted_adjacency_pair_layer_symmetric():
    spec = single_layer(12, 2, 4.0, 1.5)
    labels = balanced_labels(12)
    h = sample_hsbm(spec, labels, np.random.default_rng(3))
    W = weighted_adjacency(h, labels, spec)
    np.testing.assert_allclose(W, W.T, atol=0)


def test_weighted_adjacency_triple_hand_case():
    # Edge {0,1,2} with labels (+,+,-,-): rows 0 and 1 see one same-sign
    # companion (weight 1/1 both to the partner and across), while row 2
    # has no same-sign companion and spreads 1/(m-1)=1/2 to each.
    spec = single_layer(6, 3, 4.0, 1.0)
    probs = edge_probabilities(spec, 3)
    w = math.log(probs.p / probs.q)
    h = Hypergraph(n=6, layers={3: np.array([[0, 1, 2]])})
    labels = np.array([1, 1, -1, 1, -1, -1])
    W = weighted_adjacency(h, labels, spec)
    expected = np.zeros((6, 6))
    expected[0, 1] = expected[0, 2] = w
    expected[1, 0] = expected[1, 2] = w
    expected[2, 0] = expected[2, 1] = w / 2
    np.testing.assert_allclose(W, expected, rtol=1e-12)


def test_weighted_adjacency_all_same_edge_splits_evenly():
    spec = single_layer(6, 3, 4.0, 1.0)
    probs = edge_probabilities(spec, 3)
    w = math.log(probs.p / probs.q)
    h = Hypergraph(n=6, layers={3: np.array([[0, 1, 2]])})
    labels = np.array([1, 1, 1, -1, -1, -1])
    W = weighted_adjacency(h, labels, spec)
    sub = W[np.ix_([0, 1, 2], [0, 1, 2])]
    np.testing.assert_allclose(sub, (w / 2) * (np.ones((3, 3)) - np.eye(3)), rtol=1e-12)


def test_weighted_adjacency_row_identity():
    # For every vertex, sign-corrected row action on the labels telescopes
    # to (all-same edges) - (all-opposite edges), weighted by the log ratio;
    # mixed edges cancel exactly.  Edge classification is exhaustive.
    rng = np.random.default_rng(9)
    spec = ModelSpec(n=16, layers={2: (4, 1.5), 3: (9, 3), 4: (12, 5)})
    labels = rng.permutation(balanced_labels(16))
    h = sample_hsbm(spec, labels, rng)
    W = weighted_adjacency(h, labels, spec)
    row_action = labels * (W @ labels)
    for v in range(16):
        expected = 0.0
        for m, edges in h.layers.items():
            probs = edge_probabilities(spec, m)
            w = math.log(probs.p / probs.q)
            for row in edges.tolist():
                if v not in row:
                    continue
                same = sum(1 for u in row if u != v and labels[u] == labels[v])
                if same == m - 1:
                    expected += w
                elif same == 0:
                    expected -= w
        assert row_action[v] == pytest.approx(expected, abs=1e-12)


def test_weighted_adjacency_requires_assortative_and_open_probs():
    h = Hypergraph(n=4, layers={2: np.array([[0, 1]])})
    labels = np.array([1, 1, -1, -1])
    with pytest.raises(ValueError):
        weighted_adjacency(h, labels, single_layer(4, 2, 1.0, 2.0))
    with pytest.raises(ValueError):
        # rate 3 clamps p to 1 at n=4
        weighted_adjacency(h, labels, single_layer(4, 2, 3.0, 1.0))
