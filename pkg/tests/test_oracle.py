import random
from dataclasses import replace
from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from momctl.embeddings import BoundedVector, c0_embed, discrete_witness, frechet_embed, one_point_embed
from momctl.metric import MetricMatrix, StructuralError, band_metric, sup_distance, validate
from momctl.oracle import (
    GeneratorConfig,
    audit_outputs,
    brute_sup,
    exhaustive_triangle,
    gen_band_map,
    gen_random_metric,
    gen_vector,
    gen_vector_family,
    metric_closure,
    verify_isometry,
)

from .strategies import metric_pairs, metrics


def bump(m: MetricMatrix, x: str, y: str, by=1) -> MetricMatrix:
    rows = [list(r) for r in m.entries]
    i, j = m.index(x), m.index(y)
    rows[i][j] += by
    rows[j][i] = rows[i][j]
    return MetricMatrix(m.labels, tuple(map(tuple, rows)), m.kind)


class TestBruteSup:
    def test_equal(self, triangle3):
        assert brute_sup(triangle3, triangle3) == 0

    def test_two_point(self):
        d = MetricMatrix.from_pairs("ab", {("a", "b"): 1})
        e = MetricMatrix.from_pairs("ab", {("a", "b"): 3})
        assert brute_sup(d, e) == 2

    def test_mismatch(self, triangle3, two_point):
        with pytest.raises(StructuralError):
            brute_sup(triangle3, two_point)

    @given(metric_pairs())
    def test_agrees_with_sup_distance(self, pair):
        assert brute_sup(*pair) == sup_distance(*pair)


class TestExhaustiveTriangle:
    def test_valid(self, triangle3):
        assert exhaustive_triangle(triangle3) == []

    def test_violation(self):
        m = MetricMatrix.from_pairs("abc", {("a", "b"): 1, ("b", "c"): 1, ("a", "c"): 3})
        assert ("a", "c", "b") in exhaustive_triangle(m)

    def test_raw_table_gives_indices(self):
        assert exhaustive_triangle([[0, 1, 3], [1, 0, 1], [3, 1, 0]]) == [(0, 2, 1), (2, 0, 1)]

    @given(metrics())
    def test_matches_validate(self, d):
        bad = bump(d, d.labels[0], d.labels[-1], 100) if d.n > 2 else d
        assert {v.where for v in validate(bad).violations if v.axiom == "triangle"} == set(
            exhaustive_triangle(bad)
        )


class TestVerifyIsometry:
    def test_one_point_random_twelve(self):
        d = gen_random_metric(GeneratorConfig(seed=7, n=12))
        report = verify_isometry(one_point_embed(d), d)
        assert report.ok and report.distortion == 0 and report.pairs_checked == 66

    def test_singleton(self):
        d = MetricMatrix(("a",), ((0,),))
        report = verify_isometry(one_point_embed(d), d)
        assert report.ok and report.worst is None

    def test_tampered_entry_is_caught(self):
        d = gen_random_metric(GeneratorConfig(seed=3, n=6))
        w = one_point_embed(d)
        pt = w.provenance["pt"]
        u = "x2"
        far = max((x for x in d.labels if x != u), key=lambda x: d(u, x))
        outputs = list(w.outputs)
        k = w.points.index(u)
        outputs[k] = bump(outputs[k], far, pt)
        report = verify_isometry(replace(w, outputs=tuple(outputs)), d)
        assert not report.ok
        assert report.distortion == 1
        assert u in (report.worst.u, report.worst.v)

    def test_frechet_vectors(self, triangle3):
        assert verify_isometry(frechet_embed(triangle3), triangle3).ok

    def test_vector_families(self):
        K = [BoundedVector(v) for v in gen_vector_family(GeneratorConfig(seed=1, M=5), 4)]
        assert verify_isometry(discrete_witness(K), K).ok
        assert verify_isometry(c0_embed(K, 3), K).ok

    def test_c0_compares_only_embedded_coordinates(self):
        K = [BoundedVector((F(0), F(0), F(0))), BoundedVector((F(0), F(1), F(5)))]
        w = c0_embed(K, 2)
        assert verify_isometry(w, K).worst.claimed == 1
        widened = replace(w, provenance={**w.provenance, "M": 3})
        assert verify_isometry(widened, K).distortion == 4

    def test_malformed(self, triangle3, two_point):
        with pytest.raises(StructuralError):
            verify_isometry(one_point_embed(triangle3), two_point)
        with pytest.raises(StructuralError):
            verify_isometry(c0_embed([BoundedVector((F(1),))], 1), [])


class TestGenerators:
    def test_closure_of_metric_is_identity(self, triangle3):
        closed, rounds = metric_closure(triangle3.entries)
        assert tuple(map(tuple, closed)) == triangle3.entries and rounds == 0

    def test_closure_repairs_triangle(self):
        closed, _ = metric_closure([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
        assert closed[0][2] == closed[2][0] == 2
        again, rounds = metric_closure(closed)
        assert again == closed and rounds == 0

    @pytest.mark.parametrize("seed", range(20))
    def test_metric_is_valid_and_deterministic(self, seed):
        cfg = GeneratorConfig(seed=seed, n=1 + seed % 9)
        d = gen_random_metric(cfg)
        assert validate(d).ok
        assert gen_random_metric(cfg) == d

    @given(st.integers(0, 10**6), st.integers(1, 9))
    def test_closure_round_bound(self, seed, n):
        rng = random.Random(seed)
        table = [[F(0)] * n for _ in range(n)]
        for i, j in combinations(range(n), 2):
            table[i][j] = table[j][i] = F(rng.randint(1, 50), rng.randint(1, 5))
        _, rounds = metric_closure(table)
        assert rounds <= n

    @pytest.mark.parametrize("L", [F(1), F(1, 3), F(7, 2)])
    def test_band_map(self, L):
        cfg = GeneratorConfig(seed=11, n=6)
        w = gen_band_map(cfg, L)
        assert w == gen_band_map(cfg, L)
        for i, j in combinations(range(6), 2):
            assert L <= w.entries[i][j] <= 2 * L
        band_metric(w.labels, w.entries, L)
        assert exhaustive_triangle(w) == []

    def test_vectors_respect_caps(self):
        cfg = GeneratorConfig(seed=5, M=8, value_cap=8, den_cap=16)
        for v in gen_vector_family(cfg, 50):
            assert len(v) == 8
            assert all(abs(x) <= 8 and x.denominator <= 16 for x in v)
        assert gen_vector(cfg) == gen_vector(cfg)


def test_audit_flags_bad_outputs():
    w = c0_embed([BoundedVector((F(0), F(1))), BoundedVector((F(-1), F(2)))], 2, shift=False)
    problems = audit_outputs(w)
    assert any("not positive" in p for p in problems)
    assert audit_outputs(c0_embed(w.source, 2)) == []
