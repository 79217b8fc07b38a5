"""Brute-force checks and seeded generators.

Nothing here calls into :mod:`momctl.embeddings`; distances are recomputed
from scratch with deliberately different loop orders, so a transcription
slip on either side shows up as a disagreement.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

from .metric import METRIC, MetricMatrix, StructuralError, as_rat


@dataclass(frozen=True)
class WorstPair:
    u: str
    v: str
    claimed: Fraction
    achieved: Fraction


@dataclass(frozen=True)
class IsometryReport:
    distortion: Fraction
    worst: WorstPair | None
    pairs_checked: int = 0

    @property
    def ok(self) -> bool:
        return self.distortion == 0


@dataclass(frozen=True)
class GeneratorConfig:
    """Seed plus size and value caps.  Equal configs give equal streams."""

    seed: int
    n: int = 8
    M: int = 4
    value_cap: int = 8
    den_cap: int = 16

    def rng(self) -> random.Random:
        return random.Random(self.seed)


def brute_sup(d: MetricMatrix, e: MetricMatrix) -> Fraction:
    """Sup-metric recomputed over all ordered pairs, scanning backwards."""
    if tuple(d.labels) != tuple(e.labels):
        raise StructuralError(f"ground sets differ: {d.labels} vs {e.labels}")
    n = len(d.labels)
    cells = ((i, j) for i in reversed(range(n)) for j in reversed(range(n)))
    return reduce(
        lambda acc, ij: max(acc, abs(e.entries[ij[0]][ij[1]] - d.entries[ij[0]][ij[1]])),
        cells,
        Fraction(0),
    )


def exhaustive_triangle(d) -> list[tuple]:
    """Every ordered triple ``(x, y, z)`` with ``d(x, y) > d(x, z) + d(z, y)``.

    ``d`` is a :class:`MetricMatrix` (triples come back as labels) or a
    plain square table (triples come back as indices).
    """
    if isinstance(d, MetricMatrix):
        labels, table = d.labels, d.entries
    else:
        table = [[as_rat(v) for v in row] for row in d]
        labels = tuple(range(len(table)))
    n = len(table)
    bad = []
    for z in range(n):
        for x in range(n):
            dxz = table[x][z]
            for y in range(n):
                if table[x][y] > dxz + table[z][y]:
                    bad.append((x, y, z))
    bad.sort()
    return [(labels[x], labels[y], labels[z]) for x, y, z in bad]


def _vector_gap(a: Sequence[Fraction], b: Sequence[Fraction], upto: int) -> Fraction:
    if len(a) < upto or len(b) < upto:
        raise StructuralError(f"vectors shorter than {upto} coordinates")
    gap = Fraction(0)
    for s in range(upto - 1, -1, -1):
        diff = a[s] - b[s]
        if diff < 0:
            diff = -diff
        if diff > gap:
            gap = diff
    return gap


def _values(x) -> tuple[Fraction, ...]:
    return tuple(as_rat(v) for v in getattr(x, "values", x))


def verify_isometry(w, original) -> IsometryReport:
    """Compare every pair of witness images against the original distance.

    ``original`` is the input metric (its labels must be the witness
    points) or the input vector family in witness point order.  For the
    c0 construction only the first ``provenance["M"]`` coordinates count.
    Achieved distances use :func:`brute_sup` for matrix images and a
    hand-rolled sup-norm for vector images.
    """
    points = tuple(w.points)
    outputs = tuple(w.outputs)
    if len(points) != len(outputs):
        raise StructuralError("witness has mismatched points and outputs")

    if isinstance(original, MetricMatrix):
        if tuple(original.labels) != points:
            raise StructuralError(f"original labels {original.labels} differ from witness points")
        pos = {x: k for k, x in enumerate(original.labels)}

        def claimed(i, j):
            return original.entries[pos[points[i]]][pos[points[j]]]
    else:
        vecs = [_values(v) for v in original]
        if len(vecs) != len(points):
            raise StructuralError(f"{len(vecs)} original vectors for {len(points)} witness points")
        if w.construction == "c0":
            upto = int(w.provenance["M"])
        else:
            upto = len(vecs[0]) if vecs else 0

        def claimed(i, j):
            return _vector_gap(vecs[i], vecs[j], upto)

    matrices = [o for o in outputs if isinstance(o, MetricMatrix)]
    if matrices and len(matrices) != len(outputs):
        raise StructuralError("witness mixes matrix and vector images")

    def achieved(i, j):
        if matrices:
            return brute_sup(outputs[i], outputs[j])
        a, b = _values(outputs[i]), _values(outputs[j])
        if len(a) != len(b):
            raise StructuralError("vector images of different lengths")
        return _vector_gap(a, b, len(a))

    distortion, worst, checked = Fraction(0), None, 0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            want, got = claimed(i, j), achieved(i, j)
            checked += 1
            gap = abs(want - got)
            if worst is None or gap > distortion:
                distortion, worst = gap, WorstPair(points[i], points[j], want, got)
    return IsometryReport(distortion, worst, checked)


def metric_closure(table: Sequence[Sequence]) -> tuple[list[list[Fraction]], int]:
    """Shortest-path closure by repeated full relaxation rounds.

    Returns the closed table and the number of rounds that changed
    something (at most ``n``).
    """
    d = [[as_rat(v) for v in row] for row in table]
    n = len(d)
    rounds = 0
    while True:
        changed = False
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    via = d[i][k] + d[k][j]
                    if via < d[i][j]:
                        d[i][j] = via
                        changed = True
        if not changed:
            return d, rounds
        rounds += 1


def point_labels(n: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(n))


def _positive_rat(rng: random.Random, cfg: GeneratorConfig) -> Fraction:
    return Fraction(rng.randint(1, cfg.value_cap), rng.randint(1, cfg.den_cap))


def gen_random_metric(cfg: GeneratorConfig, rng: random.Random | None = None) -> MetricMatrix:
    """Random symmetric positive table pushed through :func:`metric_closure`."""
    if cfg.n < 1:
        raise ValueError("need n >= 1")
    rng = cfg.rng() if rng is None else rng
    n = cfg.n
    table = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            table[i][j] = table[j][i] = _positive_rat(rng, cfg)
    closed, _ = metric_closure(table)
    return MetricMatrix(point_labels(n), tuple(map(tuple, closed)), METRIC)


def gen_band_map(cfg: GeneratorConfig, L, rng: random.Random | None = None) -> MetricMatrix:
    """Symmetric table, zero diagonal, off-diagonal values drawn from ``[L, 2L]``."""
    L = as_rat(L)
    if L <= 0:
        raise ValueError(f"band level must be positive, got {L}")
    rng = cfg.rng() if rng is None else rng
    n = cfg.n
    table = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            q = rng.randint(1, cfg.den_cap)
            table[i][j] = table[j][i] = L + L * Fraction(rng.randint(0, q), q)
    return MetricMatrix(point_labels(n), tuple(map(tuple, table)), METRIC)


def gen_vector(cfg: GeneratorConfig, rng: random.Random | None = None) -> tuple[Fraction, ...]:
    """``cfg.M`` rationals ``p/q`` with ``q <= den_cap`` and ``|p/q| <= value_cap``."""
    rng = cfg.rng() if rng is None else rng
    out = []
    for _ in range(cfg.M):
        q = rng.randint(1, cfg.den_cap)
        out.append(Fraction(rng.randint(-cfg.value_cap * q, cfg.value_cap * q), q))
    return tuple(out)


def gen_vector_family(
    cfg: GeneratorConfig, count: int, rng: random.Random | None = None
) -> list[tuple[Fraction, ...]]:
    rng = cfg.rng() if rng is None else rng
    return [gen_vector(cfg, rng) for _ in range(count)]


def audit_outputs(w) -> list[str]:
    """Problems with any matrix image: bad diagonal, asymmetry, a
    nonpositive distance between distinct points, or a triangle violation."""
    problems = []
    for point, out in zip(w.points, w.outputs):
        if not isinstance(out, MetricMatrix):
            continue
        t, lab = out.entries, out.labels
        n = len(lab)
        for i in range(n):
            if t[i][i] != 0:
                problems.append(f"{point}: d({lab[i]}, {lab[i]}) = {t[i][i]}")
            for j in range(n):
                if i != j and t[i][j] <= 0:
                    problems.append(f"{point}: d({lab[i]}, {lab[j]}) = {t[i][j]} is not positive")
                if t[i][j] != t[j][i]:
                    problems.append(f"{point}: asymmetric at ({lab[i]}, {lab[j]})")
        for x, y, z in exhaustive_triangle(out):
            problems.append(f"{point}: triangle fails for d({x}, {y}) via {z}")
    return problems
