"""Isometric embeddings into spaces of metrics, on finite truncations.

Four constructions live here:

* :func:`frechet_embed` sends a finite metric space into sup-normed vectors.
* :func:`one_point_embed` sends ``(X, d)`` into metrics on ``X`` plus one
  extra point.
* :func:`discrete_embed` sends a bounded vector into metrics on a disjoint
  union of blocks, with distances confined to bands ``[2^(i+1), 2^(i+2)]``.
* :func:`c0_embed` sends a finite family of vectors into metrics on
  ``2M`` block points plus a limit point.

Each returns (or is wrapped into) an :class:`EmbeddingWitness` carrying
enough provenance for :func:`replay` to rebuild it bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from .metric import (
    METRIC,
    MetricMatrix,
    StructuralError,
    as_rat,
    validate,
)

FRECHET = "frechet"
ONE_POINT = "one-point"
DISCRETE = "discrete"
C0 = "c0"
CONSTRUCTIONS = (FRECHET, ONE_POINT, DISCRETE, C0)

OMEGA = "ω"
ONE_POINT_CONSTANT = Fraction(1)


class PlanError(ValueError):
    """A truncation plan cannot carry the requested input exactly."""


class InvalidInputError(ValueError):
    """An input metric fails validation."""


@dataclass(frozen=True)
class BoundedVector:
    values: tuple[Fraction, ...]
    bound: Fraction | None = None

    def __post_init__(self):
        values = tuple(as_rat(v) for v in self.values)
        if not values:
            raise StructuralError("a bounded vector needs at least one coordinate")
        norm = max(abs(v) for v in values)
        bound = norm if self.bound is None else as_rat(self.bound)
        if bound < norm:
            raise StructuralError(f"recorded bound {bound} is below the sup-norm {norm}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "bound", bound)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, s: int) -> Fraction:
        return self.values[s]

    def truncate(self, m: int) -> BoundedVector:
        return BoundedVector(self.values[:m], self.bound)


def sup_norm_distance(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    if len(a) != len(b):
        raise StructuralError(f"length mismatch: {len(a)} vs {len(b)}")
    return max(abs(x - y) for x, y in zip(a, b))


@dataclass(frozen=True)
class TruncationPlan:
    """Finite stand-in for a partition into blocks with pair surjections.

    ``pairings[i]`` lists ``((p, q), s)``: the unordered pair ``{p, q}`` of
    block ``i`` carries coordinate ``s``.  Blocks ``0..N`` are used; block
    ``N`` is the one whose clamp ``[-2^N, 2^N]`` contains every input value.
    """

    M: int
    N: int
    block_sizes: tuple[int, ...]
    blocks: tuple[tuple[str, ...], ...]
    pairings: tuple[tuple[tuple[tuple[str, str], int], ...], ...]

    def __post_init__(self):
        if self.M < 1 or self.N < 0:
            raise PlanError(f"need M >= 1 and N >= 0, got M={self.M}, N={self.N}")
        if not len(self.block_sizes) == len(self.blocks) == len(self.pairings) == self.N + 1:
            raise PlanError("plan must describe exactly N + 1 blocks")
        seen: set[str] = set()
        for i, (size, block, pairing) in enumerate(zip(self.block_sizes, self.blocks, self.pairings)):
            if len(block) != size or comb(size, 2) < self.M:
                raise PlanError(f"block {i} of size {len(block)} cannot cover {self.M} indices")
            if seen.intersection(block) or len(set(block)) != size:
                raise PlanError(f"block {i} overlaps another block")
            seen.update(block)
            pairs = {frozenset(p) for p, _ in pairing}
            if pairs != {frozenset(p) for p in combinations(block, 2)} or len(pairing) != len(pairs):
                raise PlanError(f"pairing {i} must list every pair of block {i} once")
            if {s for _, s in pairing} != set(range(self.M)):
                raise PlanError(f"pairing {i} is not onto 0..{self.M - 1}")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(x for block in self.blocks for x in block)


def block_label(i: int, j: int) -> str:
    return f"s{i}.{j}"


def plan_truncation(M: int, B=0, N: int | None = None) -> TruncationPlan:
    """Smallest plan carrying length-``M`` vectors bounded by ``B``.

    ``N`` is the least nonnegative integer with ``2^N >= B`` unless pinned.
    Each block has the least size ``m`` with ``C(m, 2) >= M``; pairs are
    enumerated lexicographically and assigned indices ``0, 1, ..., M-1``
    cyclically, so every pairing is onto.  A pinned ``N`` is not checked
    against ``B`` here; :func:`discrete_embed` refuses inputs it cannot carry.
    """
    if M < 1:
        raise PlanError(f"M must be positive, got {M}")
    B = as_rat(B)
    if N is None:
        N = 0
        while 2**N < B:
            N += 1
    m = 2
    while comb(m, 2) < M:
        m += 1
    blocks, pairings = [], []
    for i in range(N + 1):
        block = tuple(block_label(i, j) for j in range(m))
        blocks.append(block)
        pairings.append(tuple((pq, k % M) for k, pq in enumerate(combinations(block, 2))))
    return TruncationPlan(M, N, (m,) * (N + 1), tuple(blocks), tuple(pairings))


def clamp(t, x) -> Fraction:
    """Saturate ``x`` into ``[-t, t]``."""
    t, x = as_rat(t), as_rat(x)
    if t < 0:
        raise ValueError(f"clamp level must be nonnegative, got {t}")
    return max(-t, min(t, x))


def discrete_embed(a: BoundedVector, plan: TruncationPlan) -> MetricMatrix:
    """The block metric encoding ``a``.

    Inside block ``i`` the pair ``{p, q}`` sits at distance
    ``clamp(2^i, a[tau_i{p, q}]) + 3 * 2^i``, which lies in
    ``[2^(i+1), 2^(i+2)]``; points of blocks ``i != j`` sit at
    ``max(2^(i+2), 2^(j+2))`` regardless of ``a``.
    """
    if len(a) != plan.M:
        raise PlanError(f"vector has {len(a)} coordinates but the plan covers {plan.M}")
    if 2**plan.N < a.bound:
        raise PlanError(
            f"clamp level N={plan.N} too small: 2^N = {2**plan.N} < bound {a.bound}"
        )
    labels = plan.labels
    pos = {x: k for k, x in enumerate(labels)}
    block_of = {x: i for i, block in enumerate(plan.blocks) for x in block}
    table = [[Fraction(0)] * len(labels) for _ in labels]
    for x in labels:
        for y in labels:
            i, j = block_of[x], block_of[y]
            if i != j:
                table[pos[x]][pos[y]] = Fraction(max(2 ** (i + 2), 2 ** (j + 2)))
    for i, pairing in enumerate(plan.pairings):
        level = 2**i
        for (p, q), s in pairing:
            value = clamp(level, a[s]) + 3 * level
            table[pos[p]][pos[q]] = table[pos[q]][pos[p]] = value
    return MetricMatrix(labels, tuple(map(tuple, table)), METRIC)


def net_min(family: Sequence[BoundedVector]) -> BoundedVector:
    """Pointwise minimum of a nonempty family of equal-length vectors."""
    if not family:
        raise ValueError("net_min of an empty family")
    lengths = {len(f) for f in family}
    if len(lengths) != 1:
        raise StructuralError(f"vectors of unequal lengths {sorted(lengths)}")
    return BoundedVector(tuple(min(col) for col in zip(*(f.values for f in family))))


def net_max(family: Sequence[BoundedVector]) -> BoundedVector:
    if not family:
        raise ValueError("net_max of an empty family")
    return BoundedVector(tuple(max(col) for col in zip(*(f.values for f in family))))


@dataclass(frozen=True, eq=True)
class EmbeddingWitness:
    """Everything an embedding produced, plus how to reproduce it.

    ``source`` is the input metric (frechet, one-point) or the tuple of
    input vectors (discrete, c0).  ``outputs[k]`` is the image of
    ``points[k]``: a :class:`BoundedVector` for frechet, a
    :class:`MetricMatrix` otherwise.
    """

    construction: str
    source: MetricMatrix | tuple[BoundedVector, ...]
    points: tuple[str, ...]
    outputs: tuple[MetricMatrix | BoundedVector, ...]
    provenance: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if self.construction not in CONSTRUCTIONS:
            raise StructuralError(f"unknown construction {self.construction!r}")
        if len(self.points) != len(self.outputs):
            raise StructuralError("one output per point is required")
        if len(set(self.points)) != len(self.points):
            raise StructuralError("duplicate point names in witness")
        grounds = {
            out.labels if isinstance(out, MetricMatrix) else len(out) for out in self.outputs
        }
        if len(grounds) > 1:
            raise StructuralError("outputs of one witness must share a ground set")

    def image(self, point: str):
        return self.outputs[self.points.index(point)]


def _require_metric(d: MetricMatrix) -> None:
    report = validate(d, METRIC)
    if not report.ok:
        first = report.violations[0]
        raise InvalidInputError(
            f"input is not a metric: {first.axiom} at {first.where} ({first.lhs} vs {first.rhs})"
        )


def frechet_embed(d: MetricMatrix, order: Sequence[str] | None = None) -> EmbeddingWitness:
    """``x -> (d(x, q_k) - d(q_k, q_0))_k`` for the enumeration ``q_0, q_1, ...``."""
    order = d.labels if order is None else tuple(order)
    if sorted(order) != sorted(d.labels) or len(order) != d.n:
        raise StructuralError(f"enumeration {order} is not a permutation of {d.labels}")
    _require_metric(d)
    q0 = order[0]
    offsets = [d(q, q0) for q in order]
    outputs = tuple(
        BoundedVector(tuple(d(x, q) - off for q, off in zip(order, offsets))) for x in d.labels
    )
    return EmbeddingWitness(FRECHET, d, d.labels, outputs, {"order": tuple(order)})


def fresh_label(taken: Sequence[str], base: str = "pt") -> str:
    taken = set(taken)
    label, k = base, 0
    while label in taken:
        k += 1
        label = f"{base}{k}"
    return label


def one_point_metric(d: MetricMatrix, u: str, pt: str) -> MetricMatrix:
    """``d`` on ``X``, and ``d(x, u) + 1`` between ``x`` and the extra point."""
    n = d.n
    ui = d.index(u)
    rows = [list(row) + [d.entries[i][ui] + ONE_POINT_CONSTANT] for i, row in enumerate(d.entries)]
    rows.append([d.entries[ui][j] + ONE_POINT_CONSTANT for j in range(n)] + [Fraction(0)])
    return MetricMatrix(d.labels + (pt,), tuple(map(tuple, rows)), METRIC)


def one_point_embed(d: MetricMatrix, pt: str | None = None) -> EmbeddingWitness:
    _require_metric(d)
    pt = fresh_label(d.labels) if pt is None else pt
    if pt in d.labels:
        raise StructuralError(f"extra point {pt!r} already labels a point of X")
    outputs = tuple(one_point_metric(d, u, pt) for u in d.labels)
    return EmbeddingWitness(
        ONE_POINT, d, d.labels, outputs, {"pt": pt, "constant": ONE_POINT_CONSTANT}
    )


def default_names(k: int) -> tuple[str, ...]:
    return tuple(f"f{j}" for j in range(k))


def _names(vectors, names) -> tuple[str, ...]:
    names = default_names(len(vectors)) if names is None else tuple(names)
    if len(names) != len(vectors):
        raise StructuralError("one name per vector is required")
    return names


def discrete_witness(
    vectors: Sequence[BoundedVector],
    plan: TruncationPlan | None = None,
    names: Sequence[str] | None = None,
) -> EmbeddingWitness:
    """Embed a family of vectors with one shared plan (auto-sized if omitted)."""
    vectors = tuple(vectors)
    if not vectors:
        raise ValueError("nothing to embed")
    lengths = {len(v) for v in vectors}
    if len(lengths) != 1:
        raise StructuralError(f"vectors of unequal lengths {sorted(lengths)}")
    if plan is None:
        plan = plan_truncation(lengths.pop(), max(v.bound for v in vectors))
    outputs = tuple(discrete_embed(v, plan) for v in vectors)
    return EmbeddingWitness(DISCRETE, vectors, _names(vectors, names), outputs, {"plan": plan})


def positivity_shift(lower: BoundedVector) -> BoundedVector:
    """``l(s) = |L(s)| + 2^-s``."""
    return BoundedVector(tuple(abs(x) + Fraction(1, 2**s) for s, x in enumerate(lower.values)))


def omega_labels(M: int) -> tuple[str, ...]:
    """Ground set: ``0 .. 2M-1`` (block ``k`` is ``{2k, 2k+1}``) then the limit point."""
    return tuple(str(p) for p in range(2 * M)) + (OMEGA,)


def c0_metric(f: BoundedVector, upper: BoundedVector, M: int) -> MetricMatrix:
    labels = omega_labels(M)
    n = 2 * M
    table = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    for p in range(n):
        k = p // 2
        for q in range(n):
            l = q // 2
            if p == q:
                continue
            table[p][q] = f[k] if k == l else max(upper[k], upper[l])
        table[p][n] = table[n][p] = upper[k]
    return MetricMatrix(labels, tuple(map(tuple, table)), METRIC)


def c0_embed(
    K: Sequence[BoundedVector],
    M: int | None = None,
    names: Sequence[str] | None = None,
    shift: bool = True,
) -> EmbeddingWitness:
    """Embed a finite family into metrics on ``M`` pair blocks plus ``ω``.

    The family is truncated to its first ``M`` coordinates and translated by
    the positivity shift so every coordinate is strictly positive.  Then
    block ``k`` has internal distance ``f(k)``, distinct blocks ``k, l`` sit
    at ``max(U(k), U(l))`` and block ``k`` sits at ``U(k)`` from ``ω``,
    where ``U`` is the pointwise maximum of the shifted family.

    ``shift=False`` skips the translation.  That is only useful for showing
    that the translation is needed: nonpositive coordinates then give
    invalid outputs.
    """
    K = tuple(K)
    if not K:
        raise ValueError("nothing to embed")
    shortest = min(len(f) for f in K)
    M = shortest if M is None else M
    if M < 1:
        raise StructuralError(f"need at least one block, got M={M}")
    if M > shortest:
        raise StructuralError(f"M={M} exceeds the vector length {shortest}")
    cut = tuple(BoundedVector(f.values[:M]) for f in K)
    lower = net_min(cut)
    if shift:
        l = positivity_shift(lower)
        moved = tuple(BoundedVector(tuple(x + y for x, y in zip(f.values, l.values))) for f in cut)
    else:
        l = BoundedVector((Fraction(0),) * M)
        moved = cut
    upper = net_max(moved)
    outputs = tuple(c0_metric(f, upper, M) for f in moved)
    provenance = {"M": M, "shifted": shift, "lower": lower, "shift": l, "upper": upper}
    return EmbeddingWitness(C0, K, _names(K, names), outputs, provenance)


def replay(w: EmbeddingWitness) -> EmbeddingWitness:
    """Rebuild a witness from its source and recorded provenance."""
    prov = w.provenance
    if w.construction == FRECHET:
        return frechet_embed(w.source, prov["order"])
    if w.construction == ONE_POINT:
        return one_point_embed(w.source, prov["pt"])
    if w.construction == DISCRETE:
        return discrete_witness(w.source, prov["plan"], w.points)
    return c0_embed(w.source, prov["M"], w.points, prov["shifted"])
