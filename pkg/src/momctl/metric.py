"""Finite metric and pseudometric matrices over exact rationals.

Distances are :class:`fractions.Fraction` values; nothing in this module
ever touches a float.  A :class:`MetricMatrix` is only checked for *shape*
on construction (square, labels unique, rational entries).  Whether it
actually satisfies the metric axioms is answered by :func:`validate`, so
that a candidate table can be built, inspected and reported on.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

Rat = Fraction

METRIC = "metric"
PSEUDOMETRIC = "pseudometric"
KINDS = (METRIC, PSEUDOMETRIC)


class StructuralError(ValueError):
    """Input is malformed: not square, duplicate labels, mismatched ground sets..."""


class BandViolationError(ValueError):
    """A band map has an off-diagonal value outside ``[L, 2L]``."""


def as_rat(value) -> Fraction:
    """Coerce ``value`` to an exact rational.

    Accepts ints, Fractions and strings such as ``"3/2"`` or ``"-1"``.
    Floats and bools are rejected, since silently accepting them would
    defeat the point of exact arithmetic.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise StructuralError(f"refusing inexact value {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise StructuralError(f"rational must be written as p or p/q, got {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise StructuralError(f"cannot parse rational {value!r}") from exc
    raise StructuralError(f"cannot interpret {value!r} as a rational")


@dataclass(frozen=True)
class MetricMatrix:
    labels: tuple[str, ...]
    entries: tuple[tuple[Fraction, ...], ...]
    kind: str = METRIC

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        if not labels:
            raise StructuralError("a matrix needs at least one label")
        if len(set(labels)) != len(labels):
            raise StructuralError(f"duplicate labels in {labels}")
        if self.kind not in KINDS:
            raise StructuralError(f"kind must be one of {KINDS}, got {self.kind!r}")
        n = len(labels)
        rows = tuple(tuple(as_rat(v) for v in row) for row in self.entries)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise StructuralError(f"entries must be a {n}x{n} table")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "entries", rows)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise StructuralError(f"unknown label {label!r}") from None

    def __call__(self, x: str, y: str) -> Fraction:
        return self.entries[self.index(x)][self.index(y)]

    def with_kind(self, kind: str) -> MetricMatrix:
        return MetricMatrix(self.labels, self.entries, kind)

    @classmethod
    def from_pairs(
        cls,
        labels: Sequence[str],
        distances: Mapping[tuple[str, str], object],
        kind: str = METRIC,
    ) -> MetricMatrix:
        """Build a symmetric matrix from ``{(x, y): value}``; missing pairs are 0."""
        labels = tuple(labels)
        pos = {x: i for i, x in enumerate(labels)}
        table = [[Fraction(0)] * len(labels) for _ in labels]
        for (x, y), value in distances.items():
            if x not in pos or y not in pos:
                raise StructuralError(f"unknown label in pair {(x, y)!r}")
            table[pos[x]][pos[y]] = table[pos[y]][pos[x]] = as_rat(value)
        return cls(labels, tuple(map(tuple, table)), kind)

    @classmethod
    def zero(cls, labels: Sequence[str]) -> MetricMatrix:
        n = len(labels)
        return cls(tuple(labels), tuple((Fraction(0),) * n for _ in range(n)), PSEUDOMETRIC)


@dataclass(frozen=True)
class Violation:
    axiom: str
    where: tuple[str, ...]
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(m: MetricMatrix, kind: str | None = None) -> ValidationReport:
    """Check every metric axiom instance of ``m``.

    ``kind`` defaults to ``m.kind``; in pseudometric mode the positivity
    check (``d(x, y) > 0`` for ``x != y``) is skipped.  Triangle violations
    are reported for every ordered triple ``(x, y, z)`` with
    ``d(x, y) > d(x, z) + d(z, y)``.
    """
    kind = m.kind if kind is None else kind
    if kind not in KINDS:
        raise StructuralError(f"kind must be one of {KINDS}, got {kind!r}")
    d, lab, n = m.entries, m.labels, m.n
    out: list[Violation] = []
    zero = Fraction(0)
    for i in range(n):
        if d[i][i] != 0:
            out.append(Violation("diagonal", (lab[i],), d[i][i], zero))
    for i, j in combinations(range(n), 2):
        if d[i][j] != d[j][i]:
            out.append(Violation("symmetry", (lab[i], lab[j]), d[i][j], d[j][i]))
        for a, b in ((i, j), (j, i)):
            if d[a][b] < 0:
                out.append(Violation("nonnegativity", (lab[a], lab[b]), d[a][b], zero))
        if kind == METRIC and d[i][j] == 0:
            out.append(Violation("positivity", (lab[i], lab[j]), d[i][j], zero))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                rhs = d[i][k] + d[k][j]
                if d[i][j] > rhs:
                    out.append(Violation("triangle", (lab[i], lab[j], lab[k]), d[i][j], rhs))
    return ValidationReport(tuple(out))


def _same_ground(d: MetricMatrix, e: MetricMatrix) -> None:
    if d.labels != e.labels:
        raise StructuralError(f"ground sets differ: {d.labels} vs {e.labels}")


def sup_distance_with_pair(
    d: MetricMatrix, e: MetricMatrix
) -> tuple[Fraction, tuple[str, str] | None]:
    """Sup-metric between ``d`` and ``e`` plus the first maximizing pair.

    Pairs are scanned in positional order ``(0,1), (0,2), ..., (1,2), ...``;
    on ties the earliest pair wins.  A one-point space has no pair.
    """
    _same_ground(d, e)
    best, where = Fraction(0), None
    for i, j in combinations(range(d.n), 2):
        gap = abs(d.entries[i][j] - e.entries[i][j])
        if where is None or gap > best:
            best, where = gap, (d.labels[i], d.labels[j])
    return best, where


def sup_distance(d: MetricMatrix, e: MetricMatrix) -> Fraction:
    return sup_distance_with_pair(d, e)[0]


def add(p: MetricMatrix, e: MetricMatrix) -> MetricMatrix:
    """Entrywise sum of a pseudometric and a metric, which is a metric."""
    _same_ground(p, e)
    rows = tuple(
        tuple(x + y for x, y in zip(prow, erow)) for prow, erow in zip(p.entries, e.entries)
    )
    return MetricMatrix(p.labels, rows, METRIC)


def pullback(f: Mapping[str, str], d: MetricMatrix, domain: Sequence[str] | None = None) -> MetricMatrix:
    """The pseudometric ``(x, y) -> d(f(x), f(y))`` on the domain of ``f``.

    ``domain`` fixes the label order of the result; it defaults to the
    iteration order of ``f``.
    """
    domain = tuple(f) if domain is None else tuple(domain)
    missing = [x for x in domain if x not in f]
    if missing:
        raise StructuralError(f"map is undefined on {missing}")
    idx = [d.index(f[x]) for x in domain]
    rows = tuple(tuple(d.entries[a][b] for b in idx) for a in idx)
    return MetricMatrix(domain, rows, PSEUDOMETRIC)


def restrict(d: MetricMatrix, subset: Iterable[str]) -> MetricMatrix:
    """Submatrix on ``subset``, keeping the original label order."""
    wanted = set(subset)
    if not wanted:
        raise StructuralError("cannot restrict to an empty subset")
    unknown = wanted.difference(d.labels)
    if unknown:
        raise StructuralError(f"unknown labels {sorted(unknown)}")
    idx = [i for i, x in enumerate(d.labels) if x in wanted]
    rows = tuple(tuple(d.entries[a][b] for b in idx) for a in idx)
    return MetricMatrix(tuple(d.labels[i] for i in idx), rows, d.kind)


def band_metric(labels: Sequence[str], w: Sequence[Sequence[object]], L) -> MetricMatrix:
    """Accept a symmetric table whose off-diagonal values lie in ``[L, 2L]``.

    Such a table is automatically a metric: ``w(x, y) <= 2L = L + L <=
    w(x, z) + w(z, y)``.  Any value outside the band is refused with
    :class:`BandViolationError` rather than producing a possibly invalid
    matrix.
    """
    L = as_rat(L)
    if L <= 0:
        raise BandViolationError(f"band level must be positive, got {L}")
    m = MetricMatrix(tuple(labels), tuple(tuple(row) for row in w), METRIC)
    d = m.entries
    for i in range(m.n):
        if d[i][i] != 0:
            raise StructuralError(f"nonzero diagonal at {m.labels[i]!r}")
        for j in range(i + 1, m.n):
            if d[i][j] != d[j][i]:
                raise StructuralError(f"asymmetric entry at {(m.labels[i], m.labels[j])}")
            if not L <= d[i][j] <= 2 * L:
                raise BandViolationError(
                    f"w{(m.labels[i], m.labels[j])} = {d[i][j]} outside [{L}, {2 * L}]"
                )
    return m


def diameter(d: MetricMatrix) -> Fraction:
    return max(max(row) for row in d.entries)
