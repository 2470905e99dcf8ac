"""Constructive kernels for finite metric spaces over exact rationals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import structures as st
from .errors import InternalCheckError, ParameterError
from .morphisms import MorphismKind, check
from .structures import MAX_VERTICES, LinearOrder, MetricSpace


def _omega_nonexpansive(q, M):
    # d_omega(i, j) = max(i, j) = j for i < j
    for j in range(len(q)):
        for i in range(j):
            if M.d[q[i]][q[j]] > j:
                return (i, j)
    return None


def universal_projection(M: MetricSpace):
    """A non-expansive surjection from an initial segment of omega onto M.

    Points of M are taken in label order x_0, x_1, ...  Stage k+1 jumps past
    every distance seen so far, including those to the incoming point, so
    the least admissible anchor is ``floor(l_{k+1}) + 1``.  Positions
    strictly between two anchors repeat the earlier point.  Returns ``(N, q)``
    where ``q`` has length N = last anchor + 1.
    """
    n = M.n
    anchors = [0]
    for k in range(1, n):
        ell = max([Fraction(anchors[-1])] + [M.d[i][j] for j in range(k + 1) for i in range(j)])
        anchors.append(math.floor(ell) + 1)
    q = []
    for k in range(n):
        stop = anchors[k + 1] if k + 1 < n else anchors[k] + 1
        q.extend([k] * (stop - anchors[k]))
    q = tuple(q)
    N = len(q)
    if N <= MAX_VERTICES:
        res = check(q, st.omega_truncation(N), M, MorphismKind.NONEXPANSIVE_SURJECTION)
        if not res:
            raise InternalCheckError(f"projection is not a non-expansive surjection: {res}")
    elif set(q) != set(range(n)) or _omega_nonexpansive(q, M) is not None:
        raise InternalCheckError("projection is not a non-expansive surjection")
    return N, q


def split_by_threshold(U: MetricSpace, ell):
    """All maps U -> E_{2,ell}, block 0 holding point 0, that do not expand distances.

    Equivalently: bipartitions whose cross-block distances are all >= ell.
    Maps are returned in lexicographic order.
    """
    ell = st.parse_fraction(ell) if not isinstance(ell, Fraction) else ell
    if ell <= 0:
        raise ParameterError("threshold must be positive")
    n = U.n
    if n < 2:
        return []
    target = st.equilateral(2, ell)
    out = []
    for mask in range(1, 1 << (n - 1)):
        f = (0,) + tuple((mask >> (n - 1 - i)) & 1 for i in range(1, n))
        ones = [i for i in range(n) if f[i]]
        zeros = [i for i in range(n) if not f[i]]
        if all(U.d[a][b] >= ell for a in zeros for b in ones):
            if not check(f, U, target, MorphismKind.NONEXPANSIVE_SURJECTION):
                raise InternalCheckError(f"split {f} fails the non-expansive check")
            out.append(f)
    return sorted(out)


@dataclass(frozen=True)
class SelfSimilarResult:
    sequence: tuple
    values: tuple
    processed: int
    complete: bool
    steps: tuple

    @property
    def image_size(self):
        return (max(self.values) + 1) if self.values else 0

    @property
    def mapping(self):
        return {x: self.values[i] for i, x in enumerate(self.sequence[: self.processed])}

    def to_json(self):
        return {
            "sequence": list(self.sequence),
            "r": [[x, r] for x, r in sorted(self.mapping.items())],
            "processed": self.processed,
            "complete": self.complete,
            "image_size": self.image_size,
            "steps": list(self.steps),
        }


def self_similar_rigid(order):
    """Run the plateau construction on a finite prefix x_0, x_1, ... of an ordering of omega.

    Stage k covers positions up to the one holding the least value not yet
    seen, and every position in that stretch gets r = k.  The loop stops
    when that value does not occur in the prefix; ``complete`` is false if
    positions remain unassigned.  ``order`` is a LinearOrder or a sequence
    of distinct naturals.
    """
    seq = tuple(order.perm) if isinstance(order, LinearOrder) else tuple(int(x) for x in order)
    if len(set(seq)) != len(seq) or any(x < 0 for x in seq):
        raise ParameterError("prefix must list distinct naturals")
    where = {x: i for i, x in enumerate(seq)}
    seen = set()
    values = []
    steps = []
    last = -1
    k = 0
    while last + 1 < len(seq):
        least = 0
        while least in seen:
            least += 1
        pos = where.get(least)
        if pos is None:
            break
        if pos < k:
            raise InternalCheckError(f"anchor position {pos} below stage {k}")
        for i in range(last + 1, pos + 1):
            values.append(k)
            seen.add(seq[i])
        steps.append(pos)
        last = pos
        k += 1
    result = SelfSimilarResult(seq, tuple(values), len(values), len(values) == len(seq), tuple(steps))
    _validate_selfsim(result)
    return result


def _validate_selfsim(res: SelfSimilarResult):
    m = res.processed
    if m == 0:
        return
    xs = res.sequence[:m]
    K = res.image_size
    dom = MetricSpace(
        m, tuple(tuple(Fraction(0) if i == j else Fraction(max(xs[i], xs[j])) for j in range(m)) for i in range(m))
    )
    cod = st.omega_truncation(K)
    out = check(
        res.values, dom, cod, MorphismKind.NONEXPANSIVE_RIGID_SURJECTION, LinearOrder.identity(m), LinearOrder.identity(K)
    )
    if not out:
        raise InternalCheckError(f"self-similar map fails its postcondition: {out}")
