"""Exhaustive bounded search for solutions of the castling equation.

Candidates are canonical tuples k_1 <= ... <= k_j.  With everything but the
last entry x fixed, the residual is the monic quadratic

    x**2 - l*P*x + c,    P = prod(k_1..k_{j-1}),  c = A + sum(k_i**2) - j + 1

so x is found exactly from the discriminant instead of scanned.  The
second-to-last entry y is bounded through the root pair x_+ + x_- = l*Q*y,
x_+ * x_- = c (Q = product of the entries before y): a solution either has
x = x_+ >= l*Q*y/2, forcing l*Q*y <= 2*B, or x = x_- >= y, forcing
(l*Q - 2*(j-1)) * y**2 <= 2*A.  Both tests are monotone in y and Q, so loops
break at the first failure.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .core import CastlingParams, reduce_to_root, residual
from .errors import BudgetExceeded, RequiresExhaustive

IN_CUBE = "in_cube"
REACHABLE = "reachable"
ANOMALOUS = "anomalous"

DEFAULT_BUDGET = 50_000_000


@dataclass(frozen=True)
class SearchBox:
    params: CastlingParams
    j_max: int
    entry_min: int = 1
    entry_max: int = 1

    def __post_init__(self):
        if self.j_max < 1:
            raise ValueError("j_max must be >= 1")
        if self.entry_min < 1:
            raise ValueError("entry_min must be >= 1")

    @classmethod
    def cube(cls, params: CastlingParams, j_max: int) -> "SearchBox":
        return cls(params, j_max, 1, params.alpha - 1)

    @property
    def empty(self) -> bool:
        return self.entry_min > self.entry_max

    def contains(self, t) -> bool:
        if len(t) > self.j_max:
            return False
        if self.entry_min <= 1 <= self.entry_max:
            return all(k <= self.entry_max for k in t)
        return len(t) >= 1 and all(self.entry_min <= k <= self.entry_max for k in t)


@dataclass
class SearchReport:
    box: SearchBox
    solutions: list = field(default_factory=list)  # (tuple, tag)
    exhausted: bool = True

    def tuples(self, tag: Optional[str] = None) -> list:
        return [t for t, g in self.solutions if tag is None or g == tag]

    def to_dict(self) -> dict:
        b = self.box
        return {
            "box": {
                "l": b.params.l,
                "alpha": b.params.alpha,
                "j_max": b.j_max,
                "entry_min": b.entry_min,
                "entry_max": _enc(b.entry_max),
            },
            "solutions": [{"tuple": [_enc(k) for k in t], "tag": g} for t, g in self.solutions],
            "exhausted": self.exhausted,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _enc(v):
    return str(v) if abs(v) > 2**53 - 1 else v


def tag_solution(params: CastlingParams, t) -> str:
    # ReachedRoot wins over the vacuous cube membership of () when alpha = 1
    if reduce_to_root(params, t).reached_root:
        return REACHABLE
    if all(k <= params.alpha - 1 for k in t):
        return IN_CUBE
    return ANOMALOUS


def _last_entry_roots(l, prod, const):
    """Positive integer roots of x**2 - l*prod*x + const."""
    b = l * prod
    disc = b * b - 4 * const
    if disc < 0:
        return ()
    s = math.isqrt(disc)
    if s * s != disc or (b + s) % 2:
        return ()
    return tuple(sorted({(b - s) // 2, (b + s) // 2}))


class _Counter:
    def __init__(self, budget):
        self.budget = budget
        self.n = 0

    def tick(self):
        self.n += 1
        if self.n > self.budget:
            raise BudgetExceeded(f"search budget {self.budget} exceeded")


def _solutions_of_length(params, j, lo, hi, counter):
    """Sorted tuples of length j >= 1, entries in [lo, hi] with lo >= 2."""
    l = params.l
    A = params.alpha * (l - params.alpha)

    def finish(prefix, prod, sq):
        counter.tick()
        floor = prefix[-1] if prefix else lo
        for x in _last_entry_roots(l, prod, A + sq - j + 1):
            if floor <= x <= hi:
                yield prefix + (x,)

    if j == 1:
        yield from finish((), 1, 0)
        return

    def viable(q, y):
        return l * q * y <= 2 * hi or (l * q - 2 * (j - 1)) * y * y <= 2 * A

    def middle(prefix, prod, sq):
        i = len(prefix)
        start = prefix[-1] if prefix else lo
        if i == j - 2:
            for y in itertools.count(start):
                if y > hi or not viable(prod, y):
                    break
                yield from finish(prefix + (y,), prod * y, sq + y * y)
            return
        for k in itertools.count(start):
            # cheapest completion: remaining middle entries and y all equal k
            if k > hi or not viable(prod * k ** (j - 2 - i), k):
                break
            counter.tick()
            yield from middle(prefix + (k,), prod * k, sq + k * k)

    yield from middle((), 1, 0)


def search(box: SearchBox, budget: int = DEFAULT_BUDGET) -> SearchReport:
    """All canonical solutions inside ``box``, tagged.

    Raises BudgetExceeded with the partial (non-exhausted) report attached
    when more than ``budget`` candidate prefixes are visited.
    """
    params = box.params
    report = SearchReport(box)
    if box.empty:
        return report
    counter = _Counter(budget)
    found = []
    try:
        if box.entry_min <= 1 and residual(params, ()) == 0:
            found.append(())
        lo = max(box.entry_min, 2)
        if lo <= box.entry_max:
            for j in range(1, box.j_max + 1):
                found.extend(_solutions_of_length(params, j, lo, box.entry_max, counter))
    except BudgetExceeded as exc:
        report.exhausted = False
        report.solutions = [(t, tag_solution(params, t)) for t in sorted(found, key=_order)]
        exc.partial = report
        raise
    report.solutions = [(t, tag_solution(params, t)) for t in sorted(found, key=_order)]
    return report


def _order(t):
    return (len(t), t)


def naive_search(box: SearchBox) -> list:
    """Unpruned scan of every sorted tuple in the box; for cross-checking only."""
    params = box.params
    out = []
    if box.empty:
        return out
    if box.entry_min <= 1 and residual(params, ()) == 0:
        out.append(())
    lo = max(box.entry_min, 2)
    values = range(lo, box.entry_max + 1)
    for j in range(1, box.j_max + 1):
        for t in itertools.combinations_with_replacement(values, j):
            if residual(params, t) == 0:
                out.append(t)
    return sorted(out, key=_order)


@dataclass(frozen=True)
class PartitionResult:
    holds: bool
    witnesses: Tuple[tuple, ...]


def classify_partition(report: SearchReport) -> PartitionResult:
    """Whether every solution in the report is in the cube or reachable."""
    if not report.exhausted:
        raise RequiresExhaustive("partition check needs an exhausted report")
    witnesses = tuple(report.tuples(ANOMALOUS))
    return PartitionResult(not witnesses, witnesses)
