"""Castling transformations on tuples of positive integers.

Everything here works on canonical tuples: sorted ascending with every entry
equal to 1 removed.  The equation being solved is

    alpha*(l - alpha) + sum(k_i**2) - j + 1 - l*prod(k_i) == 0

where j is the canonical length.  Appending a 1 adds 1 to both the square sum
and to j, so the residual does not see the difference.

Python ints are used throughout; entries grow doubly exponentially along the
tree (depth 4 already reaches six digits).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple, Union

from .errors import InvalidParams, InvariantViolation, NonPositiveResult

APPEND = "append"

Tuple_ = Tuple[int, ...]


@dataclass(frozen=True)
class CastlingParams:
    l: int
    alpha: int

    def __post_init__(self):
        if not isinstance(self.l, int) or not isinstance(self.alpha, int):
            raise InvalidParams("l and alpha must be integers")
        if self.l < 3:
            raise InvalidParams(f"l must be >= 3, got {self.l}")
        if not 1 <= self.alpha <= self.l - self.alpha:
            raise InvalidParams(
                f"alpha must satisfy 1 <= alpha <= l - alpha, got alpha={self.alpha}, l={self.l}"
            )

    @property
    def beta(self) -> int:
        return self.l - self.alpha

    @property
    def root(self) -> Tuple_:
        """() for alpha = 1, since (1) is identified with the empty tuple."""
        return () if self.alpha == 1 else (self.alpha,)


def canonicalize(raw: Iterable[int]) -> Tuple_:
    entries = []
    for k in raw:
        if isinstance(k, bool) or not isinstance(k, int):
            raise TypeError(f"entries must be integers, got {k!r}")
        if k <= 0:
            raise ValueError(f"entries must be positive, got {k}")
        if k != 1:
            entries.append(k)
    return tuple(sorted(entries))


def is_canonical(t: Sequence[int]) -> bool:
    return all(k >= 2 for k in t) and all(a <= b for a, b in zip(t, t[1:]))


def _check_canonical(t):
    t = tuple(t)
    if not is_canonical(t):
        raise ValueError(f"tuple {t} is not canonical (sorted, entries >= 2)")
    return t


def residual(params: CastlingParams, t: Sequence[int]) -> int:
    t = _check_canonical(t)
    a = params.alpha
    return a * (params.l - a) + sum(k * k for k in t) - len(t) + 1 - params.l * math.prod(t)


def is_solution(params: CastlingParams, t: Sequence[int]) -> bool:
    return residual(params, t) == 0


def max_entry(t: Sequence[int]) -> int:
    """Largest entry, with the empty tuple counting as (1)."""
    return t[-1] if t else 1


@dataclass(frozen=True)
class CastlingMove:
    """One castling step.

    ``position`` indexes the canonical entries of ``before``; ``APPEND`` means
    castling at the virtual trailing 1.
    """

    position: Union[int, str]
    before: Tuple_
    after: Tuple_
    new_value: int
    replaced: int = field(default=1)

    @property
    def is_append(self) -> bool:
        return self.position == APPEND

    @property
    def self_loop(self) -> bool:
        return self.after == self.before

    @property
    def kind(self) -> str:
        return APPEND if self.is_append else f"at-position({self.position})"


def castle(params: CastlingParams, t: Sequence[int], position: Union[int, str]) -> CastlingMove:
    """Replace entry ``position`` (or a virtual 1 for ``APPEND``) by l*prod(others) - entry."""
    t = _check_canonical(t)
    if position == APPEND:
        others, replaced = t, 1
    else:
        if isinstance(position, bool) or not isinstance(position, int) or not 0 <= position < len(t):
            raise IndexError(f"position {position!r} out of range for {t}")
        others = t[:position] + t[position + 1:]
        replaced = t[position]
    new_value = params.l * math.prod(others) - replaced
    if new_value <= 0:
        raise NonPositiveResult(new_value, position)
    after = canonicalize(others + (new_value,))
    return CastlingMove(position, t, after, new_value, replaced)


def inverse(params: CastlingParams, move: CastlingMove) -> CastlingMove:
    """The move on ``move.after`` that restores ``move.before``."""
    if move.new_value == 1:
        return castle(params, move.after, APPEND)
    # any copy of new_value works; take the last for determinism
    pos = len(move.after) - 1 - move.after[::-1].index(move.new_value)
    return castle(params, move.after, pos)


def neighbors(params: CastlingParams, t: Sequence[int]) -> list:
    """All non-self-loop moves from ``t``: by position, then append.

    Equal entries give identical results and are reported once.  Moves that
    would produce a non-positive entry are skipped.
    """
    t = _check_canonical(t)
    seen = set()
    out = []
    for pos in list(range(len(t))) + [APPEND]:
        if pos != APPEND and pos > 0 and t[pos] == t[pos - 1]:
            continue
        try:
            move = castle(params, t, pos)
        except NonPositiveResult:
            continue
        if move.self_loop or move.after in seen:
            continue
        seen.add(move.after)
        out.append(move)
    return out


# --- descent -----------------------------------------------------------------

REACHED_ROOT = "ReachedRoot"
NOT_SOLUTION = "NotSolution"
NOT_REACHABLE = "NotReachable"


@dataclass(frozen=True)
class ReductionTrace:
    start: Tuple_
    moves: Tuple[CastlingMove, ...]
    outcome: str
    reason: Optional[str] = None

    @property
    def reached_root(self) -> bool:
        return self.outcome == REACHED_ROOT

    @property
    def tuples(self) -> list:
        return [self.start] + [m.after for m in self.moves]

    @property
    def end(self) -> Tuple_:
        return self.moves[-1].after if self.moves else self.start


def reduce_to_root(params: CastlingParams, t: Sequence[int]) -> ReductionTrace:
    """Walk a solution down to the root by always castling at the largest entry.

    Each step must strictly lower the maximum entry; otherwise the walk is
    reported as stuck instead of looping.
    """
    start = _check_canonical(t)
    if residual(params, start) != 0:
        return ReductionTrace(start, (), NOT_SOLUTION)
    low = [k for k in start if k < params.alpha]
    if low:
        return ReductionTrace(start, (), NOT_REACHABLE, f"entry below alpha: {low[0]} < {params.alpha}")

    root = params.root
    cur = start
    moves = []
    while cur != root:
        if not cur:
            return ReductionTrace(start, tuple(moves), NOT_REACHABLE, "descent stuck: empty tuple is not the root")
        # largest entry; ties resolved at the last index
        pos = len(cur) - 1
        try:
            move = castle(params, cur, pos)
        except NonPositiveResult as exc:
            return ReductionTrace(start, tuple(moves), NOT_REACHABLE,
                                  f"descent stuck at {cur}: castle gives {exc.value}")
        if max_entry(move.after) >= max_entry(cur):
            return ReductionTrace(start, tuple(moves), NOT_REACHABLE,
                                  f"descent stuck at {cur}: maximum does not decrease")
        if residual(params, move.after) != 0:
            raise InvariantViolation(f"residual drift: {cur} -> {move.after}")
        moves.append(move)
        cur = move.after
        low = [k for k in cur if k < params.alpha]
        if low:
            return ReductionTrace(start, tuple(moves), NOT_REACHABLE,
                                  f"entry below alpha after step {len(moves)}: {low[0]} < {params.alpha}")
    return ReductionTrace(start, tuple(moves), REACHED_ROOT)
