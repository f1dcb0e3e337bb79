"""Breadth-first enumeration of the castling solution tree, with quotient labels
and DOT / JSON / CSV export."""

from __future__ import annotations

import csv
import io
import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

from .core import (
    APPEND,
    CastlingMove,
    CastlingParams,
    castle,
    max_entry,
    neighbors,
    residual,
)
from .errors import BudgetExceeded, InvariantViolation

DEFAULT_NODE_BUDGET = 1_000_000
_JSON_SAFE = 2**53 - 1

PROJECTIVE = "projective"
GRASSMANNIAN = "grassmannian"


@dataclass(frozen=True)
class EnumerationConfig:
    params: CastlingParams
    max_depth: int
    max_entry: int
    include_quotients: bool = True

    def __post_init__(self):
        if self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        if self.max_entry < 1:
            raise ValueError("max_entry must be >= 1")


@dataclass(frozen=True)
class GeometryLabel:
    """Quotient by PL(k_s): removed entry, what remains, and the induced type."""

    removed: int
    remaining: Tuple[int, ...]
    kind: str
    beta: Optional[int] = None
    alpha: Optional[int] = None

    @property
    def text(self) -> str:
        if self.kind == PROJECTIVE:
            return PROJECTIVE
        return f"GL({self.beta})⊗GL({self.alpha})"


def annotate_quotients(params: CastlingParams, t: Sequence[int]) -> list:
    t = tuple(t)
    labels = []
    for s, k in enumerate(t):
        if s > 0 and t[s - 1] == k:
            continue
        remaining = t[:s] + t[s + 1:]
        partner = params.l * math.prod(remaining) - k
        if partner == 1:
            labels.append(GeometryLabel(k, remaining, PROJECTIVE))
        else:
            labels.append(GeometryLabel(k, remaining, GRASSMANNIAN, beta=partner, alpha=k))
    return labels


@dataclass(frozen=True)
class TreeNode:
    tuple: Tuple[int, ...]
    depth: int
    parent_move: Optional[CastlingMove]
    quotients: Tuple[GeometryLabel, ...] = ()

    @property
    def parent(self) -> Optional[Tuple[int, ...]]:
        return None if self.parent_move is None else self.parent_move.before

    @property
    def structure_group(self) -> Tuple[int, ...]:
        return self.tuple

    @property
    def fiber_dimension(self) -> int:
        return sum(k * k - 1 for k in self.tuple)


def _sort_key(node_or_tuple):
    t = getattr(node_or_tuple, "tuple", node_or_tuple)
    return t


@dataclass
class CastlingTree:
    config: EnumerationConfig
    nodes: dict = field(default_factory=dict)

    @property
    def params(self) -> CastlingParams:
        return self.config.params

    def ordered(self) -> list:
        """Nodes by depth, then lexicographically on entries."""
        return sorted(self.nodes.values(), key=lambda n: (n.depth, n.tuple))

    @property
    def edges(self) -> list:
        return [n.parent_move for n in self.ordered() if n.parent_move is not None]

    def __contains__(self, t) -> bool:
        return tuple(t) in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CastlingTree):
            return NotImplemented
        return self.config == other.config and self.nodes == other.nodes


def enumerate_tree(config: EnumerationConfig, node_budget: int = DEFAULT_NODE_BUDGET) -> CastlingTree:
    params = config.params
    root = params.root
    tree = CastlingTree(config)

    def make(t, depth, move):
        quotients = tuple(annotate_quotients(params, t)) if config.include_quotients else ()
        return TreeNode(t, depth, move, quotients)

    if max_entry(root) > config.max_entry:
        return tree
    tree.nodes[root] = make(root, 0, None)
    frontier = deque([root])
    while frontier:
        t = frontier.popleft()
        depth = tree.nodes[t].depth
        if depth >= config.max_depth:
            continue
        top = max_entry(t)
        for move in neighbors(params, t):
            child = move.after
            if not child or child[-1] <= top or child[-1] > config.max_entry:
                continue
            if child in tree.nodes:
                continue
            if residual(params, child) != 0:
                raise InvariantViolation(f"castling {t} produced non-solution {child}")
            tree.nodes[child] = make(child, depth + 1, move)
            if len(tree.nodes) > node_budget:
                raise BudgetExceeded(f"node budget {node_budget} exceeded", partial=tree)
            frontier.append(child)
    return tree


# --- export ------------------------------------------------------------------

def tuple_label(t: Sequence[int]) -> str:
    return "x".join(str(k) for k in t) if t else "1"


def _enc(v):
    if v is None:
        return None
    return str(v) if abs(v) > _JSON_SAFE else v


def _dec(v):
    if v is None:
        return None
    return int(v)


def to_dict(tree: CastlingTree) -> dict:
    cfg = tree.config
    nodes = []
    for n in tree.ordered():
        nodes.append({
            "tuple": [_enc(k) for k in n.tuple],
            "depth": n.depth,
            "fiber_dim": _enc(n.fiber_dimension),
            "parent": None if n.parent is None else [_enc(k) for k in n.parent],
            "quotients": [
                {
                    "removed": _enc(q.removed),
                    "remaining": [_enc(k) for k in q.remaining],
                    "kind": q.kind,
                    "beta": _enc(q.beta),
                    "alpha": _enc(q.alpha),
                }
                for q in n.quotients
            ],
        })
    return {
        "params": {"l": cfg.params.l, "alpha": cfg.params.alpha},
        "bounds": {
            "max_depth": cfg.max_depth,
            "max_entry": _enc(cfg.max_entry),
            "include_quotients": cfg.include_quotients,
        },
        "nodes": nodes,
    }


def from_dict(data: dict) -> CastlingTree:
    params = CastlingParams(int(data["params"]["l"]), int(data["params"]["alpha"]))
    bounds = data.get("bounds", {})
    config = EnumerationConfig(
        params,
        int(bounds.get("max_depth", 0)),
        _dec(bounds.get("max_entry", 1)),
        bool(bounds.get("include_quotients", True)),
    )
    tree = CastlingTree(config)
    for raw in data["nodes"]:
        t = tuple(_dec(k) for k in raw["tuple"])
        move = None
        if raw["parent"] is not None:
            parent = tuple(_dec(k) for k in raw["parent"])
            move = _recover_move(params, parent, t)
        quotients = tuple(
            GeometryLabel(
                _dec(q["removed"]),
                tuple(_dec(k) for k in q["remaining"]),
                q["kind"],
                _dec(q["beta"]),
                _dec(q["alpha"]),
            )
            for q in raw["quotients"]
        )
        tree.nodes[t] = TreeNode(t, int(raw["depth"]), move, quotients)
    return tree


def _recover_move(params, parent, child):
    for pos in list(range(len(parent))) + [APPEND]:
        move = castle(params, parent, pos)
        if move.after == child:
            return move
    raise ValueError(f"{child} is not a castling transform of {parent}")


def to_json(tree: CastlingTree) -> str:
    return json.dumps(to_dict(tree), indent=2, ensure_ascii=False) + "\n"


def from_json(text: str) -> CastlingTree:
    return from_dict(json.loads(text))


def to_dot(tree: CastlingTree) -> str:
    p = tree.params
    lines = [
        "digraph castling {",
        f'  label="castling tree l={p.l} alpha={p.alpha}";',
        "  node [shape=underline, fontcolor=black];",
    ]
    for n in tree.ordered():
        name = tuple_label(n.tuple)
        lines.append(f'  "{name}" [label="{name}", color=red];')
    for n in tree.ordered():
        if n.parent is not None:
            lines.append(f'  "{tuple_label(n.parent)}" -> "{tuple_label(n.tuple)}" [style=solid];')
    for n in tree.ordered():
        for q in n.quotients:
            if q.kind == PROJECTIVE:
                # the projective quotient is itself a red solution node
                lines.append(
                    f'  "{tuple_label(n.tuple)}" -> "{tuple_label(q.remaining)}" [style=dashed, color=red];'
                )
            else:
                qname = f"{tuple_label(q.remaining)} [{q.text}]"
                lines.append(f'  "{qname}" [label="{qname}", color=blue];')
                lines.append(f'  "{tuple_label(n.tuple)}" -> "{qname}" [style=dashed, color=blue];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_csv(tree: CastlingTree) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["depth", "tuple", "fiber_dim", "quotients"])
    for n in tree.ordered():
        quot = ";".join(f"{q.removed}:{tuple_label(q.remaining)}:{q.text}" for q in n.quotients)
        w.writerow([n.depth, tuple_label(n.tuple), n.fiber_dimension, quot])
    return buf.getvalue()


def export(tree: CastlingTree, fmt: str) -> bytes:
    writers = {"dot": to_dot, "json": to_json, "csv": to_csv}
    try:
        return writers[fmt](tree).encode("utf-8")
    except KeyError:
        raise ValueError(f"unknown export format {fmt!r}") from None
