"""Tau-tilting pairs, mutation, exchange-graph enumeration, G- and C-matrices.

A pair (M, P) couples a module M with a projective P subject to the rigidity
conditions Hom(M, tau M) = 0 and Hom(P, M) = 0.  Pairs with n summands are
the nodes of the exchange graph; mutation exchanges one summand at a time.
Enumeration walks downward (shrinking Fac M) from the pair (A, 0), which
reaches every pair and discovers every edge exactly once from its Fac-larger
endpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import BoundQuiver
from .modules import (
    Representation,
    canonical_sort_key,
    cokernel,
    decompose,
    direct_sum,
    g_vector,
    hom_dim,
    is_isomorphic,
    is_projective_rep,
    minimal_left_approximation,
    projective,
    tau,
    trace,
)


class EnumerationError(RuntimeError):
    """Mutation or enumeration reached a state the theory forbids."""


class TheoremViolationError(RuntimeError):
    """A mechanically checked identity failed; indicates an upstream bug."""


DEFAULT_MAX_NODES = 10000
DEFAULT_MAX_DIM = 30


class TauPair:
    """A basic pair (M, P): indecomposable module summands plus projective
    summands recorded by vertex.  Summands are kept in canonical order:
    modules by descending dimension-vector lex (hash tiebreak), projective
    vertices ascending."""

    __slots__ = ("algebra", "m_parts", "p_parts")

    def __init__(self, algebra: BoundQuiver, m_parts, p_parts):
        self.algebra = algebra
        self.m_parts = tuple(sorted(m_parts, key=canonical_sort_key))
        self.p_parts = tuple(sorted(int(j) for j in p_parts))
        for j in self.p_parts:
            if not 1 <= j <= algebra.n:
                raise ValueError(f"projective vertex {j} out of range")
        if len(set(self.p_parts)) != len(self.p_parts):
            raise ValueError("repeated projective summand")

    @property
    def n_summands(self) -> int:
        return len(self.m_parts) + len(self.p_parts)

    def is_tilting(self) -> bool:
        return self.n_summands == self.algebra.n

    def is_almost_tilting(self) -> bool:
        return self.n_summands == self.algebra.n - 1

    def slots(self) -> list[tuple[str, object]]:
        """Canonical slot list: ('m', rep) entries then ('p', vertex) entries."""
        return ([("m", rep) for rep in self.m_parts]
                + [("p", j) for j in self.p_parts])

    def module(self) -> Representation:
        return direct_sum(self.algebra, list(self.m_parts))

    def descriptor(self) -> str:
        ms = " ".join(rep.dim_label() for rep in self.m_parts) or "0"
        ps = " ".join(f"P{j}" for j in self.p_parts) or "0"
        return f"({ms} | {ps})"

    def key(self) -> tuple:
        return (tuple(sorted(rep._uid for rep in self.m_parts)), self.p_parts)

    def __repr__(self) -> str:
        return f"TauPair{self.descriptor()}"


def is_tau_rigid_pair(m: Representation, p: Representation, seed: int = 0) -> bool:
    """Rigidity test for a (module, projective) pair of representations."""
    if not p.is_zero() and not is_projective_rep(p):
        raise ValueError("second member of the pair is not projective")
    if hom_dim(m, tau(m)) != 0:
        return False
    if hom_dim(p, m) != 0:
        return False
    return True


def pair_is_valid(pair: TauPair, seed: int = 0, require_tilting: bool = False) -> bool:
    """Validity of a TauPair: basic, rigid, and Hom(P, M) = 0."""
    parts = pair.m_parts
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            if is_isomorphic(parts[i], parts[j], seed=seed):
                return False
    for rep in parts:
        for j in pair.p_parts:
            if rep.dims[j - 1] != 0:  # Hom(P(j), X) has dimension dim X_j
                return False
    taus = [tau(rep) for rep in parts]
    for x in parts:
        for t in taus:
            if hom_dim(x, t) != 0:
                return False
    if require_tilting and not pair.is_tilting():
        return False
    return True


def remove_summand(pair: TauPair, r: int) -> TauPair:
    """Drop the summand in canonical slot r (0-based), yielding an almost pair."""
    slots = pair.slots()
    if not 0 <= r < len(slots):
        raise ValueError(f"slot {r} out of range")
    kind, payload = slots[r]
    if kind == "m":
        m_parts = tuple(x for x in pair.m_parts if x is not payload)
        return TauPair(pair.algebra, m_parts, pair.p_parts)
    p_parts = tuple(j for j in pair.p_parts if j != payload)
    return TauPair(pair.algebra, pair.m_parts, p_parts)


# ----------------------------------------------------------------------
# G- and C-matrices
# ----------------------------------------------------------------------

def g_matrix(pair: TauPair) -> np.ndarray:
    """Columns are g-vectors of the module slots and negated g-vectors of the
    projective slots, in canonical slot order.  The determinant is +-1."""
    if not pair.is_tilting():
        raise ValueError("g-matrix is defined for pairs with n summands")
    n = pair.algebra.n
    cols = []
    for kind, payload in pair.slots():
        if kind == "m":
            cols.append(g_vector(payload))
        else:
            cols.append(g_vector(projective(pair.algebra, payload), shifted=True))
    g = linalg.zeros(n, n)
    for c, col in enumerate(cols):
        for r in range(n):
            g[r, c] = col[r]
    d = linalg.det(g)
    if d not in (1, -1):
        raise TheoremViolationError(f"g-matrix determinant is {d}, expected +-1")
    return g


def c_matrix(pair: TauPair) -> np.ndarray:
    """Exact inverse-transpose of the g-matrix; integer entries."""
    g = g_matrix(pair)
    c = linalg.inverse(g).T.copy()
    linalg.as_int_matrix(c)  # integrality assertion
    return c


def sign_coherence(c: np.ndarray) -> list[str]:
    """Classify each column as 'positive' / 'negative'; 'mixed' never occurs
    for a C-matrix and is surfaced for the verification report."""
    out = []
    for j in range(c.shape[1]):
        col = [c[i, j] for i in range(c.shape[0])]
        if all(x >= 0 for x in col):
            out.append("positive")
        elif all(x <= 0 for x in col):
            out.append("negative")
        else:
            out.append("mixed")
    return out


def positive_c_vectors(pair: TauPair) -> list[tuple[int, ...]]:
    c = c_matrix(pair)
    cols = []
    for j in range(c.shape[1]):
        col = tuple(int(c[i, j]) for i in range(c.shape[0]))
        if all(x >= 0 for x in col):
            cols.append(col)
    return cols


# ----------------------------------------------------------------------
# mutation
# ----------------------------------------------------------------------

def slot_mutates_down(pair: TauPair, r: int) -> bool:
    """True when exchanging slot r shrinks Fac M (the pair is the Fac-larger
    completion of the almost pair at r).  Projective slots always go up; a
    module slot goes up exactly when its summand lies in Fac of the rest."""
    kind, payload = pair.slots()[r]
    if kind == "p":
        return False
    rest = [x for x in pair.m_parts if x is not payload]
    rest_sum = direct_sum(pair.algebra, rest)
    t, _ = trace(rest_sum, payload)
    return t.dims != payload.dims


def mutate_down(pair: TauPair, r: int, seed: int = 0,
                max_dim: int | None = None) -> TauPair:
    """The Fac-smaller completion of the almost pair at module slot r.

    Computed from the exchange sequence of the minimal left approximation of
    the removed summand into add of the remaining module part; when the
    cokernel vanishes the summand moves to the shifted-projective side.
    Every candidate is validated before being returned.
    """
    kind, payload = pair.slots()[r]
    if kind != "m":
        raise ValueError("downward mutation starts at a module slot")
    if not slot_mutates_down(pair, r):
        raise ValueError("slot mutates upward; mutate from the other endpoint")
    q = pair.algebra
    rest = [x for x in pair.m_parts if x is not payload]
    approx = minimal_left_approximation(payload, rest, seed=seed)
    coker, _ = cokernel(approx.map)
    if not coker.is_zero():
        if max_dim is not None and coker.total_dim > max_dim:
            raise _DimLimit(coker.total_dim)
        summands = decompose(coker, seed=seed)
        if len(summands) != 1:
            raise EnumerationError(
                f"exchange cokernel splits into {len(summands)} distinct classes")
        new_summand = summands[0][0]
        if not is_isomorphic(new_summand, payload, seed=seed):
            candidate = TauPair(q, tuple(rest) + (new_summand,), pair.p_parts)
            if pair_is_valid(candidate, seed=seed):
                return candidate
    # support shrinks: the slot becomes a shifted projective
    rest_sum = direct_sum(q, rest)
    candidates = []
    for j in range(1, q.n + 1):
        if j in pair.p_parts or rest_sum.dims[j - 1] != 0:
            continue
        candidate = TauPair(q, tuple(rest), pair.p_parts + (j,))
        if pair_is_valid(candidate, seed=seed):
            candidates.append(candidate)
    if len(candidates) != 1:
        raise EnumerationError(
            f"expected exactly one completion, found {len(candidates)} "
            f"for {pair.descriptor()} at slot {r}")
    return candidates[0]


class _DimLimit(Exception):
    def __init__(self, dim: int):
        self.dim = dim


# ----------------------------------------------------------------------
# registry and exchange graph
# ----------------------------------------------------------------------

class ModuleRegistry:
    """Canonical store of indecomposable representations, one per iso class."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.reps: list[Representation] = []
        self._by_dims: dict[tuple, list[int]] = {}

    def find(self, rep: Representation) -> int | None:
        for idx in self._by_dims.get(rep.dims, []):
            if self.reps[idx]._uid == rep._uid:
                return idx
            if is_isomorphic(self.reps[idx], rep, seed=self.seed):
                return idx
        return None

    def add(self, rep: Representation) -> int:
        idx = self.find(rep)
        if idx is not None:
            return idx
        self.reps.append(rep)
        idx = len(self.reps) - 1
        self._by_dims.setdefault(rep.dims, []).append(idx)
        return idx

    def handle(self, rep: Representation) -> Representation:
        return self.reps[self.add(rep)]

    def id_of(self, rep: Representation) -> int:
        return self.add(rep)


@dataclass(frozen=True)
class Edge:
    """Exchange-graph edge oriented from the Fac-larger node."""
    src: int
    dst: int
    slot: int                      # slot index in the source pair
    c_vector: tuple[int, ...]      # positive c-vector of the source at the slot


@dataclass
class ExchangeGraph:
    algebra: BoundQuiver
    nodes: list[TauPair]
    edges: list[Edge]
    complete: bool
    registry: ModuleRegistry
    seed: int = 0
    max_nodes: int = DEFAULT_MAX_NODES
    max_dim: int = DEFAULT_MAX_DIM
    fingerprint: str = ""
    _slates: dict = field(default_factory=dict, repr=False)

    def degree(self, idx: int) -> int:
        return sum(1 for e in self.edges if idx in (e.src, e.dst))

    def node_index(self, pair: TauPair) -> int:
        key = _normalized_key(pair, self.registry)
        for i, node in enumerate(self.nodes):
            if _normalized_key(node, self.registry) == key:
                return i
        raise KeyError(f"pair {pair.descriptor()} is not a node of this graph")


def _normalized_key(pair: TauPair, registry: ModuleRegistry) -> tuple:
    ids = tuple(sorted(registry.id_of(rep) for rep in pair.m_parts))
    return (ids, pair.p_parts)


def enumerate_exchange_graph(q: BoundQuiver,
                             max_nodes: int = DEFAULT_MAX_NODES,
                             max_dim: int = DEFAULT_MAX_DIM,
                             seed: int = 0) -> ExchangeGraph:
    """Breadth-first mutation closure from (A, 0).

    Nodes are deduplicated through a canonical module registry; the complete
    flag is set when the closure terminated inside the limits, in which case
    the graph is n-regular and connected.  Exceeding a limit yields a
    truncated graph (flag unset) rather than an error.
    """
    if max_nodes < 1 or max_dim < 1:
        raise ValueError("limits must be positive")
    cache_key = (max_nodes, max_dim, seed)
    cached = q._graph_cache.get(cache_key)
    if cached is not None:
        return cached
    registry = ModuleRegistry(seed)
    start = TauPair(q, tuple(registry.handle(projective(q, i))
                             for i in range(1, q.n + 1)), ())
    truncated = False
    keys = {_key_with(registry, start): 0}
    nodes = [start]
    raw_edges: list[tuple[int, int, int]] = []
    queue = [0]
    while queue:
        src_idx = queue.pop(0)
        pair = nodes[src_idx]
        for r in range(pair.n_summands):
            if not slot_mutates_down(pair, r):
                continue
            try:
                new_pair = mutate_down(pair, r, seed=seed, max_dim=max_dim)
            except _DimLimit:
                truncated = True
                continue
            new_pair = TauPair(q, tuple(registry.handle(x) for x in new_pair.m_parts),
                               new_pair.p_parts)
            key = _key_with(registry, new_pair)
            if key not in keys:
                if len(nodes) >= max_nodes:
                    truncated = True
                    continue
                keys[key] = len(nodes)
                nodes.append(new_pair)
                queue.append(len(nodes) - 1)
            raw_edges.append((src_idx, keys[key], r))

    order = sorted(range(len(nodes)), key=lambda i: _node_sort_key(q, nodes[i]))
    relabel = {old: new for new, old in enumerate(order)}
    sorted_nodes = [nodes[i] for i in order]
    edges = []
    for src, dst, slot in raw_edges:
        c = c_matrix(nodes[src])
        col = tuple(int(c[i, slot]) for i in range(q.n))
        edges.append(Edge(relabel[src], relabel[dst], slot, col))
    edges.sort(key=lambda e: (e.src, e.slot))
    complete = not truncated
    if complete:
        graph_check = ExchangeGraph(q, sorted_nodes, edges, complete, registry,
                                    seed, max_nodes, max_dim, q.fingerprint())
        for i in range(len(sorted_nodes)):
            if graph_check.degree(i) != q.n:
                raise TheoremViolationError(
                    f"complete graph is not {q.n}-regular at node {i}")
        q._graph_cache[cache_key] = graph_check
        return graph_check
    graph = ExchangeGraph(q, sorted_nodes, edges, complete, registry,
                          seed, max_nodes, max_dim, q.fingerprint())
    q._graph_cache[cache_key] = graph
    return graph


def _key_with(registry: ModuleRegistry, pair: TauPair) -> tuple:
    return (tuple(sorted(registry.id_of(x) for x in pair.m_parts)), pair.p_parts)


def _node_sort_key(q: BoundQuiver, pair: TauPair):
    g = g_matrix(pair)
    flat = tuple(int(g[i, j]) for i in range(q.n) for j in range(q.n))
    return (len(pair.p_parts), flat)


def complete_almost_pair(almost: TauPair,
                         graph: ExchangeGraph | None = None,
                         seed: int = 0) -> tuple[TauPair, TauPair]:
    """The two tau-tilting completions of an almost pair, Fac-larger first.

    Looked up in the (memoised) exchange graph of the algebra; a truncated
    graph that does not exhibit both completions raises EnumerationError.
    """
    if not almost.is_almost_tilting():
        raise ValueError("input must have exactly n - 1 summands")
    q = almost.algebra
    if graph is None:
        graph = enumerate_exchange_graph(q, seed=seed)
    registry = graph.registry
    almost_ids = sorted(registry.id_of(x) for x in almost.m_parts)
    matches = []
    for idx, node in enumerate(graph.nodes):
        node_ids = sorted(registry.id_of(x) for x in node.m_parts)
        if _is_submultiset(almost_ids, node_ids) and \
                set(almost.p_parts) <= set(node.p_parts):
            matches.append(idx)
    if len(matches) != 2:
        detail = "truncated graph" if not graph.complete else "internal error"
        raise EnumerationError(
            f"found {len(matches)} completions of {almost.descriptor()} ({detail}; "
            f"limits max_nodes={graph.max_nodes}, max_dim={graph.max_dim})")
    a, b = matches
    for e in graph.edges:
        if (e.src, e.dst) == (a, b):
            return graph.nodes[a], graph.nodes[b]
        if (e.src, e.dst) == (b, a):
            return graph.nodes[b], graph.nodes[a]
    raise EnumerationError("completions are not adjacent; inconsistent graph")


def _is_submultiset(small: list[int], big: list[int]) -> bool:
    big = list(big)
    for x in small:
        if x in big:
            big.remove(x)
        else:
            return False
    return True


def pair_to_json_dict(pair: TauPair) -> dict:
    g = g_matrix(pair)
    c = c_matrix(pair)
    return {
        "m_parts": [{"dim_vector": list(rep.dims)} for rep in pair.m_parts],
        "p_parts": list(pair.p_parts),
        "g_matrix": linalg.as_int_matrix(g),
        "c_matrix": linalg.as_int_matrix(c),
    }
