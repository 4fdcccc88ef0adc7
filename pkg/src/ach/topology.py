"""Interaction graphs: periodic square lattices and random regular networks.

Graphs are immutable and regular (every node has the same degree), stored as
an (n, degree) int32 adjacency array so the simulation kernel can index
neighbors without indirection.  Row i lists the neighbors of node i in a
stable, construction-defined order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _cc

LATTICE = "lattice"
RANDOM_REGULAR = "random-regular"


@dataclass(frozen=True)
class Graph:
    n: int
    adjacency: np.ndarray
    kind: str
    params: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return int(self.adjacency.shape[1]) if self.adjacency.ndim == 2 else 0


def square_lattice(l: int) -> Graph:
    """L x L periodic square lattice; node r*L + c, neighbor order U, D, L, R.

    L >= 3 is required: at L = 2 the periodic wrap makes the two vertical
    (and horizontal) neighbors coincide, violating simplicity.
    """
    if l < 3:
        raise ValueError(f"lattice size must be >= 3, got {l}")
    n = l * l
    r, c = np.divmod(np.arange(n, dtype=np.int32), l)
    adj = np.empty((n, 4), dtype=np.int32)
    adj[:, 0] = (r - 1) % l * l + c
    adj[:, 1] = (r + 1) % l * l + c
    adj[:, 2] = r * l + (c - 1) % l
    adj[:, 3] = r * l + (c + 1) % l
    return Graph(n, adj, LATTICE, {"L": l})


def _has_legal_pair(stub_nodes, edges) -> bool:
    nodes = sorted(set(stub_nodes))
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            if (a, b) not in edges:
                return True
    return False


def _pair_stubs(n: int, c: int, rng: np.random.Generator):
    """One pairing attempt; edge list in acceptance order, None on dead end."""
    stubs = np.repeat(np.arange(n, dtype=np.int32), c)
    edges = set()
    edge_list = []
    while stubs.size:
        rng.shuffle(stubs)
        deferred = []
        for i in range(0, stubs.size, 2):
            a, b = int(stubs[i]), int(stubs[i + 1])
            if a > b:
                a, b = b, a
            if a == b or (a, b) in edges:
                deferred.append(a)
                deferred.append(b)
            else:
                edges.add((a, b))
                edge_list.append((a, b))
        if deferred and not _has_legal_pair(deferred, edges):
            return None
        stubs = np.asarray(deferred, dtype=np.int32)
    return edge_list


def random_regular_graph(n: int, c: int, rng: np.random.Generator,
                         max_restarts: int = 10_000) -> Graph:
    """Uniform-ish random simple c-regular graph on n nodes.

    Configuration model: every node contributes c stubs and shuffled stubs
    are paired off pass by pass.  A pair that would create a self-loop or a
    repeated edge is never patched up: both stubs go back to the pot and wait
    for the next shuffled pass.  When the leftover stubs admit no legal pair
    at all, the whole partial matching is discarded and pairing restarts from
    scratch (restart, never edge-swap repair, which would bias the sample).
    Dead ends are rare at the sizes of interest, so the restart limit is
    effectively unreachable; hitting it is reported as a distinct failure.
    The graph as a whole is not required to be connected; callers that care
    should inspect component_labels().
    """
    if not 1 <= c < n:
        raise ValueError(f"need 1 <= C < N, got C={c}, N={n}")
    if (n * c) % 2:
        raise ValueError(f"N*C must be even to pair stubs, got N={n}, C={c}")
    for _ in range(max_restarts):
        edge_list = _pair_stubs(n, c, rng)
        if edge_list is None:
            continue
        adj = np.empty((n, c), dtype=np.int32)
        fill = np.zeros(n, dtype=np.int32)
        for a, b in edge_list:
            adj[a, fill[a]] = b
            fill[a] += 1
            adj[b, fill[b]] = a
            fill[b] += 1
        return Graph(n, adj, RANDOM_REGULAR, {"N": n, "C": c})
    raise RuntimeError(
        f"configuration-model pairing hit the restart limit "
        f"({max_restarts} dead ends) for N={n}, C={c}")


def neighbors(g: Graph, i: int) -> np.ndarray:
    if not 0 <= i < g.n:
        raise IndexError(f"node {i} out of range for n={g.n}")
    return g.adjacency[i]


def reverse_index(g: Graph) -> np.ndarray:
    """rev[i, b] = position of i in the adjacency row of its b-th neighbor.

    Lets the kernel update the neighbor's copy of a per-edge quantity in O(1).
    """
    adj = g.adjacency
    n, deg = adj.shape
    rev = np.empty_like(adj)
    for i in range(n):
        for b in range(deg):
            rev[i, b] = int(np.nonzero(adj[adj[i, b]] == i)[0][0])
    return rev


def component_labels(g: Graph) -> np.ndarray:
    """Connected-component label per node (lattices are a single component)."""
    if g.n == 1 or g.degree == 0:
        return np.zeros(g.n, dtype=np.int32)
    rows = np.repeat(np.arange(g.n), g.degree)
    cols = g.adjacency.ravel()
    m = sp.csr_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)),
                      shape=(g.n, g.n))
    _, labels = _cc(m, directed=False)
    return labels.astype(np.int32)


def graph_to_json(g: Graph) -> dict:
    return {"kind": g.kind, "params": dict(g.params),
            "adjacency": g.adjacency.tolist()}


def graph_from_json(doc: dict) -> Graph:
    adj = np.array(doc["adjacency"], dtype=np.int32)
    return Graph(adj.shape[0], adj, doc["kind"], dict(doc.get("params", {})))
