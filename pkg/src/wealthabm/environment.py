"""
Spatial and network environments
================================

Lattice boundary rules (toroidal, bounded, infinite) and three random graph
generators: Erdos-Renyi G(n, p), Watts-Strogatz small world and
Barabasi-Albert style preferential attachment. Every generator takes an
explicit ``numpy.random.Generator`` and is deterministic given its state.

A :class:`NetworkGraph` can be handed to the engine to restrict money
exchange to graph neighbours.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .errors import ConfigError

TOPOLOGIES = ("toroidal", "bounded", "infinite")
GRAPH_KINDS = ("random", "small-world", "scale-free")


@dataclass(frozen=True)
class LatticeSpec:
    width: Optional[int] = None
    height: Optional[int] = None
    topology: str = "toroidal"

    def __post_init__(self):
        if self.topology not in TOPOLOGIES:
            raise ConfigError(f"unknown lattice topology {self.topology!r}")
        if self.topology != "infinite":
            if self.width is None or self.height is None:
                raise ConfigError(f"{self.topology} lattice needs width and height")
            if self.width < 1 or self.height < 1:
                raise ConfigError("lattice width and height must be >= 1")


def wrap_coordinate(pos, delta, spec: LatticeSpec):
    """Move ``pos`` by ``delta`` under the lattice's boundary rule.

    Returns the new ``(x, y)`` or ``None`` when a bounded lattice blocks the
    move.
    """
    x = pos[0] + delta[0]
    y = pos[1] + delta[1]
    if spec.topology == "toroidal":
        return (x % spec.width, y % spec.height)
    if spec.topology == "bounded":
        if 0 <= x < spec.width and 0 <= y < spec.height:
            return (x, y)
        return None
    return (x, y)


@dataclass(frozen=True)
class NetworkGraph:
    """Undirected simple graph on nodes ``0..n-1``.

    ``edges`` holds each edge once as ``(u, v)`` with ``u < v``.
    """

    n: int
    edges: frozenset
    meta: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, meta=None) -> "NetworkGraph":
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ConfigError(f"self-loop on node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ConfigError(f"edge ({u}, {v}) outside node range 0..{n - 1}")
            norm.add((u, v) if u < v else (v, u))
        return cls(n=n, edges=frozenset(norm), meta=dict(meta or {}))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        if self.edges:
            arr = np.array(sorted(self.edges), dtype=np.int64)
            np.add.at(deg, arr[:, 0], 1)
            np.add.at(deg, arr[:, 1], 1)
        return deg

    def adjacency(self) -> list:
        """Sorted neighbour lists indexed by node id."""
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for nbrs in adj:
            nbrs.sort()
        return adj

    def csr(self):
        """Return ``(indptr, indices)`` with sorted neighbours per node."""
        adj = self.adjacency()
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(a) for a in adj])
        indices = np.fromiter(
            (v for a in adj for v in a), dtype=np.int64, count=int(indptr[-1])
        )
        return indptr, indices

    def to_adjacency_text(self) -> str:
        lines = []
        for node, nbrs in enumerate(self.adjacency()):
            lines.append(f"{node}: {' '.join(str(v) for v in nbrs)}\n")
        return "".join(lines)


def gen_random_graph(n: int, p: float, rng: np.random.Generator) -> NetworkGraph:
    """Erdos-Renyi G(n, p): every pair is an edge independently with prob. p."""
    if n < 1:
        raise ConfigError("random graph needs n >= 1")
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"edge probability must lie in [0, 1], got {p}")
    edges = []
    # Row by row over the upper triangle keeps memory at O(n).
    for u in range(n - 1):
        draws = rng.random(n - u - 1)
        for v in np.flatnonzero(draws < p):
            edges.append((u, u + 1 + int(v)))
    return NetworkGraph.from_edges(n, edges, {"kind": "random", "n": n, "p": p})


def gen_small_world(
    n: int, k: int, beta: float, rng: np.random.Generator
) -> NetworkGraph:
    """Watts-Strogatz small world graph.

    Starts from a ring where each node links to its ``k/2`` nearest
    neighbours on either side, then visits the ring edges lap by lap and, with
    probability ``beta``, moves the far endpoint of each to a uniformly drawn
    node that is neither the near endpoint nor already adjacent to it. An edge
    with no admissible new endpoint is left in place, so the edge count is
    always ``n * k / 2``.
    """
    if k < 2 or k % 2:
        raise ConfigError(f"small-world k must be an even count >= 2, got {k}")
    if n <= k:
        raise ConfigError(f"small-world needs n > k, got n={n}, k={k}")
    if not 0.0 <= beta <= 1.0:
        raise ConfigError(f"rewiring probability must lie in [0, 1], got {beta}")

    adj = [set() for _ in range(n)]
    for u in range(n):
        for j in range(1, k // 2 + 1):
            v = (u + j) % n
            adj[u].add(v)
            adj[v].add(u)

    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            if v not in adj[u] or rng.random() >= beta:
                continue
            if len(adj[u]) >= n - 1:
                continue
            while True:
                w = int(rng.integers(n))
                if w != u and w not in adj[u]:
                    break
            adj[u].remove(v)
            adj[v].remove(u)
            adj[u].add(w)
            adj[w].add(u)

    edges = [(u, v) for u in range(n) for v in adj[u] if u < v]
    return NetworkGraph.from_edges(
        n, edges, {"kind": "small-world", "n": n, "k": k, "beta": beta}
    )


def gen_scale_free(
    n: int, m0: int, m: int, rng: np.random.Generator
) -> NetworkGraph:
    """Preferential attachment growth from an ``m0``-clique.

    Each arriving node links to ``m`` distinct existing nodes drawn with
    probability proportional to degree. Degree weighting uses a list holding
    both endpoints of every edge, so a uniform draw from it is an exact
    degree-proportional draw.
    """
    if not (n >= m0 >= m >= 1):
        raise ConfigError(f"scale-free needs n >= m0 >= m >= 1, got n={n}, m0={m0}, m={m}")
    if n > m0 and m0 < 2:
        raise ConfigError("scale-free seed clique must have at least 2 nodes to grow from")

    edges = [(u, v) for u in range(m0) for v in range(u + 1, m0)]
    endpoints = [x for e in edges for x in e]
    for new in range(m0, n):
        targets = []
        chosen = set()
        while len(targets) < m:
            t = endpoints[int(rng.integers(len(endpoints)))]
            if t not in chosen:
                chosen.add(t)
                targets.append(t)
        for t in targets:
            edges.append((t, new))
            endpoints.extend((t, new))
    return NetworkGraph.from_edges(
        n, edges, {"kind": "scale-free", "n": n, "m0": m0, "m": m}
    )


@dataclass(frozen=True)
class GraphSpec:
    """Recipe for building an exchange network over the agent population."""

    kind: str
    p: Optional[float] = None
    k: Optional[int] = None
    beta: Optional[float] = None
    m0: Optional[int] = None
    m: Optional[int] = None

    _required = {
        "random": ("p",),
        "small-world": ("k", "beta"),
        "scale-free": ("m0", "m"),
    }

    def __post_init__(self):
        if self.kind not in GRAPH_KINDS:
            raise ConfigError(
                f"unknown graph kind {self.kind!r}; expected one of {', '.join(GRAPH_KINDS)}"
            )
        for name in self._required[self.kind]:
            if getattr(self, name) is None:
                raise ConfigError(f"{self.kind} graph requires parameter '{name}'")
        for name in ("p", "k", "beta", "m0", "m"):
            if name not in self._required[self.kind] and getattr(self, name) is not None:
                raise ConfigError(f"parameter '{name}' does not apply to a {self.kind} graph")

    def params(self) -> dict:
        return {name: getattr(self, name) for name in self._required[self.kind]}

    def check(self, n: int) -> None:
        """Raise :class:`ConfigError` if these parameters cannot build a graph on ``n`` nodes."""
        if self.kind == "random":
            if not 0.0 <= self.p <= 1.0:
                raise ConfigError(f"edge probability must lie in [0, 1], got {self.p}")
        elif self.kind == "small-world":
            if self.k < 2 or self.k % 2 or n <= self.k:
                raise ConfigError(
                    f"small-world needs an even k >= 2 with n > k, got n={n}, k={self.k}"
                )
            if not 0.0 <= self.beta <= 1.0:
                raise ConfigError(f"rewiring probability must lie in [0, 1], got {self.beta}")
        elif not (n >= self.m0 >= self.m >= 1) or (n > self.m0 and self.m0 < 2):
            raise ConfigError(
                f"scale-free needs n >= m0 >= m >= 1 and m0 >= 2, got n={n}, "
                f"m0={self.m0}, m={self.m}"
            )

    def build(self, n: int, rng: np.random.Generator) -> NetworkGraph:
        if self.kind == "random":
            return gen_random_graph(n, self.p, rng)
        if self.kind == "small-world":
            return gen_small_world(n, self.k, self.beta, rng)
        return gen_scale_free(n, self.m0, self.m, rng)
