"""Decoding graphs from mechanism enumeration, MWPM, and erasure peeling.

Each candidate error mechanism is pushed through the frame simulator as a
deterministic one-shot injection; its detector signature, split by stabilizer
type, becomes an edge in the X-error or Z-error matching graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .circuits import Circuit, DetectorMap
from .errors import Hyperedge, Unmatchable, UnmatchableErasure
from .sim import ShotBatch, cx_gates, inject_mechanisms

_TIE_EPS = 1e-9


@dataclass
class EdgeVariant:
    u: int  # local node index
    v: int  # local node index or -1 for the boundary
    q: float  # total mechanism probability after parallel merging
    obs: int  # observable bitmask
    mechs: int  # merged mechanism count
    gates: frozenset  # contributing CX gate ids (empty for measurement noise)

    @property
    def weight(self) -> float:
        return math.log((1.0 - self.q) / self.q)


class DecodingGraph:
    """Matching graph over one basis' detectors, plus a virtual boundary."""

    def __init__(self, det_ids: list[int], variants: list[EdgeVariant]):
        self.det_ids = det_ids
        self.n_nodes = len(det_ids)
        self.variants = variants
        self.gate_to_variants: dict[int, list[int]] = {}
        for i, var in enumerate(variants):
            for g in var.gates:
                self.gate_to_variants.setdefault(g, []).append(i)
        self.has_boundary = any(v.v == -1 for v in variants)

    @cached_property
    def _pair_best(self) -> dict[tuple[int, int], tuple[float, int]]:
        """Lowest-weight variant per node pair (boundary = node n_nodes)."""
        best: dict[tuple[int, int], tuple[float, int]] = {}
        for var in self.variants:
            v = self.n_nodes if var.v == -1 else var.v
            key = (min(var.u, v), max(var.u, v))
            if key not in best or var.weight < best[key][0]:
                best[key] = (var.weight, var.obs)
        return best

    @cached_property
    def _apsp(self):
        n = self.n_nodes + 1  # boundary always allocated, possibly isolated
        rows, cols, data = [], [], []
        for (u, v), (w, _) in self._pair_best.items():
            rows += [u, v]
            cols += [v, u]
            data += [w, w]
        mat = csr_matrix((data, (rows, cols)), shape=(n, n))
        dist, pred = dijkstra(mat, directed=False, return_predecessors=True)
        return dist, pred

    def distance_between(self, u: int, v: int) -> float:
        return self._apsp[0][u, v]

    def path_obs(self, u: int, v: int) -> int:
        """XOR of observable masks along the minimum-weight u-v path."""
        _, pred = self._apsp
        obs = 0
        cur = v
        while cur != u:
            prv = pred[u, cur]
            if prv < 0:
                raise Unmatchable(f"no path between nodes {u} and {v}")
            key = (min(prv, cur), max(prv, cur))
            obs ^= self._pair_best[key][1]
            cur = prv
        return obs

    def dump(self) -> str:
        lines = []
        for var in sorted(
            self.variants, key=lambda e: (e.u, e.v if e.v >= 0 else 10**9)
        ):
            lines.append(
                f"{var.u} {var.v} {var.weight:.6f} {var.obs} {var.mechs}"
            )
        return "\n".join(lines) + "\n"


def _merge_probability(q1: float, q2: float) -> float:
    return q1 * (1.0 - q2) + q2 * (1.0 - q1)


def build_decoding_graphs(
    circuit: Circuit,
    dmap: DetectorMap,
    kind: str,
    p: float,
) -> dict[str, DecodingGraph]:
    """Graphs keyed by detector type ("v", "f") for a circuit noise model.

    kind "pauli": 15 depolarizing terms per CX at p/15 plus measurement
    flips at p.  kind "erasure": 15 Pauli terms per CX, each at p/16 given
    the gate's erasure; weights are irrelevant downstream (the aware decoder
    matches at weight zero inside the erased subgraph).
    """
    if kind not in ("pauli", "erasure"):
        raise ValueError(f"unknown circuit noise kind {kind!r}")
    gates = cx_gates(circuit)
    injections = []
    sources = []  # (probability, gate id or None)
    for gid, li, c, t in gates:
        for pauli in range(1, 16):
            injections.append(("gate", li, c, t, pauli))
            sources.append((p / 15.0 if kind == "pauli" else p / 16.0, gid))
    if kind == "pauli":
        base = 0
        for layer in circuit.layers:
            if layer.kind == "measure":
                if layer.noisy:
                    for j in range(len(layer.ops)):
                        injections.append(("meas", base + j))
                        sources.append((p, None))
                base += len(layer.ops)

    det_flips, obs_flips = inject_mechanisms(circuit, dmap, injections)

    types = dmap.detector_type
    mem_type = types[0]
    local: dict[str, dict[int, int]] = {"v": {}, "f": {}}
    det_ids: dict[str, list[int]] = {"v": [], "f": []}
    for d, t in enumerate(types):
        local[t][d] = len(det_ids[t])
        det_ids[t].append(d)

    merged: dict[str, dict[tuple, list]] = {"v": {}, "f": {}}
    for i, (q, gid) in enumerate(sources):
        flipped = np.flatnonzero(det_flips[i])
        obs_mask = 0
        for o in np.flatnonzero(obs_flips[i]):
            obs_mask |= 1 << int(o)
        if flipped.size == 0:
            if obs_mask:
                raise Hyperedge(
                    f"mechanism {injections[i]} flips observables invisibly"
                )
            continue
        for t in ("v", "f"):
            part = [int(d) for d in flipped if types[d] == t]
            if not part:
                continue
            if len(part) > 2:
                raise Hyperedge(
                    f"mechanism {injections[i]} flips {len(part)} "
                    f"type-{t} detectors: {part}"
                )
            mask = obs_mask if t == mem_type else 0
            nodes = tuple(sorted(local[t][d] for d in part))
            key = (nodes, mask)
            slot = merged[t].setdefault(key, [0.0, 0, set()])
            slot[0] = _merge_probability(slot[0], q)
            slot[1] += 1
            if gid is not None:
                slot[2].add(gid)

    graphs = {}
    for t in ("v", "f"):
        variants = []
        for (nodes, mask), (q, count, gids) in sorted(merged[t].items()):
            u = nodes[0]
            v = nodes[1] if len(nodes) == 2 else -1
            if 0.0 < q < 0.5:
                variants.append(
                    EdgeVariant(u, v, q, mask, count, frozenset(gids))
                )
        graphs[t] = DecodingGraph(det_ids[t], variants)
    return graphs


def build_phenomenological_graphs(code, T: int, p: float):
    """Analytic space/time matching graphs matching the phenom sampler layout.

    Node (r, s) = detector r * n_checks + s, r in 0..T; data errors in round
    r give space edges between the qubit's two checks at round r; syndrome
    flips give time edges (r, s)-(r+1, s).
    """
    graphs = {}
    for t, h, logi in (
        ("v", code.h_z, code.logical_z),
        ("f", code.h_x, code.logical_x),
    ):
        n_checks = h.rows
        cols: list[list[int]] = [[] for _ in range(code.n)]
        for s, supp in enumerate(h.row_support):
            for e in supp:
                cols[e].append(s)
        obs_of = [0] * code.n
        for o, supp in enumerate(logi.row_support):
            for e in supp:
                obs_of[e] |= 1 << o
        merged: dict[tuple, list] = {}
        for r in range(T):
            for e in range(code.n):
                if len(cols[e]) != 2:
                    raise Hyperedge(
                        f"qubit {e} lies in {len(cols[e])} checks"
                    )
                s1, s2 = cols[e]
                nodes = (r * n_checks + s1, r * n_checks + s2)
                key = (tuple(sorted(nodes)), obs_of[e])
                slot = merged.setdefault(key, [0.0, 0])
                slot[0] = _merge_probability(slot[0], p)
                slot[1] += 1
            for s in range(n_checks):
                key = ((r * n_checks + s, (r + 1) * n_checks + s), 0)
                slot = merged.setdefault(key, [0.0, 0])
                slot[0] = _merge_probability(slot[0], p)
                slot[1] += 1
        variants = [
            EdgeVariant(nodes[0], nodes[1], q, mask, count, frozenset())
            for (nodes, mask), (q, count) in sorted(merged.items())
            if 0.0 < q < 0.5
        ]
        det_ids = list(range((T + 1) * n_checks))
        graphs[t] = DecodingGraph(det_ids, variants)
    return graphs


def mwpm(graph: DecodingGraph, defects: list[int]):
    """Minimum-weight pairing of defect nodes along graph paths.

    Returns (pairs, total_weight); each pair is (u, v) or (u, None) for a
    boundary match.  Tie-breaking is deterministic via an index-scaled
    epsilon added to candidate weights.
    """
    defects = sorted(defects)
    if not defects:
        return [], 0.0
    if len(defects) % 2 and not graph.has_boundary:
        raise Unmatchable(f"odd defect count {len(defects)} and no boundary")
    dist, _ = graph._apsp
    bnode = graph.n_nodes
    g = nx.Graph()
    for i, u in enumerate(defects):
        for j in range(i + 1, len(defects)):
            w = dist[u, defects[j]]
            if np.isfinite(w):
                g.add_edge(
                    ("d", i), ("d", j), weight=w + _TIE_EPS * (i * 997 + j)
                )
        if graph.has_boundary:
            w = dist[u, bnode]
            if np.isfinite(w):
                g.add_edge(("d", i), ("b", i), weight=w + _TIE_EPS * i)
    if graph.has_boundary:
        for i in range(len(defects)):
            for j in range(i + 1, len(defects)):
                g.add_edge(("b", i), ("b", j), weight=0.0)
    matching = nx.min_weight_matching(g)
    covered = {n[1] for pair in matching for n in pair if n[0] == "d"}
    if len(matching) * 2 < len(g.nodes) or len(covered) < len(defects):
        raise Unmatchable("no perfect matching over the defect set")
    pairs = []
    total = 0.0
    for a, b in matching:
        if a[0] == "b" and b[0] == "b":
            continue
        if a[0] == "b":
            a, b = b, a
        u = defects[a[1]]
        if b[0] == "b":
            pairs.append((u, None))
            total += dist[u, bnode]
        else:
            v = defects[b[1]]
            pairs.append((min(u, v), max(u, v)))
            total += dist[u, v]
    return sorted(pairs, key=lambda pr: (pr[0], -1 if pr[1] is None else pr[1])), total


def _predict_obs(graph: DecodingGraph, pairs) -> int:
    obs = 0
    for u, v in pairs:
        obs ^= graph.path_obs(u, graph.n_nodes if v is None else v)
    return obs


def decode_batch(
    graphs: dict[str, DecodingGraph],
    batch: ShotBatch,
    mem_type: str,
    k: int,
):
    """Per-shot decode of the memory-basis graph.

    Returns (fail_any: (shots,) uint8, fail_per: (shots, k) uint8).  Only the
    memory-type graph can flip recorded observables, so the opposite graph is
    not decoded here.
    """
    graph = graphs[mem_type]
    ids = np.array(graph.det_ids, dtype=np.intp)
    fail_any = np.zeros(batch.shots, dtype=np.uint8)
    fail_per = np.zeros((batch.shots, k), dtype=np.uint8)
    for s in range(batch.shots):
        defects = np.flatnonzero(batch.detector_bits[s, ids]).tolist()
        pairs, _ = mwpm(graph, defects)
        predicted = _predict_obs(graph, pairs)
        actual = 0
        for o in np.flatnonzero(batch.observable_bits[s]):
            actual |= 1 << int(o)
        diff = predicted ^ actual
        if diff:
            fail_any[s] = 1
            for o in range(k):
                if diff >> o & 1:
                    fail_per[s, o] = 1
    return fail_any, fail_per


def decode_erasure_shot(
    graphs: dict[str, DecodingGraph],
    detector_bits: np.ndarray,
    erased_gates: np.ndarray,
    mem_type: str,
) -> int:
    """Weight-zero matching restricted to the erased subgraph (both bases).

    Returns the predicted observable bitmask of the memory-type graph;
    raises UnmatchableErasure if any defect cannot be paired inside the
    erased subgraph, which a pure erasure model can never cause.
    """
    predicted = 0
    erased = set(int(g) for g in erased_gates)
    for t, graph in graphs.items():
        allowed = set()
        for g in erased:
            allowed.update(graph.gate_to_variants.get(g, ()))
        adj: dict[int, list[tuple[int, int]]] = {}
        for vi in allowed:
            var = graph.variants[vi]
            v = graph.n_nodes if var.v == -1 else var.v
            adj.setdefault(var.u, []).append((v, var.obs))
            adj.setdefault(v, []).append((var.u, var.obs))
        ids = np.array(graph.det_ids, dtype=np.intp)
        defect = set(np.flatnonzero(detector_bits[ids]).tolist())
        if not defect:
            continue
        obs = _peel(adj, defect, graph.n_nodes)
        if t == mem_type:
            predicted ^= obs
    return predicted


def _peel(adj, defects, boundary_node) -> int:
    """Spanning-forest peeling: pair defects inside the erased subgraph."""
    seen = set()
    obs_total = 0
    for d in sorted(defects):
        if d in seen:
            continue
        if d not in adj:
            raise UnmatchableErasure(f"defect {d} outside erased subgraph")

        def bfs_tree(root):
            parent: dict[int, tuple[int, int] | None] = {root: None}
            order = [root]
            head = 0
            while head < len(order):
                x = order[head]
                head += 1
                for y, obs in adj.get(x, ()):
                    if y not in parent:
                        parent[y] = (x, obs)
                        order.append(y)
            return parent, order

        parent, order = bfs_tree(d)
        if boundary_node in parent:
            # root at the boundary so leftover parity is absorbed there
            parent, order = bfs_tree(boundary_node)
        seen.update(parent)
        parity: dict[int, int] = {
            x: 1 if (x in defects and x != boundary_node) else 0
            for x in order
        }
        root = order[0]
        for x in reversed(order[1:]):  # leaves towards the root
            if parity[x]:
                px, obs = parent[x]
                obs_total ^= obs
                parity[px] ^= 1
        if parity[root] and root != boundary_node:
            raise UnmatchableErasure(
                "odd defect parity in a boundaryless erased component"
            )
    return obs_total
