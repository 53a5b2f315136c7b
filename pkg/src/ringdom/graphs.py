"""Labelled graphs, rings, and radius-limited views.

A network is an undirected connected graph whose nodes carry distinct
positive integer labels drawn from {1..L}.  A :class:`View` is everything a
node can legally learn after ``r`` synchronous communication rounds: the
subgraph induced by the nodes within distance ``r``, minus any edge joining
two nodes at distance exactly ``r``, plus the true degrees of the
distance-``r`` nodes.

Views are stored in a canonical label-level form, so two views compare equal
exactly when they are isomorphic as rooted labelled structures.  Every
indistinguishability check in this package reduces to that equality.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence


class GraphError(ValueError):
    """Invalid graph construction or query."""


class GraphFormatError(GraphError):
    """Malformed graph file; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ViewContainmentError(GraphError):
    """A nested ball was requested that is not fully contained in its host view.

    This always indicates a correctness bug in the caller (a simulation trying
    to read information a node cannot have), so it is raised loudly instead of
    being truncated.
    """


@dataclass(frozen=True)
class View:
    """Canonical encoding of a radius-``radius`` ball rooted at ``root``.

    All fields speak labels, never node identifiers, so views taken in
    different graphs compare equal whenever the rooted labelled balls are
    isomorphic.  ``layers[d]`` lists the labels at distance exactly ``d`` from
    the root in ascending order; ``edges`` holds every ball edge as an
    ascending label pair, sorted; ``frontier_degrees`` records the full host
    degree of each distance-``radius`` node.

    ``arc_hint`` is a non-canonical cache (the label sequence along a ring
    ball) used to speed up decisions; it never takes part in equality.
    """

    root: int
    radius: int
    layers: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]
    frontier_degrees: tuple[tuple[int, int], ...]
    arc_hint: tuple[int, ...] | None = field(default=None, compare=False, repr=False)

    def labels(self) -> frozenset[int]:
        return frozenset(lab for layer in self.layers for lab in layer)

    def node_count(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def frontier_map(self) -> dict[int, int]:
        return dict(self.frontier_degrees)

    def canonical_key(self) -> tuple:
        return (self.root, self.radius, self.layers, self.edges, self.frontier_degrees)


def view_distance_map(view: View) -> dict[int, int]:
    """Label -> distance-from-root, read off the canonical layers."""
    return {lab: d for d, layer in enumerate(view.layers) for lab in layer}


def view_adjacency(view: View) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {lab: [] for layer in view.layers for lab in layer}
    for a, b in view.edges:
        adj[a].append(b)
        adj[b].append(a)
    return adj


def arc_sequence(view: View) -> tuple[tuple[int, ...], int, bool]:
    """Lay the view out as a path or cycle of labels.

    Returns ``(sequence, root_position, circular)``.  Raises GraphError when
    the view is not a simple path or cycle (some node has 3+ ball edges).
    """
    if view.arc_hint is not None:
        seq = view.arc_hint
        circular = len(view.edges) == len(seq) and len(seq) >= 3
        return seq, seq.index(view.root), circular
    adj = view_adjacency(view)
    if len(adj) == 1:
        return (view.root,), 0, False
    if any(len(nbrs) > 2 for nbrs in adj.values()):
        raise GraphError("view is not ring-shaped (a node has more than two ball edges)")
    ends = sorted(lab for lab, nbrs in adj.items() if len(nbrs) <= 1)
    if ends:
        start, circular = ends[0], False
    else:
        start, circular = min(adj), True
    seq = [start]
    prev = None
    while True:
        nxt = [w for w in adj[seq[-1]] if w != prev]
        if not nxt:
            break
        nxt.sort()
        prev = seq[-1]
        seq.append(nxt[0])
        if circular and seq[-1] == start:
            seq.pop()
            break
        if len(seq) > len(adj):
            raise GraphError("view is not ring-shaped (walk did not terminate)")
    if len(seq) != len(adj):
        raise GraphError("view is not ring-shaped (disconnected or branching)")
    return tuple(seq), seq.index(view.root), circular


class LabeledGraph:
    """Immutable undirected connected graph with distinct labels in {1..L}."""

    __slots__ = ("nodes", "edges", "label", "L", "_adj", "_node_of", "_arc", "_arc_pos")

    def __init__(
        self,
        nodes: Iterable[int],
        edges: Iterable[tuple[int, int]],
        label: Mapping[int, int],
        L: int,
    ):
        node_set = frozenset(nodes)
        if not node_set:
            raise GraphError("graph needs at least one node")
        edge_set = set()
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            if u not in node_set or v not in node_set:
                raise GraphError(f"edge ({u}, {v}) references an unknown node")
            edge_set.add((u, v) if u < v else (v, u))
        labels = dict(label)
        if set(labels) != set(node_set):
            raise GraphError("label mapping must cover exactly the node set")
        seen: dict[int, int] = {}
        for v, lab in labels.items():
            if not isinstance(lab, int) or lab < 1:
                raise GraphError(f"label of node {v} must be a positive integer, got {lab!r}")
            if lab > L:
                raise GraphError(f"label {lab} exceeds the label bound L={L}")
            if lab in seen:
                raise GraphError(f"duplicate label {lab} on nodes {seen[lab]} and {v}")
            seen[lab] = v
        self.nodes = node_set
        self.edges = frozenset(edge_set)
        self.label = labels
        self.L = int(L)
        adj: dict[int, list[int]] = {v: [] for v in node_set}
        for u, v in edge_set:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = {v: tuple(sorted(ws)) for v, ws in adj.items()}
        self._node_of = seen
        self._arc: tuple[int, ...] | None | bool = False  # False = not computed yet
        self._arc_pos: dict[int, int] | None = None
        self._check_connected()

    def _check_connected(self) -> None:
        start = next(iter(self.nodes))
        seen = {start}
        queue = deque([start])
        while queue:
            for w in self._adj[queue.popleft()]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        if len(seen) != len(self.nodes):
            raise GraphError("graph must be connected")

    @property
    def n(self) -> int:
        return len(self.nodes)

    def neighbours(self, v: int) -> tuple[int, ...]:
        try:
            return self._adj[v]
        except KeyError:
            raise GraphError(f"unknown node {v}") from None

    def degree(self, v: int) -> int:
        return len(self.neighbours(v))

    def node_of_label(self, lab: int) -> int:
        try:
            return self._node_of[lab]
        except KeyError:
            raise GraphError(f"no node carries label {lab}") from None

    def ring_arc(self) -> tuple[int, ...] | None:
        """Nodes in cyclic order when the graph is a single cycle, else None.

        The arc starts at the minimum-label node and runs toward its
        smaller-labelled neighbour, which makes it canonical.
        """
        if self._arc is not False:
            return self._arc  # type: ignore[return-value]
        arc: tuple[int, ...] | None = None
        if self.n >= 3 and all(len(ws) == 2 for ws in self._adj.values()):
            start = self._node_of[min(self._node_of)]
            a, b = self._adj[start]
            nxt = a if self.label[a] < self.label[b] else b
            walk = [start]
            prev = start
            while nxt != start:
                walk.append(nxt)
                prev, nxt = nxt, [w for w in self._adj[nxt] if w != prev][0]
            arc = tuple(walk)
        self._arc = arc
        self._arc_pos = {v: i for i, v in enumerate(arc)} if arc else None
        return arc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.edges == other.edges
            and self.label == other.label
            and self.L == other.L
        )

    def __hash__(self) -> int:
        return hash((self.nodes, self.edges, tuple(sorted(self.label.items())), self.L))

    def __repr__(self) -> str:
        return f"LabeledGraph(n={self.n}, m={len(self.edges)}, L={self.L})"


@dataclass(frozen=True)
class RingSpec:
    """A ring given by its cyclic sequence of distinct labels."""

    labels: tuple[int, ...]

    def __post_init__(self):
        labs = tuple(int(x) for x in self.labels)
        object.__setattr__(self, "labels", labs)
        if len(labs) < 3:
            raise GraphError("a ring needs at least 3 nodes")
        if len(set(labs)) != len(labs):
            raise GraphError("ring labels must be distinct")
        if any(x < 1 for x in labs):
            raise GraphError("ring labels must be positive")

    @property
    def n(self) -> int:
        return len(self.labels)

    def position(self, lab: int) -> int:
        try:
            return self.labels.index(lab)
        except ValueError:
            raise GraphError(f"label {lab} is not on the ring") from None

    def at(self, pos: int) -> int:
        return self.labels[pos % self.n]

    def arc(self, start_pos: int, length: int) -> tuple[int, ...]:
        """``length`` consecutive labels starting at ``start_pos`` (wrapping)."""
        return tuple(self.labels[(start_pos + i) % self.n] for i in range(length))

    def to_graph(self, L: int | None = None) -> LabeledGraph:
        return build_ring(self.labels, L)


def build_ring(labels: Sequence[int], L: int | None = None) -> LabeledGraph:
    """Cycle graph over ``labels`` in the given cyclic order; node ids = labels.

    ``L`` defaults to ``max(n, max(labels))`` so the sequence is always
    admissible on its own.
    """
    labs = [int(x) for x in labels]
    if len(labs) < 3:
        raise GraphError("a ring needs at least 3 nodes")
    if L is None:
        L = max(len(labs), max(labs))
    edges = [(labs[i], labs[(i + 1) % len(labs)]) for i in range(len(labs))]
    return LabeledGraph(labs, edges, {x: x for x in labs}, L)


def distance(g: LabeledGraph, u: int, v: int) -> int:
    """Shortest-path hop count between nodes ``u`` and ``v``."""
    if u not in g.nodes:
        raise GraphError(f"unknown node {u}")
    if v not in g.nodes:
        raise GraphError(f"unknown node {v}")
    if u == v:
        return 0
    dist = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for w in g.neighbours(x):
            if w not in dist:
                dist[w] = dist[x] + 1
                if w == v:
                    return dist[w]
                queue.append(w)
    raise GraphError(f"nodes {u} and {v} are disconnected")  # unreachable: graphs are connected


def _assemble_view(
    root_label: int,
    radius: int,
    dist: Mapping[int, int],
    adj_of: Mapping[int, Iterable[int]],
    frontier_degree,
) -> View:
    """Shared canonicalisation for balls taken in graphs and inside views.

    ``dist`` maps labels in the ball to their distance from the root;
    ``adj_of`` gives each ball label's neighbouring labels (supersets are
    fine, non-ball neighbours are skipped); ``frontier_degree(lab)`` must
    return the true host-graph degree of a distance-``radius`` label.
    """
    max_d = max(dist.values(), default=0)
    layers = tuple(
        tuple(sorted(lab for lab, d in dist.items() if d == dd)) for dd in range(max_d + 1)
    )
    edges = []
    for a, da in dist.items():
        for b in adj_of[a]:
            if a < b and b in dist:
                if da == radius and dist[b] == radius:
                    continue
                edges.append((a, b))
    frontier = tuple(
        sorted((lab, frontier_degree(lab)) for lab, d in dist.items() if d == radius)
    )
    return View(
        root=root_label,
        radius=radius,
        layers=layers,
        edges=tuple(sorted(edges)),
        frontier_degrees=frontier,
    )


def _ring_ball(g: LabeledGraph, arc: tuple[int, ...], v: int, r: int) -> View:
    n = len(arc)
    pos = g._arc_pos[v]  # type: ignore[index]
    lab = g.label
    root_lab = lab[v]
    if n <= 2 * r:
        # The node sees the entire ring.
        seq = tuple(lab[arc[(pos + t) % n]] for t in range(n))
        layers = [(root_lab,)]
        for d in range(1, n // 2 + 1):
            pair = {seq[d % n], seq[-d % n]}
            layers.append(tuple(sorted(pair)))
        edges = tuple(sorted(
            tuple(sorted((seq[i], seq[(i + 1) % n]))) for i in range(n)
        ))
        frontier = ()
        if n == 2 * r:
            frontier = ((seq[r], 2),)
        return View(root_lab, r, tuple(layers), edges, frontier, arc_hint=seq)
    seq = tuple(lab[arc[(pos + t) % n]] for t in range(-r, r + 1))
    layers = [(root_lab,)]
    for d in range(1, r + 1):
        layers.append(tuple(sorted((seq[r - d], seq[r + d]))))
    edges = tuple(sorted(
        tuple(sorted((seq[i], seq[i + 1]))) for i in range(2 * r)
    ))
    if r > 0:
        frontier = tuple(sorted([(seq[0], 2), (seq[2 * r], 2)]))
    else:
        frontier = ((root_lab, 2),)
    return View(root_lab, r, tuple(layers), edges, frontier, arc_hint=seq)


def ball(g: LabeledGraph, v: int, r: int, *, generic: bool = False) -> View:
    """The radius-``r`` view of node ``v``: its knowledge after ``r`` rounds."""
    if v not in g.nodes:
        raise GraphError(f"unknown node {v}")
    if r < 0:
        raise GraphError("ball radius must be non-negative")
    if not generic:
        arc = g.ring_arc()
        if arc is not None:
            return _ring_ball(g, arc, v, r)
    dist_nodes = {v: 0}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        if dist_nodes[x] == r:
            continue
        for w in g.neighbours(x):
            if w not in dist_nodes:
                dist_nodes[w] = dist_nodes[x] + 1
                queue.append(w)
    lab = g.label
    dist = {lab[x]: d for x, d in dist_nodes.items()}
    adj_of = {lab[x]: [lab[w] for w in g.neighbours(x)] for x in dist_nodes}
    degree_of = {lab[x]: g.degree(x) for x in dist_nodes}
    return _assemble_view(lab[v], r, dist, adj_of, degree_of.__getitem__)


def ball_in_view(view: View, w: int, r: int) -> View:
    """The radius-``r`` ball of label ``w`` extracted from inside ``view``.

    Sound whenever ``dist(view.root, w) + r <= view.radius``: inside that
    envelope the view contains every node, edge and degree the nested ball
    needs, so the result is byte-identical to taking the ball in the host
    graph directly.  A violated precondition raises ViewContainmentError.
    """
    if r < 0:
        raise GraphError("ball radius must be non-negative")
    host_dist = view_distance_map(view)
    if w not in host_dist:
        raise GraphError(f"label {w} does not occur in the view")
    if host_dist[w] + r > view.radius:
        raise ViewContainmentError(
            f"ball({w}, {r}) reaches distance {host_dist[w] + r} from the view root, "
            f"but the view only has radius {view.radius}"
        )
    adj = view_adjacency(view)
    frontier = view.frontier_map()
    dist = {w: 0}
    queue = deque([w])
    while queue:
        x = queue.popleft()
        if dist[x] == r:
            continue
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)

    def true_degree(lab: int) -> int:
        return frontier[lab] if lab in frontier else len(adj[lab])

    return _assemble_view(w, r, dist, adj, true_degree)


def relabel(g: LabeledGraph, sigma: Mapping[int, int]) -> LabeledGraph:
    """Apply a label permutation ``sigma`` (a bijection on {1..L})."""
    keys = sorted(sigma)
    vals = sorted(sigma.values())
    expected = list(range(1, g.L + 1))
    if keys != expected or vals != expected:
        raise GraphError("sigma must be a bijection on {1..L}")
    new_labels = {v: sigma[lab] for v, lab in g.label.items()}
    return LabeledGraph(g.nodes, g.edges, new_labels, g.L)


# ---------------------------------------------------------------------------
# Graph file format
#
#   # comment lines and blank lines are ignored
#   n L
#   ring: l1 l2 ... ln
#
# or
#
#   n L
#   u v          (one line per edge)
#   label u x    (one line per node)
# ---------------------------------------------------------------------------


def parse_graph_text(text: str) -> LabeledGraph:
    header: tuple[int, int] | None = None
    ring_labels: list[int] | None = None
    edges: list[tuple[int, int]] = []
    labels: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 2:
                raise GraphFormatError("expected header 'n L'", lineno)
            try:
                header = (int(parts[0]), int(parts[1]))
            except ValueError:
                raise GraphFormatError("header values must be integers", lineno) from None
            continue
        if line.startswith("ring:"):
            if ring_labels is not None:
                raise GraphFormatError("duplicate ring line", lineno)
            if edges or labels:
                raise GraphFormatError("ring line cannot be mixed with edge/label lines", lineno)
            try:
                ring_labels = [int(tok) for tok in line[len("ring:"):].split()]
            except ValueError:
                raise GraphFormatError("ring labels must be integers", lineno) from None
            if len(ring_labels) != header[0]:
                raise GraphFormatError(
                    f"ring line carries {len(ring_labels)} labels, header says n={header[0]}",
                    lineno,
                )
            continue
        if ring_labels is not None:
            raise GraphFormatError("unexpected content after ring line", lineno)
        parts = line.split()
        if parts[0] == "label":
            if len(parts) != 3:
                raise GraphFormatError("expected 'label u x'", lineno)
            try:
                u, x = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError("label line values must be integers", lineno) from None
            if u in labels:
                raise GraphFormatError(f"node {u} labelled twice", lineno)
            labels[u] = x
        else:
            if len(parts) != 2:
                raise GraphFormatError("expected an edge line 'u v'", lineno)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphFormatError("edge endpoints must be integers", lineno) from None
            edges.append((u, v))
    if header is None:
        raise GraphFormatError("empty graph document", 1)
    n, L = header
    if ring_labels is not None:
        try:
            return build_ring(ring_labels, L)
        except GraphError as exc:
            raise GraphFormatError(str(exc)) from exc
    nodes = set(labels)
    for u, v in edges:
        nodes.add(u)
        nodes.add(v)
    if len(nodes) != n:
        raise GraphFormatError(f"document describes {len(nodes)} nodes, header says n={n}")
    missing = nodes - set(labels)
    if missing:
        raise GraphFormatError(f"nodes without labels: {sorted(missing)}")
    try:
        return LabeledGraph(nodes, edges, labels, L)
    except GraphError as exc:
        raise GraphFormatError(str(exc)) from exc


def parse_graph_file(path) -> LabeledGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph_text(fh.read())


def format_graph_text(g: LabeledGraph) -> str:
    arc = g.ring_arc()
    lines = [f"{g.n} {g.L}"]
    if arc is not None:
        lines.append("ring: " + " ".join(str(g.label[v]) for v in arc))
    else:
        for u, v in sorted(g.edges):
            lines.append(f"{u} {v}")
        for v in sorted(g.nodes):
            lines.append(f"label {v} {g.label[v]}")
    return "\n".join(lines) + "\n"
