"""N x M toroidal mesh: coordinates, directed links, distances, shortest paths.

Nodes carry centered coordinates: x in {floor(-M/2)+1, ..., floor(M/2)},
y in {floor(-N/2)+1, ..., floor(N/2)}, where N is the number of satellites
per orbital plane (y axis) and M the number of planes (x axis).  Every node
has exactly four neighbors (left, down, right, up) with wraparound, and the
link a->b is distinct from b->a.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, NamedTuple, Optional

# Direction indices, in the fixed expansion order used everywhere.
LEFT, DOWN, RIGHT, UP = 0, 1, 2, 3
DIR_STEPS = ((-1, 0), (0, -1), (1, 0), (0, 1))
DIR_NAMES = ("L", "D", "R", "U")


class NodeCoord(NamedTuple):
    x: int
    y: int


class DirectedLink(NamedTuple):
    tail: NodeCoord
    head: NodeCoord


ORIGIN = NodeCoord(0, 0)


@dataclass(frozen=True)
class GridSpec:
    """Torus dimensions: N = n_per_plane (y axis), M = m_planes (x axis)."""

    n_per_plane: int
    m_planes: int

    def __post_init__(self) -> None:
        if self.n_per_plane < 3 or self.m_planes < 3:
            raise ValueError("need N >= 3 and M >= 3 so the four neighbors are distinct")

    @property
    def n_nodes(self) -> int:
        return self.n_per_plane * self.m_planes

    @property
    def n_links(self) -> int:
        return 4 * self.n_nodes

    def x_lo(self) -> int:
        return -(self.m_planes // 2) + 1 if self.m_planes % 2 == 0 else -(self.m_planes // 2)

    def y_lo(self) -> int:
        return -(self.n_per_plane // 2) + 1 if self.n_per_plane % 2 == 0 else -(self.n_per_plane // 2)

    def nodes(self) -> Iterator[NodeCoord]:
        for xi in range(self.m_planes):
            for yi in range(self.n_per_plane):
                yield NodeCoord(self.x_lo() + xi, self.y_lo() + yi)


def normalize(spec: GridSpec, node: NodeCoord) -> NodeCoord:
    """Map arbitrary integer coordinates into the centered ranges."""
    xl, yl = spec.x_lo(), spec.y_lo()
    return NodeCoord(
        (node[0] - xl) % spec.m_planes + xl,
        (node[1] - yl) % spec.n_per_plane + yl,
    )


def step(spec: GridSpec, node: NodeCoord, direction: int) -> NodeCoord:
    dx, dy = DIR_STEPS[direction]
    return normalize(spec, NodeCoord(node[0] + dx, node[1] + dy))


def neighbors(spec: GridSpec, node: NodeCoord) -> tuple[NodeCoord, NodeCoord, NodeCoord, NodeCoord]:
    """The four torus neighbors in (left, down, right, up) order."""
    return tuple(step(spec, node, d) for d in range(4))  # type: ignore[return-value]


def node_index(spec: GridSpec, node: NodeCoord) -> int:
    return (node[0] - spec.x_lo()) * spec.n_per_plane + (node[1] - spec.y_lo())


def link_index(spec: GridSpec, tail: NodeCoord, direction: int) -> int:
    """Dense id of the directed link leaving ``tail`` in ``direction``."""
    return node_index(spec, tail) * 4 + direction


def direction_between(spec: GridSpec, tail: NodeCoord, head: NodeCoord) -> int:
    for d in range(4):
        if step(spec, tail, d) == head:
            return d
    raise ValueError(f"{head} is not a torus neighbor of {tail}")


def hop_distance(spec: GridSpec, a: NodeCoord, b: NodeCoord) -> int:
    """Minimum hop count between two nodes, wrap-aware per axis."""
    dx = abs(a[0] - b[0]) % spec.m_planes
    dy = abs(a[1] - b[1]) % spec.n_per_plane
    return min(dx, spec.m_planes - dx) + min(dy, spec.n_per_plane - dy)


@lru_cache(maxsize=None)
def coord_table(spec: GridSpec) -> tuple[NodeCoord, ...]:
    """Node coordinates indexed by node_index (Monte Carlo hot path)."""
    table = [ORIGIN] * spec.n_nodes
    for node in spec.nodes():
        table[node_index(spec, node)] = node
    return tuple(table)


@lru_cache(maxsize=None)
def neighbor_id_table(spec: GridSpec) -> tuple[tuple[int, int, int, int], ...]:
    """For each node index, its four neighbor indexes in (L, D, R, U) order."""
    return tuple(
        tuple(node_index(spec, nb) for nb in neighbors(spec, node))
        for node in coord_table(spec)
    )


@dataclass(frozen=True)
class Path:
    """An ordered chain of directed hops; empty means src == dst."""

    hops: tuple[DirectedLink, ...]

    def __len__(self) -> int:
        return len(self.hops)

    def nodes(self) -> list[NodeCoord]:
        if not self.hops:
            return []
        return [self.hops[0].tail] + [h.head for h in self.hops]

    def validate(self, spec: GridSpec) -> None:
        seen = set()
        for i, hop in enumerate(self.hops):
            direction_between(spec, hop.tail, hop.head)  # raises if not adjacent
            if i > 0 and self.hops[i - 1].head != hop.tail:
                raise ValueError(f"hop {i} does not chain")
            if hop.tail in seen:
                raise ValueError(f"node {hop.tail} repeated")
            seen.add(hop.tail)
        if self.hops and self.hops[-1].head in seen:
            raise ValueError("path is not simple")


def path_from_nodes(nodes: list[NodeCoord]) -> Path:
    return Path(tuple(DirectedLink(a, b) for a, b in zip(nodes, nodes[1:])))


LinkPredicate = Callable[[NodeCoord, int], bool]


def shortest_connected_path(
    spec: GridSpec,
    link_on: LinkPredicate,
    src: NodeCoord,
    dst: NodeCoord,
) -> Optional[Path]:
    """BFS over links that are ON in the given snapshot; None if unreachable.

    ``link_on(tail, direction)`` reports the snapshot state of one directed
    link.  Deterministic tie-break: neighbors are expanded in (L, D, R, U)
    order and the first-found parent is kept.
    """
    coords = coord_table(spec)
    hops = shortest_connected_hops(
        spec,
        lambda nid, d: link_on(coords[nid], d),
        node_index(spec, normalize(spec, src)),
        node_index(spec, normalize(spec, dst)),
    )
    if hops is None:
        return None
    nbr = neighbor_id_table(spec)
    return Path(tuple(DirectedLink(coords[t], coords[nbr[t][d]]) for t, d in hops))


def shortest_connected_hops(
    spec: GridSpec,
    link_on_id,
    src_id: int,
    dst_id: int,
) -> Optional[list[tuple[int, int]]]:
    """Id-level BFS core: hop list [(tail node index, direction), ...] or None.

    ``link_on_id(node_index, direction)`` is the snapshot predicate.  Same
    expansion order and tie-break as shortest_connected_path.
    """
    if src_id == dst_id:
        return []
    nbr = neighbor_id_table(spec)
    n = spec.n_nodes
    visited = bytearray(n)
    visited[src_id] = 1
    parent = [-1] * n  # packed as tail_id * 4 + direction
    queue = deque([src_id])
    while queue:
        nid = queue.popleft()
        row = nbr[nid]
        for d in range(4):
            nxt = row[d]
            if visited[nxt] or not link_on_id(nid, d):
                continue
            visited[nxt] = 1
            parent[nxt] = nid * 4 + d
            if nxt == dst_id:
                hops = []
                node = dst_id
                while node != src_id:
                    packed = parent[node]
                    tail, direction = packed >> 2, packed & 3
                    hops.append((tail, direction))
                    node = tail
                hops.reverse()
                return hops
            queue.append(nxt)
    return None


def random_shortest_path(spec: GridSpec, src: NodeCoord, dst: NodeCoord, rng) -> Path:
    """A uniformly random minimum-length monotone path from src to dst.

    Per axis the shorter wrap direction is taken (fair coin on an exact tie),
    then the horizontal/vertical moves are interleaved uniformly at random
    among the C(a+b, a) shortest staircases.
    """
    src = normalize(spec, src)
    dst = normalize(spec, dst)
    xdir, xcount = _axis_moves(src[0], dst[0], spec.m_planes, LEFT, RIGHT, rng)
    ydir, ycount = _axis_moves(src[1], dst[1], spec.n_per_plane, DOWN, UP, rng)
    nodes = [src]
    a, b = xcount, ycount
    node = src
    while a + b > 0:
        # choosing x with prob a/(a+b) yields a uniform interleaving
        if rng.random() * (a + b) < a:
            node = step(spec, node, xdir)
            a -= 1
        else:
            node = step(spec, node, ydir)
            b -= 1
        nodes.append(node)
    return path_from_nodes(nodes)


def _axis_moves(c_src: int, c_dst: int, span: int, neg_dir: int, pos_dir: int, rng) -> tuple[int, int]:
    fwd = (c_dst - c_src) % span  # steps in the positive direction
    bwd = span - fwd
    if fwd == 0:
        return pos_dir, 0
    if fwd < bwd:
        return pos_dir, fwd
    if bwd < fwd:
        return neg_dir, bwd
    return (pos_dir, fwd) if rng.random() < 0.5 else (neg_dir, bwd)
