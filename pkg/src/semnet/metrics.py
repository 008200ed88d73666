"""Topological metrics over a semantic graph.

Path-based quantities (average path length, betweenness) use
unweighted hop distance: co-occurrence weights are similarities, not
traversal costs.  Modularity uses edge weights by default; pass
weighted=False to treat every edge as weight 1.  Every function here is
deterministic for a fixed input and seed.
"""

from __future__ import annotations

import random
from collections import defaultdict, deque
from dataclasses import dataclass

from semnet.cooccur import SemanticGraph
from semnet.errors import IntegrityError, UndefinedMetricError


@dataclass(frozen=True)
class CommunityPartition:
    """Node id -> dense community id, with the partition's modularity."""

    assignment: dict[int, int]
    modularity: float

    @property
    def community_count(self) -> int:
        return len(set(self.assignment.values()))


@dataclass(frozen=True)
class CentralityTable:
    metric: str
    scores: dict[int, float]
    ranking: tuple[int, ...]  # descending score, ties by lemma

    @classmethod
    def from_scores(cls, metric: str, scores: dict[int, float], graph: SemanticGraph):
        ranking = tuple(sorted(scores, key=lambda v: (-scores[v], graph.lemmas[v])))
        return cls(metric=metric, scores=scores, ranking=ranking)


def density(graph: SemanticGraph) -> float:
    """2E / (V(V-1)), edges counted unweighted."""
    v = graph.vertex_count
    if v < 2:
        raise UndefinedMetricError(f"density needs at least 2 nodes, graph has {v}")
    return 2.0 * graph.edge_count / (v * (v - 1))


def _bfs_distances(adjacency, source: int) -> list[int]:
    dist = [-1] * len(adjacency)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adjacency[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def connected_components(graph: SemanticGraph) -> list[list[int]]:
    """Components as sorted id lists, ordered by first (smallest) node."""
    adjacency = graph.adjacency
    seen = [False] * graph.vertex_count
    components = []
    for start in range(graph.vertex_count):
        if seen[start]:
            continue
        component = []
        queue = deque([start])
        seen[start] = True
        while queue:
            u = queue.popleft()
            component.append(u)
            for w in adjacency[u]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        components.append(sorted(component))
    return components


def largest_component(graph: SemanticGraph) -> list[int]:
    components = connected_components(graph)
    if not components:
        raise UndefinedMetricError("graph has no nodes")
    # ties broken toward the component containing the smallest node id
    return max(components, key=lambda c: (len(c), -c[0]))


def average_path_length(graph: SemanticGraph) -> float:
    """Mean hop distance over unordered pairs of the largest component."""
    if graph.edge_count == 0:
        raise UndefinedMetricError("average path length needs at least one edge")
    component = largest_component(graph)
    adjacency = graph.adjacency
    total = 0
    for source in component:
        dist = _bfs_distances(adjacency, source)
        total += sum(dist[v] for v in component if v != source)
    n = len(component)
    return total / (n * (n - 1))


def degree_centrality(graph: SemanticGraph) -> CentralityTable:
    scores = {v: float(len(graph.adjacency[v])) for v in range(graph.vertex_count)}
    return CentralityTable.from_scores("degree", scores, graph)


def betweenness_centrality(graph: SemanticGraph) -> CentralityTable:
    """Brandes' accumulation over unweighted shortest paths.

    Unnormalized, endpoints excluded.  Per-source sums count each
    unordered pair twice on an undirected graph, so the final scores
    are halved.
    """
    adjacency = graph.adjacency
    n = graph.vertex_count
    centrality = [0.0] * n
    for source in range(n):
        stack: list[int] = []
        predecessors: list[list[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        sigma[source] = 1
        dist = [-1] * n
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            stack.append(u)
            for w in adjacency[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
                if dist[w] == dist[u] + 1:
                    sigma[w] += sigma[u]
                    predecessors[w].append(u)
        delta = [0.0] * n
        while stack:
            w = stack.pop()
            for u in predecessors[w]:
                delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w])
            if w != source:
                centrality[w] += delta[w]
    scores = {v: centrality[v] / 2.0 for v in range(n)}
    return CentralityTable.from_scores("betweenness", scores, graph)


def _edge_weight(weight: int, weighted: bool) -> float:
    return float(weight) if weighted else 1.0


def modularity_of(graph: SemanticGraph, assignment: dict[int, int], *, weighted: bool = True) -> float:
    """Newman modularity Q of a complete node assignment.

    Q = sum over communities of [W_c / W - (S_c / 2W)^2] with W the
    total edge weight, W_c the intra-community weight, and S_c the sum
    of weighted degrees inside the community.
    """
    if set(assignment) != set(range(graph.vertex_count)):
        raise IntegrityError("assignment must cover every node exactly once")
    total = 0.0
    intra: defaultdict[int, float] = defaultdict(float)
    degree_sum: defaultdict[int, float] = defaultdict(float)
    for (a, b), raw in graph.edges.items():
        w = _edge_weight(raw, weighted)
        total += w
        degree_sum[assignment[a]] += w
        degree_sum[assignment[b]] += w
        if assignment[a] == assignment[b]:
            intra[assignment[a]] += w
    if total == 0.0:
        raise UndefinedMetricError("modularity needs at least one edge")
    q = 0.0
    for community in degree_sum:
        q += intra[community] / total - (degree_sum[community] / (2.0 * total)) ** 2
    return q


def seeded_shuffle(items, seed_or_rng) -> list:
    """Fisher-Yates driven only by Random.random().

    random.random() is the one primitive the stdlib guarantees stable
    across versions, which keeps reports byte-identical everywhere.
    """
    rng = seed_or_rng if isinstance(seed_or_rng, random.Random) else random.Random(seed_or_rng)
    out = list(items)
    for i in range(len(out) - 1, 0, -1):
        j = int(rng.random() * (i + 1))
        out[i], out[j] = out[j], out[i]
    return out


def louvain(
    graph: SemanticGraph, resolution: float = 1.0, seed: int = 0, *, weighted: bool = True
) -> CommunityPartition:
    """Greedy two-phase modularity maximization over edge weights.

    Level-0 visit order is a seeded shuffle of nodes in lexicographic
    lemma order; aggregated levels reuse the same RNG stream, so the
    result is deterministic for fixed (graph, resolution, seed).
    """
    if graph.vertex_count == 0:
        raise ValueError("louvain needs a non-empty graph")
    if resolution <= 0:
        raise ValueError(f"resolution must be positive, got {resolution}")
    rng = random.Random(seed)

    # working adjacency: list of {neighbor: weight}, self-loops allowed
    adjacency: list[dict[int, float]] = [dict() for _ in range(graph.vertex_count)]
    for (a, b), raw in graph.edges.items():
        w = _edge_weight(raw, weighted)
        adjacency[a][b] = w
        adjacency[b][a] = w

    order = seeded_shuffle(
        sorted(range(graph.vertex_count), key=lambda v: graph.lemmas[v]), rng
    )
    node_to_final = list(range(graph.vertex_count))
    while True:
        community, improved = _louvain_one_level(adjacency, order, resolution)
        if not improved:
            break
        community, count = _relabel_dense(community)
        node_to_final = [community[c] for c in node_to_final]
        adjacency = _aggregate(adjacency, community, count)
        if count == 1:
            break
        order = seeded_shuffle(range(count), rng)

    assignment_list, _ = _relabel_dense(node_to_final)
    assignment = {v: assignment_list[v] for v in range(graph.vertex_count)}
    q = modularity_of(graph, assignment, weighted=weighted)
    trivial = {v: 0 for v in range(graph.vertex_count)}
    q_trivial = modularity_of(graph, trivial, weighted=weighted)
    if q < q_trivial:  # guard: never report below the all-in-one partition
        assignment, q = trivial, q_trivial
    return CommunityPartition(assignment=assignment, modularity=q)


def _louvain_one_level(
    adjacency: list[dict[int, float]], order: list[int], resolution: float
) -> tuple[list[int], bool]:
    n = len(adjacency)
    degree = [
        sum(w for j, w in adjacency[i].items() if j != i) + 2.0 * adjacency[i].get(i, 0.0)
        for i in range(n)
    ]
    two_w = sum(degree)
    community = list(range(n))
    community_total = degree[:]
    improved = False
    if two_w == 0.0:
        return community, False
    while True:
        moves = 0
        for i in order:
            home = community[i]
            links: defaultdict[int, float] = defaultdict(float)
            for j, w in adjacency[i].items():
                if j != i:
                    links[community[j]] += w
            community_total[home] -= degree[i]
            community[i] = -1
            best_community = home
            best_gain = links.get(home, 0.0) - resolution * community_total[home] * degree[i] / two_w
            for candidate in sorted(links):
                if candidate == home:
                    continue
                gain = links[candidate] - resolution * community_total[candidate] * degree[i] / two_w
                if gain > best_gain + 1e-12:
                    best_gain = gain
                    best_community = candidate
            community[i] = best_community
            community_total[best_community] += degree[i]
            if best_community != home:
                moves += 1
                improved = True
        if moves == 0:
            return community, improved


def _relabel_dense(labels: list[int]) -> tuple[list[int], int]:
    """Relabel communities 0..C-1 ordered by smallest member index."""
    first_seen: dict[int, int] = {}
    for label in labels:
        if label not in first_seen:
            first_seen[label] = len(first_seen)
    return [first_seen[label] for label in labels], len(first_seen)


def _aggregate(
    adjacency: list[dict[int, float]], community: list[int], count: int
) -> list[dict[int, float]]:
    aggregated: list[dict[int, float]] = [dict() for _ in range(count)]
    for i, neighbors in enumerate(adjacency):
        ci = community[i]
        for j, w in neighbors.items():
            if j < i:
                continue  # undirected: visit each pair once (self-loops included)
            cj = community[j]
            a, b = (ci, cj) if ci <= cj else (cj, ci)
            aggregated[a][b] = aggregated[a].get(b, 0.0) + w
    # mirror for symmetric lookup
    for a in range(count):
        for b, w in list(aggregated[a].items()):
            if b != a:
                aggregated[b][a] = w
    return aggregated


def bridging_concepts(
    graph: SemanticGraph, partition: CommunityPartition, top_n: int
) -> list[tuple[str, float, tuple[int, ...]]]:
    """Nodes whose neighbors span >= 2 communities, by betweenness.

    Returns (lemma, betweenness, sorted neighbor-community ids), ranked
    by descending betweenness with lexicographic tie-break, truncated
    to `top_n`.
    """
    table = betweenness_centrality(graph)
    rows = []
    for v in range(graph.vertex_count):
        neighbor_communities = {partition.assignment[u] for u in graph.adjacency[v]}
        if len(neighbor_communities) >= 2:
            rows.append((graph.lemmas[v], table.scores[v], tuple(sorted(neighbor_communities))))
    rows.sort(key=lambda row: (-row[1], row[0]))
    return rows[:top_n]
