"""Pure-Python lazy Dijkstra (reference backend).

Semantics shared with the compiled kernel:

* heap entries are ``(distance, vertex)``; ties pop in vertex order;
* a tentative distance is replaced only by a strictly smaller one; on an exact
  tie the smaller predecessor wins;
* the first popped target ends the search;
* at most ``cap`` non-target vertices are settled, after which the search
  stops and reports the best tentative target distance as inexact.
"""

from __future__ import annotations

from heapq import heappop, heappush
from math import inf


def dijkstra(g, W, source, targets, cap, allowed=None):
    """Return (distance, path, settled_count, exact, target)."""
    if source in targets:
        return 0.0, [source], 1, True, source
    weight = W.weight
    neighbors = g.neighbors
    dist = {source: 0.0}
    pred = {}
    settled = set()
    heap = [(0.0, source)]
    count = 0
    while heap:
        d, u = heappop(heap)
        if u in settled or d > dist[u]:
            continue
        if u in targets:
            return d, _trace(pred, source, u), count + 1, True, u
        if count >= cap:
            break
        settled.add(u)
        count += 1
        for v in neighbors(u):
            if v in settled:
                continue
            if allowed is not None and v not in allowed:
                continue
            nd = d + weight((u, v) if u < v else (v, u))
            old = dist.get(v)
            if old is None or nd < old:
                dist[v] = nd
                pred[v] = u
                heappush(heap, (nd, v))
            elif nd == old and u < pred[v]:
                pred[v] = u
    best = None
    for t in sorted(targets):
        if t in dist and (best is None or dist[t] < dist[best]):
            best = t
    if best is None:
        return inf, [], count, False, None
    return dist[best], _trace(pred, source, best), count, False, best


def _trace(pred, source, target):
    path = [target]
    while path[-1] != source:
        path.append(pred[path[-1]])
    path.reverse()
    return path
