"""Min-priority structures keyed by vertex id, with arbitrary key updates.

Both backends order by ``(key, id)`` so ties go to the smallest id, and both
support raising as well as lowering a key (signed degrees move either way).
"""

from __future__ import annotations

import heapq
import math


class SegmentTreePQ:
    """Array segment tree over ``n`` slots holding the argmin of each range.

    ``update`` and ``remove`` are O(log n); ``min`` is O(1).
    """

    def __init__(self, keys):
        n = len(keys)
        size = 1
        while size < max(n, 1):
            size *= 2
        self.size = size
        self.keys = list(keys) + [math.inf] * (size - n)
        self.alive = [True] * n + [False] * (size - n)
        self._n_alive = n
        # tree[node] = slot index of the minimum in that node's range (-1: none)
        tree = [-1] * (2 * size)
        for i in range(n):
            tree[size + i] = i
        for node in range(size - 1, 0, -1):
            tree[node] = self._pick(tree[2 * node], tree[2 * node + 1])
        self.tree = tree

    def _pick(self, a, b):
        if a < 0 or not self.alive[a]:
            return b if b >= 0 and self.alive[b] else -1
        if b < 0 or not self.alive[b]:
            return a
        ka, kb = self.keys[a], self.keys[b]
        if kb < ka or (kb == ka and b < a):
            return b
        return a

    def _fix(self, i):
        node = (self.size + i) // 2
        tree = self.tree
        while node:
            tree[node] = self._pick(tree[2 * node], tree[2 * node + 1])
            node //= 2

    def __len__(self):
        return self._n_alive

    def update(self, i, key):
        self.keys[i] = key
        self._fix(i)

    def min(self):
        i = self.tree[1]
        if i < 0:
            raise IndexError("priority queue is empty")
        return i, self.keys[i]

    def pop(self):
        i, key = self.min()
        self.remove(i)
        return i, key

    def remove(self, i):
        if self.alive[i]:
            self.alive[i] = False
            self._n_alive -= 1
            self._fix(i)


class LazyHeapPQ:
    """Binary heap with lazy invalidation of stale entries.

    Every update pushes a fresh ``(key, id)`` entry; stale ones are skipped
    on pop.  Amortised O(log m) per operation for m updates.
    """

    def __init__(self, keys):
        self.keys = list(keys)
        self.alive = [True] * len(self.keys)
        self._n_alive = len(self.keys)
        self.heap = [(k, i) for i, k in enumerate(self.keys)]
        heapq.heapify(self.heap)

    def __len__(self):
        return self._n_alive

    def update(self, i, key):
        self.keys[i] = key
        heapq.heappush(self.heap, (key, i))

    def _clean(self):
        heap, keys, alive = self.heap, self.keys, self.alive
        while heap:
            key, i = heap[0]
            if alive[i] and keys[i] == key:
                return
            heapq.heappop(heap)
        raise IndexError("priority queue is empty")

    def min(self):
        self._clean()
        key, i = self.heap[0]
        return i, key

    def pop(self):
        self._clean()
        key, i = heapq.heappop(self.heap)
        self.alive[i] = False
        self._n_alive -= 1
        return i, key

    def remove(self, i):
        if self.alive[i]:
            self.alive[i] = False
            self._n_alive -= 1


BACKENDS = {"segment": SegmentTreePQ, "heap": LazyHeapPQ}


def make_pq(keys, backend="heap"):
    try:
        cls = BACKENDS[backend]
    except KeyError:
        raise ValueError(f"unknown priority backend {backend!r}") from None
    return cls(keys)
