"""Finite windows of the infinite translation quivers built over a returning-arrow quiver."""

from dataclasses import dataclass, field
from functools import cached_property


def with_layer(v, m):
    """Flatten a layer index onto a vertex name: (i, t) + m -> (i, t, m)."""
    return (*v, m) if isinstance(v, tuple) else (v, m)


@dataclass
class TranslationWindow:
    """Layers ``lo..hi`` of a first- or second-kind covering quiver.

    ``kind`` is "first" (tau lowers the slab by 1) or "second" (tau lowers
    the layer by ``top`` and permutes base vertices by ``base_tau``).
    ``n`` is the degree of the original properly-graded algebra and ``top``
    the length of the maximal bound paths of the covered algebra (n + 1 over
    a returning-arrow quiver, n + 2 over a double one), so every bound path
    of length ``top`` runs from tau(i) to i.
    ``margin`` layers at each end are boundary: hammocks and the
    translation-axiom check only use vertices in the interior.
    """

    bound: object
    kind: str
    n: int
    top: int
    lo: int
    hi: int
    margin: int
    layer: dict
    base: dict
    base_tau: dict
    tags: dict = field(default_factory=dict)
    origin: dict = field(default_factory=dict)  # arrow id -> (base arrow id, layer)

    @property
    def quiver(self):
        return self.bound.quiver

    @property
    def shift(self):
        return 1 if self.kind == "first" else self.top

    @cached_property
    def _vertex_at(self):
        return {(self.base[v], self.layer[v]): v for v in self.quiver.vertices}

    @cached_property
    def _base_tau_inv(self):
        return {b: a for a, b in self.base_tau.items()}

    def vertex(self, base_vertex, m):
        return self._vertex_at.get((base_vertex, m))

    def name(self, base_vertex, m):
        return with_layer(base_vertex, m)

    def tau(self, v):
        """tau of a window vertex, or None if it falls outside the window."""
        b, m = self.base[v], self.layer[v]
        return self.vertex(self.base_tau[b], m - self.shift)

    def tau_inverse(self, v):
        b, m = self.base[v], self.layer[v]
        return self.vertex(self._base_tau_inv[b], m + self.shift)

    def orbit_key(self, v):
        b, m = self.base[v], self.layer[v]
        k, rest = divmod(m, self.shift)
        step = self.base_tau if k > 0 else self._base_tau_inv
        for _ in range(abs(k)):
            b = step[b]
        return b, rest

    def interior(self):
        lo, hi = self.lo + self.margin, self.hi - self.margin
        return [v for v in self.quiver.vertices if lo <= self.layer[v] <= hi]

    def in_interior(self, v):
        return self.lo + self.margin <= self.layer[v] <= self.hi - self.margin
