"""Combinatorial model of the glued (4g+2)-gon surface.

The genus-g closed surface is realized as a regular (4g+2)-gon with opposite
sides identified.  Sides are numbered 0..n-1 counterclockwise (n = 4g+2,
m = 2g+1); side ``s`` is glued to side ``s+m`` so that boundary point
``(s, t)`` matches ``(s+m, 1-t)`` for t in (0,1).  The gluing is a
translation-type identification, so the surface is orientable with one face,
m edge classes and two vertices (even corners and odd corners).

Curves transverse to the 1-skeleton are recorded as cyclic crossing words.
A crossing is a single signed integer: ``+(c+1)`` means the curve exits the
polygon through side ``c`` (crossing edge class c in the positive transverse
direction), ``-(c+1)`` means it exits through the opposite copy ``c+m``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache


class SchemeError(ValueError):
    pass


class UnsupportedGenusError(SchemeError):
    pass


class UnsupportedCurveFamilyError(SchemeError):
    pass


def letter_for_side(scheme: "PolygonScheme", side: int) -> int:
    """Signed crossing letter for exiting through polygon side ``side``."""
    m = scheme.m
    side %= scheme.n_sides
    return side + 1 if side < m else -(side - m + 1)


def side_for_letter(scheme: "PolygonScheme", letter: int) -> int:
    c = abs(letter) - 1
    return c if letter > 0 else c + scheme.m


@dataclass(frozen=True)
class DartPermutation:
    """Symmetry of the polygon acting on the 2n boundary darts.

    A dart is (side, direction) with direction +1 (ccw) or -1.  Rotations have
    orientation_character +1, reflections -1.  Reflections also flip the side
    parameter t -> 1-t, which is what ``param_flip`` records.
    """

    scheme: "PolygonScheme"
    side_map: tuple  # image of side s, for s in 0..n-1
    orientation_character: int  # +1 rotation, -1 reflection

    @property
    def param_flip(self) -> bool:
        return self.orientation_character == -1

    def dart_image(self, dart):
        side, direction = dart
        return (self.side_map[side % self.scheme.n_sides],
                direction * self.orientation_character)

    def compose(self, other: "DartPermutation") -> "DartPermutation":
        """self after other (right-to-left, like mapping composition)."""
        if self.scheme is not other.scheme:
            raise SchemeError("scheme mismatch in dart permutation composition")
        smap = tuple(self.side_map[other.side_map[s]]
                     for s in range(self.scheme.n_sides))
        return DartPermutation(self.scheme, smap,
                               self.orientation_character * other.orientation_character)

    def is_identity_perm(self) -> bool:
        return (self.orientation_character == 1
                and all(self.side_map[s] == s for s in range(self.scheme.n_sides)))

    def order(self, bound: int = 100) -> int:
        acc = self
        for k in range(1, bound + 1):
            if acc.is_identity_perm():
                return k
            acc = acc.compose(self)
        raise SchemeError("dart permutation order exceeds bound")

    def respects_identification(self) -> bool:
        n, m = self.scheme.n_sides, self.scheme.m
        return all((self.side_map[s] + m) % n == self.side_map[(s + m) % n]
                   for s in range(n))

    def letter_image(self, letter: int) -> int:
        """Image of a crossing letter under the induced curve relabeling."""
        new_side = self.side_map[side_for_letter(self.scheme, letter)]
        return letter_for_side(self.scheme, new_side)


@dataclass(frozen=True)
class PolygonScheme:
    genus: int
    n_sides: int
    m: int  # number of edge classes = 2g+1
    vertex_classes: tuple  # two tuples of corner indices
    vertex_cyclic_order: tuple  # per vertex class, corners in link order
    relators: tuple = field(default=())  # dual vertex words, as letter tuples

    # -- basic structure ---------------------------------------------------

    @property
    def darts(self):
        return tuple((s, d) for s in range(self.n_sides) for d in (1, -1))

    def identify_side(self, side: int) -> int:
        return (side + self.m) % self.n_sides

    def glue_point(self, side, t):
        """Boundary point identified with (side, t)."""
        return (self.identify_side(side), 1 - t)

    def corner_class(self, corner: int) -> int:
        return corner % 2

    def euler_characteristic(self) -> int:
        # V - E + F with V=2, E=m, F=1
        return 2 - self.m + 1

    # -- symmetries ----------------------------------------------------------

    def rotation(self, k: int = 1) -> DartPermutation:
        n = self.n_sides
        return DartPermutation(self, tuple((s + k) % n for s in range(n)), 1)

    def reflection(self, axis: int) -> DartPermutation:
        """Reflection sending side s to axis - s (and t to 1-t)."""
        n = self.n_sides
        return DartPermutation(self, tuple((axis - s) % n for s in range(n)), -1)

    def all_reflections(self):
        return [self.reflection(k) for k in range(self.n_sides)]


def _vertex_data(genus: int):
    n, m = 4 * genus + 2, 2 * genus + 1
    # corner j (between sides j-1 and j) is glued to corner j+m+1
    step = m + 1
    orbits = []
    seen = set()
    for start in range(n):
        if start in seen:
            continue
        orbit = []
        j = start
        while j not in seen:
            seen.add(j)
            orbit.append(j)
            j = (j + step) % n
        orbits.append(tuple(orbit))
    return tuple(sorted(orbits)), tuple(sorted(orbits))


def _dual_relators(genus: int):
    """Boundary words of the two dual 2-cells (links of the two vertices).

    Walking the link of the even vertex crosses every edge class once; the
    sign pattern alternates because the link alternates original and opposite
    side copies.  Same for the odd vertex, shifted by one class and ending on
    the seam letter with both final signs negative.
    """
    m = 2 * genus + 1
    v_even = tuple((c + 1) * (1 if c % 2 == 0 else -1) for c in range(m))
    v_odd = []
    for t in range(m):
        side = (1 + t * (m + 1)) % (2 * m)
        cls = side % m
        sign = 1 if side < m else -1
        v_odd.append(sign * (cls + 1))
    return (v_even, tuple(v_odd))


def _piece_bound(relators) -> int:
    """Longest common subword between distinct cyclic relator variants."""
    variants = []
    for r in relators:
        for w in (r, tuple(-x for x in reversed(r))):
            L = len(w)
            for i in range(L):
                variants.append(tuple(w[i:] + w[:i]))
    longest = 0
    for i, u in enumerate(variants):
        for v in variants[i + 1:]:
            if u == v:
                continue
            L = len(u)
            for k in range(min(L, len(v)), 0, -1):
                if u[:k] == v[:k]:
                    longest = max(longest, k)
                    break
    return longest


@lru_cache(maxsize=None)
def build_scheme(genus: int) -> PolygonScheme:
    """Construct the glued (4g+2)-gon scheme for genus >= 3.

    Genus 1 is handled by the separate matrix-presentation component; genus 2
    is outside the scope of this workbench.
    """
    if not isinstance(genus, int) or genus < 3:
        raise UnsupportedGenusError(
            f"genus {genus!r} not supported; the polygon model needs genus >= 3")
    vclasses, vorder = _vertex_data(genus)
    relators = _dual_relators(genus)
    scheme = PolygonScheme(
        genus=genus,
        n_sides=4 * genus + 2,
        m=2 * genus + 1,
        vertex_classes=vclasses,
        vertex_cyclic_order=vorder,
        relators=relators,
    )
    _check_invariants(scheme)
    return scheme


def _check_invariants(scheme: PolygonScheme):
    if len(scheme.vertex_classes) != 2:
        raise SchemeError("gluing must produce exactly two vertex classes")
    if scheme.euler_characteristic() != 2 - 2 * scheme.genus:
        raise SchemeError("Euler characteristic mismatch")
    # orientability: every edge class appears once with each sign in the
    # dual relators combined (translation gluing).
    counts = {}
    for rel in scheme.relators:
        for x in rel:
            counts[x] = counts.get(x, 0) + 1
    for c in range(scheme.m):
        if counts.get(c + 1, 0) != 1 or counts.get(-(c + 1), 0) != 1:
            raise SchemeError("identification is not orientable")
    # Dehn-algorithm precondition for the dual presentation: pieces must be
    # shorter than |relator|/6 (metric small cancellation).  This holds for
    # the antipodal gluing at every genus we build; the greedy word reduction
    # in `words` is only valid under it, so fail loudly rather than mis-reduce.
    if not _piece_bound(scheme.relators) * 6 < scheme.m:
        raise SchemeError("dual presentation is not C'(1/6); word engine unusable")


def dihedral_check(scheme: PolygonScheme) -> bool:
    """sigma^n = 1, tau^2 = 1, tau sigma tau = sigma^-1 on darts."""
    sigma = scheme.rotation(1)
    tau = scheme.reflection(0)
    if sigma.order(scheme.n_sides + 1) != scheme.n_sides:
        return False
    if tau.order(3) != 2:
        return False
    lhs = tau.compose(sigma).compose(tau)
    rhs = scheme.rotation(-1 % scheme.n_sides)
    return lhs.side_map == rhs.side_map and lhs.orientation_character == 1
