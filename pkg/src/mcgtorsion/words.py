"""Crossing-word engine for curves on the glued polygon.

Free homotopy classes of closed curves transverse to the 1-skeleton
correspond to conjugacy classes in the dual one-vertex presentation whose
relators are the two vertex links (see `scheme._dual_relators`).  Since that
presentation is metrically small-cancellation (checked at scheme build),
greedy Dehn reduction -- cancel adjacent inverse letters, replace any subword
longer than half a relator by the shorter complement -- reaches the unique
minimal length, and two minimal cyclic words are conjugate exactly when they
are connected by length-preserving single-relator swaps and rotations.
`canonical_key` takes the lexicographic minimum over that finite orbit.

Relator lengths are odd (2g+1), so no swap preserves length without seam
cancellation; orbits stay tiny in practice.
"""

from __future__ import annotations

from functools import lru_cache

from .scheme import PolygonScheme


class WordError(ValueError):
    pass


def inverse(word):
    return tuple(-x for x in reversed(word))


def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_free_reduce(word):
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


@lru_cache(maxsize=None)
def _variants(relators):
    """All cyclic rotations of each relator and its inverse."""
    out = []
    for r in relators:
        for base in (tuple(r), inverse(r)):
            L = len(base)
            for i in range(L):
                out.append(base[i:] + base[:i])
    return tuple(sorted(set(out)))


def _half(m: int) -> int:
    # smallest integer strictly greater than m/2
    return m // 2 + 1


def _find_linear_match(word, variants, min_len):
    """Longest match of word[i:i+k] with a variant prefix, k >= min_len."""
    L = len(word)
    best = None
    for i in range(L):
        for v in variants:
            k = 0
            while k < len(v) and i + k < L and word[i + k] == v[k]:
                k += 1
            if k >= min_len and (best is None or k > best[2]):
                best = (i, v, k)
    return best


def dehn_reduce_based(word, scheme: PolygonScheme):
    """Reduce a based loop word; reaches the empty word iff null-homotopic."""
    variants = _variants(scheme.relators)
    h = _half(scheme.m)
    w = free_reduce(word)
    while True:
        hit = _find_linear_match(w, variants, h)
        if hit is None:
            return w
        i, v, k = hit
        w = free_reduce(w[:i] + inverse(v[k:]) + w[i + k:])


def is_null(word, scheme: PolygonScheme) -> bool:
    return len(dehn_reduce_based(word, scheme)) == 0


def cyclic_dehn_reduce(word, scheme: PolygonScheme):
    """Minimal-length representative of the conjugacy class (some rotation)."""
    variants = _variants(scheme.relators)
    h = _half(scheme.m)
    w = cyclic_free_reduce(word)
    while w:
        L = len(w)
        doubled = w + w
        hit = None
        for i in range(L):
            for v in variants:
                k = 0
                while k < len(v) and k < L and doubled[i + k] == v[k]:
                    k += 1
                if k >= h:
                    hit = (i, v, k)
                    break
            if hit:
                break
        if hit is None:
            return w
        i, v, k = hit
        rotated = doubled[i:i + L]
        w = cyclic_free_reduce(inverse(v[k:]) + rotated[k:])
    return w


def min_rotation(word):
    if not word:
        return word
    return min(word[i:] + word[:i] for i in range(len(word)))


_ORBIT_CAP = 20000


def _swap_neighbors(state, scheme):
    """Length-preserving single-relator swaps of a minimal cyclic word."""
    variants = _variants(scheme.relators)
    L = len(state)
    out = set()
    doubled = state + state
    for i in range(L):
        rot = doubled[i:i + L]
        for v in variants:
            k = 0
            while k < len(v) and k < L and rot[k] == v[k]:
                k += 1
            for j in range(1, k + 1):
                cand = cyclic_free_reduce(inverse(v[j:]) + rot[j:])
                if len(cand) == L:
                    out.add(min_rotation(cand))
    return out


def minimal_orbit(word, scheme: PolygonScheme):
    """All minimal cyclic representatives reachable by relator swaps."""
    start = min_rotation(cyclic_dehn_reduce(word, scheme))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for state in frontier:
            for nb in _swap_neighbors(state, scheme):
                if nb not in seen:
                    seen.add(nb)
                    nxt.append(nb)
        if len(seen) > _ORBIT_CAP:
            raise WordError("conjugacy orbit exceeded cap; word suspiciously long")
        frontier = sorted(nxt)
    return seen


def canonical_key(word, scheme: PolygonScheme, oriented: bool = False):
    """Canonical form of the free homotopy class of `word`.

    Unoriented by default: traversal reversal is folded in, matching curve
    equality.  The empty tuple is the class of a null-homotopic loop.
    """
    orbit = minimal_orbit(word, scheme)
    if not oriented:
        extra = set()
        for state in orbit:
            extra.add(min_rotation(inverse(state)))
        orbit = orbit | extra
    return min(orbit) if orbit else ()
