"""Isotopy classes of essential closed curves: equality, intersection, homology.

A CurveClass stores a canonical oriented crossing word (lexicographic minimum
over the minimal-length conjugacy orbit) plus the unoriented canonical key
used for equality.  All operations are pure; module-level caches only memoize
pure results.

The named families live here too: the chain curves a_i cut consecutive
polygon corners and are rotation images of a_1; b_0 comes from the versioned
transcription table (it runs around the a_1,a_2,a_3 chain); c_0 exists at
genus 3 only and is the inverse B_4-twist image of b_0; the lantern curves
e and f are defined by their twist formulas.
"""

from __future__ import annotations

from fractions import Fraction
from importlib import resources

from . import geometry as G
from . import words as W
from .scheme import (PolygonScheme, UnsupportedCurveFamilyError,
                     letter_for_side, side_for_letter)


class CurveError(ValueError):
    pass


class SchemeMismatchError(CurveError):
    pass


class MalformedWalkError(CurveError):
    pass


class InessentialCurveError(CurveError):
    pass


class NonSimpleCurveError(CurveError):
    pass


_null_caches: dict = {}
_simple_cache: dict = {}
_pair_cache: dict = {}


def null_cache(scheme: PolygonScheme) -> dict:
    return _null_caches.setdefault(scheme.genus, {})


def oriented_canonical(word, scheme: PolygonScheme):
    orbit = W.minimal_orbit(word, scheme)
    return min(orbit) if orbit else ()


class CurveClass:
    """Canonical representative of an unoriented essential curve class."""

    __slots__ = ("scheme", "walk", "key")

    def __init__(self, scheme, walk, key):
        self.scheme = scheme
        self.walk = walk  # canonical oriented crossing word
        self.key = key  # canonical unoriented form; equality contract

    def __eq__(self, other):
        return (isinstance(other, CurveClass)
                and self.scheme.genus == other.scheme.genus
                and self.key == other.key)

    def __hash__(self):
        return hash((self.scheme.genus, self.key))

    def __repr__(self):
        return f"CurveClass(g={self.scheme.genus}, walk={self.walk})"

    @property
    def is_simple(self) -> bool:
        ck = (self.scheme.genus, self.key)
        if ck not in _simple_cache:
            _simple_cache[ck] = G.is_simple_word(self.walk, self.scheme)
        return _simple_cache[ck]

    def reversed(self) -> "CurveClass":
        return from_word(self.scheme, W.inverse(self.walk))

    def dump_line(self, name: str) -> str:
        return f"{name}: " + " ".join(str(x) for x in self.walk)


def from_word(scheme: PolygonScheme, word) -> CurveClass:
    word = W.cyclic_free_reduce(tuple(word))
    if not word or not W.cyclic_dehn_reduce(word, scheme):
        raise InessentialCurveError("null-homotopic walk has no curve class")
    return CurveClass(scheme, oriented_canonical(word, scheme),
                      W.canonical_key(word, scheme))


def tighten(scheme: PolygonScheme, raw_walk) -> CurveClass:
    """Canonical curve class of a closed transverse walk.

    The walk is the cyclic sequence of signed edge crossings; any closed walk
    is admissible since the gluing determines the chords.  Null-homotopic
    input is rejected.
    """
    try:
        walk = tuple(int(x) for x in raw_walk)
    except (TypeError, ValueError) as exc:
        raise MalformedWalkError(f"not a crossing sequence: {raw_walk!r}") from exc
    if not walk:
        raise MalformedWalkError("empty walk")
    for x in walk:
        if x == 0 or abs(x) > scheme.m:
            raise MalformedWalkError(f"crossing letter {x} outside edge classes")
    return from_word(scheme, walk)


def equal(x: CurveClass, y: CurveClass) -> bool:
    _same_scheme(x, y)
    return x.key == y.key


def geometric_intersection(x: CurveClass, y: CurveClass) -> int:
    """Minimal transverse crossing number; requires simple inputs."""
    _same_scheme(x, y)
    if not x.is_simple or not y.is_simple:
        raise NonSimpleCurveError("geometric intersection expects simple curves")
    if x.key == y.key:
        return 0  # i(x, x) = 0 convention for simple classes
    a, b = sorted((x.key, y.key))
    ck = (x.scheme.genus, a, b)
    if ck not in _pair_cache:
        _pair_cache[ck] = G.pair_intersection(x.walk, y.walk, x.scheme,
                                              null_cache(x.scheme))
    return _pair_cache[ck]


def _same_scheme(x, y):
    if x.scheme.genus != y.scheme.genus:
        raise SchemeMismatchError("curves live on different schemes")


# -- homology ------------------------------------------------------------------


def edge_vector(word, scheme: PolygonScheme):
    v = [0] * scheme.m
    for x in word:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(v)


class SymplecticData:
    """Intersection pairing in edge-class coordinates and the a-curve basis."""

    def __init__(self, scheme: PolygonScheme):
        m = scheme.m
        self.scheme = scheme
        self.P = [[0] * m for _ in range(m)]
        for c in range(m):
            for d in range(c + 1, m):
                v = G.algebraic_pairing((c + 1,), (d + 1,), scheme)
                self.P[c][d] = v
                self.P[d][c] = -v
        alt = [(-1) ** c for c in range(m)]
        for row in self.P:
            if sum(r * a for r, a in zip(row, alt)) != 0:
                raise CurveError("pairing does not descend to homology")
        self.basis_walks = [a_family_word(scheme, i) for i in range(1, 2 * scheme.genus + 1)]
        self.basis_vecs = [edge_vector(w, scheme) for w in self.basis_walks]
        n = 2 * scheme.genus
        self.J = [[self.pair_vec(self.basis_vecs[i], self.basis_vecs[j])
                   for j in range(n)] for i in range(n)]
        det, inv = _det_inv(self.J)
        if det not in (1, -1):
            raise CurveError(f"a-curve basis not unimodular (det {det})")
        self.Jinv = inv

    def pair_vec(self, u, v):
        return sum(u[c] * self.P[c][d] * v[d]
                   for c in range(self.scheme.m) for d in range(self.scheme.m))

    def coords(self, word):
        # [x] = sum c_k [a_k] with <x, a_j> = sum_k c_k J[k][j], so c solves
        # against J transposed.
        vec = edge_vector(word, self.scheme)
        pairings = [self.pair_vec(vec, bv) for bv in self.basis_vecs]
        n = len(pairings)
        return tuple(sum(self.Jinv[j][i] * pairings[j] for j in range(n))
                     for i in range(n))


def _det_inv(mat):
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return 0, None
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            inv[col], inv[piv] = inv[piv], inv[col]
            det = -det
        det *= a[col][col]
        f = a[col][col]
        a[col] = [x / f for x in a[col]]
        inv[col] = [x / f for x in inv[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    out = []
    for row in inv:
        out.append([int(x) if x.denominator == 1 else x for x in row])
    return int(det), out


_symplectic: dict = {}


def symplectic_data(scheme: PolygonScheme) -> SymplecticData:
    if scheme.genus not in _symplectic:
        _symplectic[scheme.genus] = SymplecticData(scheme)
    return _symplectic[scheme.genus]


def homology_class(x, scheme: PolygonScheme = None, reverse: bool = False):
    """Integer homology vector in the oriented a-curve basis.

    Accepts a CurveClass (uses its canonical oriented traversal) or a raw
    word.  `reverse=True` takes the opposite traversal direction.
    """
    if isinstance(x, CurveClass):
        scheme, word = x.scheme, x.walk
    else:
        word = tuple(x)
    if reverse:
        word = W.inverse(word)
    return symplectic_data(scheme).coords(word)


def algebraic_intersection(x: CurveClass, y: CurveClass) -> int:
    _same_scheme(x, y)
    sd = symplectic_data(x.scheme)
    return sd.pair_vec(edge_vector(x.walk, x.scheme), edge_vector(y.walk, y.scheme))


# -- named curves ----------------------------------------------------------------


def a_family_word(scheme: PolygonScheme, index: int):
    """Oriented crossing word of a_index; a_1 cuts corners 1 and 2g+2."""
    base = (2, -1)
    rot = scheme.rotation((index - 1) % scheme.n_sides)
    return tuple(rot.letter_image(x) for x in base)


def _transcription_table():
    text = resources.files("mcgtorsion.data").joinpath("transcriptions.txt").read_text()
    table = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, _, body = line.partition(":")
        genus_tag, name = head.split()
        table[(int(genus_tag[1:]), name)] = tuple(int(x) for x in body.split())
    return table


_transcriptions = None


def transcribed_word(genus: int, name: str):
    global _transcriptions
    if _transcriptions is None:
        _transcriptions = _transcription_table()
    if (genus, name) in _transcriptions:
        return _transcriptions[(genus, name)]
    if name == "b0" and genus >= 5:
        # the transcribed pattern is genus-uniform; only g=3,4 are pinned
        return _transcriptions[(4, "b0")]
    raise UnsupportedCurveFamilyError(
        f"no transcription for {name} at genus {genus}")


_named_cache: dict = {}


def named_curve(scheme: PolygonScheme, family: str, index: int = 0) -> CurveClass:
    """Curve a_i, b_i, c_i (genus 3 only), e or f.

    Indices reduce mod 4g+2.  The c family exists where the genus-3 proof
    uses it; asking for it elsewhere is an error rather than a guess.
    """
    index = index % scheme.n_sides if family in ("a", "b", "c") else 0
    ck = (scheme.genus, family, index)
    if ck in _named_cache:
        return _named_cache[ck]
    if family == "a":
        cls = from_word(scheme, a_family_word(scheme, index))
    elif family == "b":
        base = transcribed_word(scheme.genus, "b0")
        rot = scheme.rotation(index)
        cls = from_word(scheme, tuple(rot.letter_image(x) for x in base))
    elif family == "c":
        if scheme.genus != 3:
            raise UnsupportedCurveFamilyError(
                "the c family is transcribed only at genus 3")
        from . import action
        c0 = action.parse_word(scheme, "B4^-1").apply_to(named_curve(scheme, "b", 0))
        rot = scheme.rotation(index)
        cls = from_word(scheme, tuple(rot.letter_image(x) for x in c0.walk))
    elif family in ("e", "f"):
        from . import action
        if family == "f":
            cls = action.parse_word(scheme, "B3^-1*A6*A5*A4").apply_to(
                named_curve(scheme, "b", 0))
        else:
            cls = action.parse_word(scheme, "A2*A1*A4^-1*B1").apply_to(
                named_curve(scheme, "a", 5))
    else:
        raise UnsupportedCurveFamilyError(f"unknown family {family!r}")
    _named_cache[ck] = cls
    return cls


def named_catalog(scheme: PolygonScheme) -> dict:
    """All named curves, keyed 'a0'..'b<n-1>', 'c*' at genus 3, 'e', 'f'."""
    cat = {}
    for fam in ("a", "b") + (("c",) if scheme.genus == 3 else ()):
        for i in range(scheme.n_sides):
            cat[f"{fam}{i}"] = named_curve(scheme, fam, i)
    cat["e"] = named_curve(scheme, "e")
    cat["f"] = named_curve(scheme, "f")
    return cat


def curve_name(scheme: PolygonScheme, cls: CurveClass):
    """Name of a curve class if it is a named one (smallest index wins)."""
    for name, known in named_catalog(scheme).items():
        if known.key == cls.key:
            return name
    return None


def dump_catalog(scheme: PolygonScheme) -> str:
    lines = []
    for name, cls in named_catalog(scheme).items():
        lines.append(cls.dump_line(name))
    return "\n".join(lines) + "\n"
