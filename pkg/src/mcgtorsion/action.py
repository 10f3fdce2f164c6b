"""Mapping classes as words in twists and the polygon symmetries.

Composition is right-to-left: in ``A1*B0`` the twist B0 acts first.  Twist
tokens carry the curve class they twist about, so twists about computed
curves (e, f, images under other words) need no special casing.  A positive
exponent is a right-hand twist; the realization of "right hand" in the
polygon model is the HANDEDNESS constant in `geometry`, pinned by the lantern
relation.

Identity certificates probe every named curve.  The named family fills the
surface, so a class fixing all of them is finite order (Alexander method),
and a finite-order orientation-preserving class with trivial homology action
is trivial; both facts enter the ledger as trusted lemmas.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import curves as C
from . import geometry as G
from . import words as W
from .scheme import DartPermutation, PolygonScheme


class WordParseError(ValueError):
    def __init__(self, message, position=None):
        super().__init__(message if position is None
                         else f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Token:
    kind: str  # "twist" | "sigma" | "tau"
    curve: object = None  # CurveClass for twists
    exponent: int = 1
    label: str = ""

    def inverse(self):
        if self.kind == "tau":
            return self
        return Token(self.kind, self.curve, -self.exponent, self.label)


class MappingWord:
    """Composition of twist/rotation/reflection tokens (applied right-to-left)."""

    __slots__ = ("scheme", "tokens")

    def __init__(self, scheme: PolygonScheme, tokens=()):
        self.scheme = scheme
        self.tokens = tuple(tokens)

    def __mul__(self, other: "MappingWord") -> "MappingWord":
        if self.scheme.genus != other.scheme.genus:
            raise C.SchemeMismatchError("composing words on different schemes")
        return MappingWord(self.scheme, self.tokens + other.tokens)

    def inverse(self) -> "MappingWord":
        return MappingWord(self.scheme, tuple(t.inverse() for t in reversed(self.tokens)))

    def power(self, k: int) -> "MappingWord":
        if k < 0:
            return self.inverse().power(-k)
        return MappingWord(self.scheme, self.tokens * k)

    @property
    def orientation_character(self) -> int:
        flips = sum(1 for t in self.tokens if t.kind == "tau")
        return -1 if flips % 2 else 1

    def __str__(self):
        if not self.tokens:
            return "1"
        parts = []
        for t in self.tokens:
            base = t.label or {"sigma": "S", "tau": "T"}.get(t.kind, "?")
            parts.append(base if t.exponent == 1 or t.kind == "tau"
                         else f"{base}^{t.exponent}")
        return "*".join(parts)

    def apply_to(self, curve: C.CurveClass) -> C.CurveClass:
        if curve.scheme.genus != self.scheme.genus:
            raise C.SchemeMismatchError("word and curve on different schemes")
        walk = apply_to_walk(self.scheme, self.tokens, curve.walk)
        return C.from_word(self.scheme, walk)


_apply_cache: dict = {}


def _token_key(scheme, tok: Token):
    if tok.kind == "twist":
        return ("twist", tok.curve.key, tok.exponent)
    return (tok.kind, tok.exponent)


def apply_to_walk(scheme: PolygonScheme, tokens, walk):
    """Oriented image walk under the composition (rightmost token first)."""
    for tok in reversed(tokens):
        ck = (scheme.genus, _token_key(scheme, tok), walk)
        hit = _apply_cache.get(ck)
        if hit is not None:
            walk = hit
            continue
        if tok.kind == "twist":
            if not tok.curve.is_simple:
                raise C.NonSimpleCurveError("cannot twist about a non-simple curve")
            new = G.twist_spliced_word(walk, tok.curve.walk, scheme,
                                       tok.exponent, C.null_cache(scheme))
        elif tok.kind == "sigma":
            perm = scheme.rotation(tok.exponent % scheme.n_sides)
            new = tuple(perm.letter_image(x) for x in walk)
        elif tok.kind == "tau":
            perm = calibrated_tau(scheme)
            new = tuple(perm.letter_image(x) for x in walk)
        else:
            raise WordParseError(f"unknown token kind {tok.kind}")
        new = C.oriented_canonical(new, scheme)
        _apply_cache[ck] = new
        walk = new
    return walk


def apply(word: MappingWord, curve: C.CurveClass) -> C.CurveClass:
    return word.apply_to(curve)


# -- token and word constructors -------------------------------------------------


def twist(scheme: PolygonScheme, family: str, index: int = 0,
          exponent: int = 1) -> MappingWord:
    curve = C.named_curve(scheme, family, index)
    label = f"{family.upper()}{index}" if family in ("a", "b", "c") else family.upper()
    return MappingWord(scheme, (Token("twist", curve, exponent, label),))


def twist_about(scheme: PolygonScheme, curve: C.CurveClass,
                exponent: int = 1, label: str = "D") -> MappingWord:
    return MappingWord(scheme, (Token("twist", curve, exponent, label),))


def sigma(scheme: PolygonScheme, exponent: int = 1) -> MappingWord:
    return MappingWord(scheme, (Token("sigma", None, exponent, "S"),))


def tau(scheme: PolygonScheme) -> MappingWord:
    return MappingWord(scheme, (Token("tau", None, 1, "T"),))


def identity_word(scheme: PolygonScheme) -> MappingWord:
    return MappingWord(scheme, ())


_TOKEN_RE = re.compile(r"([ABC])(\d+)|([EFST])")


def parse_word(scheme: PolygonScheme, text: str) -> MappingWord:
    """Parse the CLI word grammar, e.g. ``B1*B5^-1*B6^-1`` or ``S^3*T``."""
    tokens = []
    pos = 0
    text = text.strip()
    if text in ("", "1"):
        return identity_word(scheme)
    for piece in text.split("*"):
        piece = piece.strip()
        at = text.find(piece, pos)
        if not piece:
            raise WordParseError("empty token", at)
        body, _, exp_text = piece.partition("^")
        exponent = 1
        if exp_text:
            try:
                exponent = int(exp_text)
            except ValueError:
                raise WordParseError(f"bad exponent {exp_text!r}", at)
        mo = _TOKEN_RE.fullmatch(body.strip())
        if mo is None:
            raise WordParseError(f"bad token {body!r}", at)
        if mo.group(1):
            fam, idx = mo.group(1).lower(), int(mo.group(2))
            if exponent != 0:
                tokens.append(twist(scheme, fam, idx, exponent).tokens[0])
        else:
            letter = mo.group(3)
            if letter in ("E", "F"):
                if exponent != 0:
                    tokens.append(twist(scheme, letter.lower(),
                                        exponent=exponent).tokens[0])
            elif letter == "S":
                if exponent % scheme.n_sides != 0:
                    tokens.append(Token("sigma", None, exponent, "S"))
            else:
                if exponent % 2 != 0:
                    tokens.append(Token("tau", None, 1, "T"))
                elif exponent < 0:
                    raise WordParseError("tau takes no negative exponent", at)
        pos = at + len(piece)
    return MappingWord(scheme, tokens)


# -- calibrated reflection --------------------------------------------------------

_tau_cache: dict = {}


def calibrated_tau(scheme: PolygonScheme) -> DartPermutation:
    """The reflection fixing b_0 (and squaring tau*B0 to the identity)."""
    if scheme.genus in _tau_cache:
        return _tau_cache[scheme.genus]
    b0 = C.named_curve(scheme, "b", 0)
    fixers = []
    for refl in scheme.all_reflections():
        image = tuple(refl.letter_image(x) for x in b0.walk)
        if W.canonical_key(image, scheme) == b0.key:
            fixers.append(refl)
    if not fixers:
        raise C.CurveError("no polygon reflection fixes b_0; transcription wrong")
    _tau_cache[scheme.genus] = fixers[0]
    if len(fixers) > 1:
        # disambiguate by the torsion identity (tau B0)^2 = 1
        for refl in fixers:
            _tau_cache[scheme.genus] = refl
            word = (tau(scheme) * twist(scheme, "b", 0)).power(2)
            if is_identity(word).verdict == "identity":
                return refl
        del _tau_cache[scheme.genus]
        raise C.CurveError("no reflection fixing b_0 satisfies (tau B0)^2 = 1")
    return _tau_cache[scheme.genus]


def dihedral_symmetries(scheme: PolygonScheme):
    """(sigma, tau) as dart permutations; sigma shifts sides by one."""
    return scheme.rotation(1), calibrated_tau(scheme)


# -- certificates ------------------------------------------------------------------


@dataclass(frozen=True)
class MappingClassCertificate:
    verdict: str  # "identity" | "non-identity"
    witness: object = None

    def __bool__(self):
        return self.verdict == "identity"


def probe_curves(scheme: PolygonScheme):
    """The named filling family used by the identity certificate."""
    probes = []
    for fam in ("a", "b") + (("c",) if scheme.genus == 3 else ()):
        for i in range(scheme.n_sides):
            probes.append((f"{fam}{i}", C.named_curve(scheme, fam, i)))
    return probes


def homology_rep(word: MappingWord):
    """Induced matrix on the a-curve homology basis, and the orientation
    character (-1)^{#tau}."""
    scheme = word.scheme
    sd = C.symplectic_data(scheme)
    cols = []
    for base in sd.basis_walks:
        image = apply_to_walk(scheme, word.tokens, base)
        cols.append(sd.coords(image))
    n = len(cols)
    matrix = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    return matrix, word.orientation_character


def _identity_matrix(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def is_identity(word: MappingWord) -> MappingClassCertificate:
    scheme = word.scheme
    for name, probe in probe_curves(scheme):
        image = word.apply_to(probe)
        if image.key != probe.key:
            return MappingClassCertificate(
                "non-identity", {"probe": name, "image_walk": image.walk})
    matrix, char = homology_rep(word)
    if char != 1:
        return MappingClassCertificate("non-identity",
                                       {"orientation_character": char})
    if matrix != _identity_matrix(len(matrix)):
        return MappingClassCertificate("non-identity", {"homology": matrix})
    return MappingClassCertificate("identity",
                                   {"probes": len(probe_curves(scheme)),
                                    "homology": "identity",
                                    "character": 1})


def classes_equal(v: MappingWord, w: MappingWord) -> bool:
    return is_identity(v * w.inverse()).verdict == "identity"


def _mat_mul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
                 for i in range(n))


def order_of(word: MappingWord, bound: int):
    """Least k <= bound with word^k trivial, else None.

    Homology powers prune first: if no k <= bound kills the matrix and the
    character, the class has order beyond the bound (in particular infinite
    order for growing transvection powers) and no probing is needed.
    """
    if bound < 1:
        raise ValueError("bound must be positive")
    matrix, char = homology_rep(word)
    ident = _identity_matrix(len(matrix))
    candidates = []
    acc = ident
    for k in range(1, bound + 1):
        acc = _mat_mul(acc, matrix)
        if acc == ident and (char == 1 or k % 2 == 0):
            candidates.append(k)
    for k in candidates:
        if is_identity(word.power(k)).verdict == "identity":
            return k
    return None
