"""Chord-diagram engine: embedded placement, intersection counts, twist splicing.

Curves are placed inside the polygon as straight chords between exact
rational boundary points (polygon vertices are exact rational points on the
unit circle, so no three boundary points are collinear).  A placement is a
choice, per glued edge, of the order of the curve's passages along it; chords
of one curve cross exactly when their endpoints interleave on the boundary,
so the curve is embedded exactly when a placement with no same-strand
interleaving exists.  `embeddable` searches the minimal-word orbit for such a
placement by backtracking over per-edge orders:

  * success certifies the class simple and yields an embedded diagram;
  * exhaustion certifies it non-simple, because a simple class has an
    embedded representative that is also minimal against the skeleton, and
    its crossing word (some orbit member) admits its placement.

Overlays put two embedded placements together; the only reduction needed is
the bigon move: two crossings joined by two crossing-free arcs whose loop is
null-homotopic cancel, rerouting the longer-lettered arc along the other
(exact, since the kept side is completely crossing-free).  For embedded
curves an innermost bigon always has crossing-free sides, so the move
fixpoint is minimal position and the surviving count is the geometric
intersection number.

Twists are word surgery on the minimal overlay: each surviving crossing of x
with d inserts a based copy of d's word, directed by the crossing sign and
the global handedness constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from . import words as W
from .scheme import PolygonScheme, side_for_letter


class GenericityError(RuntimeError):
    pass


class EngineStuck(RuntimeError):
    pass


# Global splice direction giving the right-hand twist convention; calibrated
# against the lantern relation, whose guard test fails if this flips.
HANDEDNESS = -1

_SOLVER_NODE_CAP = 400_000
_OVERLAY_RETRIES = 12


# -- exact polygon geometry ----------------------------------------------------


@lru_cache(maxsize=None)
def polygon_vertices(n: int):
    """Exact rational points on the unit circle near the regular n-gon corners."""
    pts = []
    for k in range(n):
        if 2 * k == n:
            pts.append((Fraction(-1), Fraction(0)))
            continue
        r = Fraction(round(math.tan(math.pi * k / n) * 10**6), 10**6)
        den = 1 + r * r
        pts.append(((1 - r * r) / den, 2 * r / den))
    for i in range(n):
        a, b, c = pts[i], pts[(i + 1) % n], pts[(i + 2) % n]
        turn = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        if turn <= 0:
            raise GenericityError("polygon vertices not strictly convex")
    return tuple(pts)


def boundary_point(scheme: PolygonScheme, side: int, t: Fraction):
    verts = polygon_vertices(scheme.n_sides)
    a = verts[side % scheme.n_sides]
    b = verts[(side + 1) % scheme.n_sides]
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def _interleaved(a1, a2, b1, b2):
    lo, hi = (a1, a2) if a1 < a2 else (a2, a1)
    return (lo < b1 < hi) != (lo < b2 < hi)


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _segment_params(p0, p1, q0, q1):
    dp = (p1[0] - p0[0], p1[1] - p0[1])
    dq = (q1[0] - q0[0], q1[1] - q0[1])
    den = _cross(dp, dq)
    if den == 0:
        raise GenericityError("degenerate chord pair")
    w = (q0[0] - p0[0], q0[1] - p0[1])
    return _cross(w, dq) / den, _cross(w, dp) / den, (1 if den > 0 else -1)


# -- embedded placement search ---------------------------------------------------

# A passage k of a walk is its k-th crossing; its position along the glued
# edge is the "edge coordinate".  The exit endpoint of passage k and the
# entry endpoint it becomes after gluing sit at chart parameters that are
# monotone in the edge coordinate: ascending on the original side copy,
# descending on the opposite copy.  Endpoint keys below only need the order.


def _chord_endpoints(scheme, word):
    """Per chord k: ((side, passage, asc), (side, passage, asc)) endpoint specs."""
    m = scheme.m
    L = len(word)
    out = []
    for k in range(L):
        prev, cur = word[k - 1], word[k]
        c_prev, c_cur = abs(prev) - 1, abs(cur) - 1
        if prev > 0:  # exited side c at ec; entry at side c+m, param 1-ec
            start = (c_prev + m, (k - 1) % L, False)
        else:  # exited side c+m at 1-ec; entry at side c, param ec
            start = (c_prev, (k - 1) % L, True)
        if cur > 0:
            end = (c_cur, k, True)
        else:
            end = (c_cur + m, k, False)
        out.append((start, end))
    return out


def _solve_embedding(scheme, word):
    """Per-edge passage orders making the straight-chord diagram embedded.

    Returns {edge_class: (passage, ...) in ascending edge coordinate} or None.
    Backtracks over per-edge orders; a pair of chords is checked as soon as
    every edge containing two of its endpoints on one side is decided.
    """
    L = len(word)
    cls = [abs(x) - 1 for x in word]
    per_edge = {}
    for k, c in enumerate(cls):
        per_edge.setdefault(c, []).append(k)
    chords = _chord_endpoints(scheme, word)

    pairs = []
    for i in range(L):
        for j in range(i + 1, L):
            eps = list(chords[i]) + list(chords[j])
            involved = set()
            sides = [e[0] for e in eps]
            for a in range(4):
                for b in range(a + 1, 4):
                    if sides[a] == sides[b]:
                        involved.add(cls[eps[a][1]])
            pairs.append((i, j, frozenset(involved)))

    edges = sorted(per_edge, key=lambda c: -len(per_edge[c]))
    rank = {}
    nodes = 0

    def endpoint_key(ep):
        side, passage, asc = ep
        r = rank[passage]
        return (side, r if asc else -r)

    def violated(i, j):
        (a1, a2), (b1, b2) = chords[i], chords[j]
        return _interleaved(endpoint_key(a1), endpoint_key(a2),
                            endpoint_key(b1), endpoint_key(b2))

    def dfs(idx, decided):
        nonlocal nodes
        if idx == len(edges):
            return True
        c = edges[idx]
        decided = decided | {c}
        ready = [(i, j) for i, j, inv in pairs if c in inv and inv <= decided]
        for perm in permutations(per_edge[c]):
            nodes += 1
            if nodes > _SOLVER_NODE_CAP:
                raise EngineStuck("embedding search exceeded node cap")
            for pos, k in enumerate(perm):
                rank[k] = pos
            if any(violated(i, j) for i, j in ready):
                continue
            if dfs(idx + 1, decided):
                return True
        for k in per_edge[c]:
            rank.pop(k, None)
        return False

    trivially_decided = frozenset(c for c in range(scheme.m) if c not in per_edge)
    base_ready = [(i, j) for i, j, inv in pairs if not inv]
    # pairs with no shared-side endpoints are decided by side order alone
    for k in range(L):
        rank[k] = 0
    if any(violated(i, j) for i, j in base_ready):
        rank.clear()
        return None
    rank.clear()
    if dfs(0, trivially_decided):
        return {c: tuple(sorted(per_edge[c], key=lambda k: rank[k]))
                for c in per_edge}
    return None


_embed_cache: dict = {}


def embeddable(scheme: PolygonScheme, word):
    """(orbit_word, per-edge orders) for an embedded placement, else None.

    `word` must be a minimal (cyclically Dehn-reduced) representative; all
    members of its conjugacy orbit are tried, which is exhaustive for the
    existence of an embedded minimal-position representative.
    """
    ck = (scheme.genus, W.min_rotation(word))
    if ck in _embed_cache:
        return _embed_cache[ck]
    result = None
    for cand in sorted(W.minimal_orbit(word, scheme)):
        orders = _solve_embedding(scheme, cand)
        if orders is not None:
            result = (cand, orders)
            break
    _embed_cache[ck] = result
    return result


# -- diagram ---------------------------------------------------------------------

# strand token: ("L", letter) or ("E", event_id, passage_index)


@dataclass
class Event:
    ident: int
    sign: int  # orientation of (passage-0 chord, passage-1 chord)
    strands: tuple


class JointDiagram:
    def __init__(self, scheme, strands, events):
        self.scheme = scheme
        self.strands = strands
        self.events = events

    # -- construction -------------------------------------------------------

    @classmethod
    def build_embedded(cls, scheme: PolygonScheme, placements, seed: int = 0):
        """Diagram from (word, per-edge orders) placements; no self-crossings."""
        merged = {}  # edge class -> [(strand, passage), ...] ascending
        for c in range(scheme.m):
            bucket = []
            for i, (word, orders) in enumerate(placements):
                for k in orders.get(c, ()):
                    bucket.append((i, k))
            if seed and len(bucket) > 1:
                cut = seed % len(bucket)
                # rotate the relative interleaving of strands, order-preserving
                by_strand = {}
                for i, k in bucket:
                    by_strand.setdefault(i, []).append((i, k))
                order = sorted(by_strand, key=lambda i: (i + cut) % (len(by_strand) or 1))
                bucket = [item for i in order for item in by_strand[i]]
            merged[c] = bucket

        ecoord = {}
        for c, bucket in merged.items():
            total = len(bucket)
            for pos, (i, k) in enumerate(bucket):
                ecoord[(i, k)] = Fraction(2 * pos + 1 + (seed % 3), 2 * total + 3)

        words = [w for w, _ in placements]
        params = []
        for i, word in enumerate(words):
            ps = []
            for k, letter in enumerate(word):
                ec = ecoord[(i, k)]
                ps.append(ec if letter > 0 else 1 - ec)
            params.append(ps)
        return cls._assemble(scheme, words, params)

    @classmethod
    def build_generic(cls, scheme: PolygonScheme, strand_words, seed: int = 0):
        """Diagram at pseudo-random parameters (used for signed counts only)."""
        den = 2**19 - 1
        used = set()
        params = []
        for i, word in enumerate(strand_words):
            ps = []
            for k, letter in enumerate(word):
                side = side_for_letter(scheme, letter)
                h = (k * 2654435761 + (seed * 977 + i) * 40503 + 9176) % (den - 2) + 1
                while (side % scheme.m, min(h, den - h)) in used:
                    h = h % (den - 2) + 1
                used.add((side % scheme.m, min(h, den - h)))
                ps.append(Fraction(h, den))
            params.append(ps)
        return cls._assemble(scheme, strand_words, params)

    @classmethod
    def _assemble(cls, scheme, strand_words, params):
        for word in strand_words:
            if not word:
                raise ValueError("cannot draw an empty walk")
            for k, x in enumerate(word):
                if x == -word[k - 1]:
                    raise ValueError("walk is not freely reduced")
        chords = []
        for i, word in enumerate(strand_words):
            for k in range(len(word)):
                s_prev = side_for_letter(scheme, word[k - 1])
                s_start, t_start = scheme.glue_point(s_prev, params[i][k - 1])
                s_end, t_end = side_for_letter(scheme, word[k]), params[i][k]
                chords.append((i, k, (s_start, t_start), (s_end, t_end),
                               boundary_point(scheme, s_start, t_start),
                               boundary_point(scheme, s_end, t_end)))

        events = {}
        on_chord = {}
        next_id = 0
        for a in range(len(chords)):
            ia, ka, a0, a1, pa0, pa1 = chords[a]
            for b in range(a + 1, len(chords)):
                ib, kb, b0, b1, pb0, pb1 = chords[b]
                if not _interleaved(a0, a1, b0, b1):
                    continue
                s, u, sign = _segment_params(pa0, pa1, pb0, pb1)
                if not (0 < s < 1 and 0 < u < 1):
                    raise GenericityError("crossing parameter out of range")
                events[next_id] = Event(next_id, sign, (ia, ib))
                on_chord.setdefault((ia, ka), []).append((s, next_id, 0))
                on_chord.setdefault((ib, kb), []).append((u, next_id, 1))
                next_id += 1

        strands = []
        for i, word in enumerate(strand_words):
            toks = []
            for k in range(len(word)):
                here = sorted(on_chord.get((i, k), []))
                for j in range(len(here) - 1):
                    if here[j][0] == here[j + 1][0]:
                        raise GenericityError("concurrent crossings on a chord")
                toks.extend(("E", ev, pi) for _, ev, pi in here)
                toks.append(("L", word[k]))
            strands.append(toks)
        return cls(scheme, strands, events)

    # -- queries ------------------------------------------------------------

    def letters(self, strand_idx):
        return tuple(t[1] for t in self.strands[strand_idx] if t[0] == "L")

    def self_event_ids(self):
        return [e for e, ev in self.events.items() if ev.strands[0] == ev.strands[1]]

    def pair_event_ids(self):
        return [e for e, ev in self.events.items() if ev.strands[0] != ev.strands[1]]

    def _passage_pos(self, event_id, passage):
        s = self.events[event_id].strands[passage]
        for pos, tok in enumerate(self.strands[s]):
            if tok == ("E", event_id, passage):
                return s, pos
        raise KeyError((event_id, passage))

    def _span(self, strand_idx, pos_from, pos_to):
        toks = self.strands[strand_idx]
        L = len(toks)
        out = []
        i = (pos_from + 1) % L
        while i != pos_to:
            out.append(toks[i])
            i = (i + 1) % L
        return out

    @staticmethod
    def _span_word(span):
        return tuple(t[1] for t in span if t[0] == "L")

    @staticmethod
    def _span_empty(span):
        return all(t[0] == "L" for t in span)

    def _null(self, word, cache):
        word = W.free_reduce(word)
        if word in cache:
            return cache[word]
        counts = [0] * self.scheme.m
        for x in word:
            counts[abs(x) - 1] += 1 if x > 0 else -1
        plausible = all(v == (counts[0] if c % 2 == 0 else -counts[0])
                        for c, v in enumerate(counts))
        res = W.is_null(word, self.scheme) if plausible else False
        cache[word] = res
        return res

    def _empty_arcs(self, event_p, event_q):
        """Crossing-free arcs joining a passage of p to a passage of q.

        Yields (pi, qi, word_read_p_to_q, (strand, span_from, span_to, rev)).
        """
        for pi in (0, 1):
            sp, pp = self._passage_pos(event_p, pi)
            for qi in (0, 1):
                if event_p == event_q and pi == qi:
                    continue
                sq, pq = self._passage_pos(event_q, qi)
                if sp != sq:
                    continue
                fwd = self._span(sp, pp, pq)
                if self._span_empty(fwd):
                    yield (pi, qi, self._span_word(fwd), (sp, pp, pq, False))
                bwd = self._span(sp, pq, pp)
                if self._span_empty(bwd):
                    yield (pi, qi, W.inverse(self._span_word(bwd)), (sp, pq, pp, True))

    # -- bigon reduction ------------------------------------------------------

    def _delete_positions(self, strand_idx, positions):
        self.strands[strand_idx] = [
            t for i, t in enumerate(self.strands[strand_idx]) if i not in positions]

    def _cyclic_range(self, strand_idx, start, end):
        L = len(self.strands[strand_idx])
        out = set()
        i = (start + 1) % L
        while i != end:
            out.add(i)
            i = (i + 1) % L
        return out

    def _try_bigon(self, cache) -> bool:
        ids = sorted(self.events)
        for i, p in enumerate(ids):
            for q in ids[i + 1:]:
                arcs = list(self._empty_arcs(p, q))
                for pi, qi, word1, ref1 in arcs:
                    for pj, qj, word2, ref2 in arcs:
                        if pj != 1 - pi or qj != 1 - qi:
                            continue
                        if ref1[:3] == ref2[:3]:
                            continue
                        if not self._null(word1 + W.inverse(word2), cache):
                            continue
                        self._apply_bigon(p, q, (word1, ref1), (word2, ref2))
                        return True
        return False

    def _apply_bigon(self, p, q, arc1, arc2):
        word1, ref1 = arc1
        word2, ref2 = arc2
        if len(word1) >= len(word2):
            (s, start, end, rev), path = ref1, word2
        else:
            (s, start, end, rev), path = ref2, word1
        new_letters = W.inverse(path) if rev else path
        doomed = self._cyclic_range(s, start, end) | {start, end}
        toks = self.strands[s]
        new = []
        for i in range(len(toks)):
            if i == start:
                new.extend(("L", x) for x in new_letters)
            if i not in doomed:
                new.append(toks[i])
        self.strands[s] = new
        for ev in (p, q):
            for pi in (0, 1):
                try:
                    si, pos = self._passage_pos(ev, pi)
                except KeyError:
                    continue
                self._delete_positions(si, {pos})
        del self.events[p]
        del self.events[q]

    def reduce(self, cache=None):
        """Cancel bigons to a fixpoint; with embedded strands this reaches
        minimal position of the multicurve."""
        cache = cache if cache is not None else {}
        if self.self_event_ids():
            raise EngineStuck("reduce expects embedded strands")
        while self.events and self._try_bigon(cache):
            pass
        return self


# -- public operations -------------------------------------------------------------


def is_simple_word(word, scheme: PolygonScheme) -> bool:
    """Whether the class of `word` is an embedded (simple) curve."""
    return embeddable(scheme, W.cyclic_dehn_reduce(word, scheme)) is not None


def minimal_overlay(word_x, word_d, scheme: PolygonScheme, cache=None) -> JointDiagram:
    """Joint minimal position of two simple curves (strands 0 and 1)."""
    placements = []
    for w in (word_x, word_d):
        placed = embeddable(scheme, W.cyclic_dehn_reduce(w, scheme))
        if placed is None:
            raise EngineStuck("overlay requires simple curve classes")
        placements.append(placed)
    last = None
    for seed in range(_OVERLAY_RETRIES):
        try:
            dg = JointDiagram.build_embedded(scheme, placements, seed=seed)
            return dg.reduce(cache)
        except GenericityError as exc:
            last = exc
    raise EngineStuck(f"no generic interleaving of the overlay: {last}")


def pair_intersection(word_x, word_y, scheme: PolygonScheme, cache=None) -> int:
    return len(minimal_overlay(word_x, word_y, scheme, cache).pair_event_ids())


def algebraic_pairing(word_x, word_y, scheme: PolygonScheme) -> int:
    """Signed crossing sum of any transverse position; isotopy invariant."""
    for seed in range(_OVERLAY_RETRIES):
        try:
            dg = JointDiagram.build_generic(scheme, [word_x, word_y], seed=seed)
        except GenericityError:
            continue
        return sum(ev.sign for ev in dg.events.values() if ev.strands == (0, 1))
    raise EngineStuck("could not place curves generically")


def twist_spliced_word(word_x, word_d, scheme: PolygonScheme,
                       power: int = 1, cache=None):
    """Crossing word of the twist image of x about d, to the given power."""
    current = tuple(word_x)
    step = 1 if power > 0 else -1
    for _ in range(abs(power)):
        current = _twist_once(current, word_d, scheme, step, cache)
    return current


def _twist_once(word_x, word_d, scheme, step, cache):
    dg = minimal_overlay(word_x, word_d, scheme, cache)
    d_toks = dg.strands[1]
    block_from = {}
    for pos, tok in enumerate(d_toks):
        if tok[0] != "E":
            continue
        seq = []
        i = (pos + 1) % len(d_toks)
        while i != pos:
            if d_toks[i][0] == "L":
                seq.append(d_toks[i][1])
            i = (i + 1) % len(d_toks)
        block_from[(tok[1], tok[2])] = tuple(seq)
    out = []
    for tok in dg.strands[0]:
        if tok[0] == "L":
            out.append(tok[1])
            continue
        ev = dg.events[tok[1]]
        block = block_from[(tok[1], 1 - tok[2])]
        direction = HANDEDNESS * ev.sign * step
        out.extend(block if direction > 0 else W.inverse(block))
    return W.cyclic_free_reduce(tuple(out))
