"""Demand-driven order isomorphisms between countable dense linear orders.

An OrderSpec describes a countable linear order operationally: membership,
strict comparison, a deterministic enumeration, and enumeration of the
elements strictly inside a gap in that same canonical order.  A LazyIso
holds a growing finite partial isomorphism between two specs and extends
it on demand: evaluating at a fresh point inserts the admissible partner
of least index in the other spec's own enumeration (back-and-forth, made
deterministic).  Constraint hooks restrict admissibility — label
preservation and setwise stabilization — and may route the candidate
search to a denser sub-stream.

All element values are immutable; a LazyIso mutates only its memo, so one
instance must not be shared between concurrent evaluations.
"""

from __future__ import annotations

import heapq
import itertools
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterator, Optional

from .ratcore import (
    Colour,
    Rat,
    RatInterval,
    colour,
    enumerated_in_interval,
    intersect_intervals,
    interval_rationals,
    nth_rational,
    rat_index,
    rationals,
)

FAULT_CAP = 100_000


class Marker(Enum):
    """Adjoined endpoint elements for index orders; always coloured blue."""
    MIN = "min"
    MAX = "max"

    def __str__(self):
        return "-end" if self is Marker.MIN else "+end"


def _cantor(i: int, j: int) -> int:
    return (i + j) * (i + j + 1) // 2 + j


# ---------------------------------------------------------------------------
# order descriptions
# ---------------------------------------------------------------------------

class OrderSpec:
    """Operational description of a countable linear order."""

    has_min = False
    has_max = False
    min_el = None
    max_el = None

    def contains(self, el) -> bool:
        raise NotImplementedError

    def less(self, a, b) -> bool:
        raise NotImplementedError

    def enum(self) -> Iterator:
        """This order's own deterministic enumeration."""
        raise NotImplementedError

    def enum_in_gap(self, lo, hi) -> Iterator:
        """Elements strictly between lo and hi (None = unbounded side), in
        the order of enum()."""
        raise NotImplementedError

    def colour_label(self, el) -> Optional[Colour]:
        return None

    def format_el(self, el) -> str:
        return str(el)

    def index_of(self, el) -> int:
        """Position in enum() (used by product orders)."""
        raise NotImplementedError


class FullQ(OrderSpec):
    def contains(self, el):
        return isinstance(el, Fraction)

    def less(self, a, b):
        return a < b

    def enum(self):
        return rationals()

    def enum_in_gap(self, lo, hi):
        return enumerated_in_interval(lo, hi)

    def index_of(self, el):
        return rat_index(el)

    def __repr__(self):
        return "FullQ"


class ColouredQ(OrderSpec):
    """The rationals with the dense two-colouring, optionally with adjoined
    blue endpoints.  Endpoints enumerate first, so any constrained iso pins
    them immediately."""

    def __init__(self, with_min=False, with_max=False):
        self.with_min = with_min
        self.with_max = with_max
        self.has_min = with_min
        self.has_max = with_max
        self.min_el = Marker.MIN if with_min else None
        self.max_el = Marker.MAX if with_max else None

    def contains(self, el):
        if el is Marker.MIN:
            return self.with_min
        if el is Marker.MAX:
            return self.with_max
        return isinstance(el, Fraction)

    def less(self, a, b):
        if a is Marker.MIN:
            return b is not Marker.MIN
        if a is Marker.MAX:
            return False
        if b is Marker.MIN:
            return False
        if b is Marker.MAX:
            return True
        return a < b

    def _markers(self):
        out = []
        if self.with_min:
            out.append(Marker.MIN)
        if self.with_max:
            out.append(Marker.MAX)
        return out

    def enum(self):
        return itertools.chain(self._markers(), rationals())

    def enum_in_gap(self, lo, hi):
        for m in self._markers():
            if (lo is None or self.less(lo, m)) and (hi is None or self.less(m, hi)):
                yield m
        rlo = None if (lo is None or lo is Marker.MIN) else lo
        rhi = None if (hi is None or hi is Marker.MAX) else hi
        if lo is Marker.MAX or hi is Marker.MIN:
            return
        yield from enumerated_in_interval(rlo, rhi)

    def colour_label(self, el):
        if isinstance(el, Marker):
            return Colour.BLUE
        return colour(el)

    def index_of(self, el):
        markers = self._markers()
        if isinstance(el, Marker):
            return markers.index(el)
        return len(markers) + rat_index(el)

    def __repr__(self):
        tags = [t for t, on in (("min", self.with_min), ("max", self.with_max)) if on]
        return "ColouredQ(%s)" % ",".join(tags) if tags else "ColouredQ"


class QMinusFinite(OrderSpec):
    def __init__(self, excluded):
        self.excluded = frozenset(excluded)

    def contains(self, el):
        return isinstance(el, Fraction) and el not in self.excluded

    def less(self, a, b):
        return a < b

    def enum(self):
        return (x for x in rationals() if x not in self.excluded)

    def enum_in_gap(self, lo, hi):
        return (x for x in enumerated_in_interval(lo, hi)
                if x not in self.excluded)

    def index_of(self, el):
        return rat_index(el) - sum(
            1 for e in self.excluded if rat_index(e) < rat_index(el))

    def __repr__(self):
        return f"QMinusFinite({sorted(self.excluded)})"


def _kmerge(*gens):
    # merge generators of (key, value) pairs, each ascending by key
    heap = []
    counter = itertools.count()
    for g in gens:
        first = next(g, None)
        if first is not None:
            heapq.heappush(heap, (first[0], next(counter), first[1], g))
    while heap:
        key, _, val, g = heapq.heappop(heap)
        yield key, val
        nxt = next(g, None)
        if nxt is not None:
            heapq.heappush(heap, (nxt[0], next(counter), nxt[1], g))


class LexProduct(OrderSpec):
    """Lexicographic product; enumerated by the Cantor diagonal over the
    component enumerations, so index((a,b)) = cantor(ia, jb)."""

    def __init__(self, first: OrderSpec, second: OrderSpec):
        self.first = first
        self.second = second
        # lex endpoints exist only when both layers bound that side
        self.has_min = first.has_min and second.has_min
        self.has_max = first.has_max and second.has_max
        if self.has_min:
            self.min_el = (first.min_el, second.min_el)
        if self.has_max:
            self.max_el = (first.max_el, second.max_el)

    def contains(self, el):
        return (isinstance(el, tuple) and len(el) == 2
                and self.first.contains(el[0]) and self.second.contains(el[1]))

    def less(self, a, b):
        if self.first.less(a[0], b[0]):
            return True
        if self.first.less(b[0], a[0]):
            return False
        return self.second.less(a[1], b[1])

    def index_of(self, el):
        return _cantor(self.first.index_of(el[0]), self.second.index_of(el[1]))

    def enum(self):
        for _, el in self._stream_over(self.first.enum(), None, None):
            yield el

    def _second_stream(self, a, ia, lo2, hi2):
        for b in self.second.enum_in_gap(lo2, hi2):
            yield _cantor(ia, self.second.index_of(b)), (a, b)

    def _stream_over(self, a_iter, lo2, hi2):
        # all pairs whose first component comes from a_iter (ascending by
        # first-component index) and second component lies in (lo2, hi2);
        # spawn the next first-component lane when the current lane's head
        # is consumed — heads ascend because cantor is monotone in ia.
        heap = []
        counter = itertools.count()

        def load_lane():
            a = next(a_iter, None)
            if a is None:
                return
            ia = self.first.index_of(a)
            lane = self._second_stream(a, ia, lo2, hi2)
            first = next(lane, None)
            if first is None:  # pragma: no cover - gaps in dense specs
                load_lane()
                return
            heapq.heappush(heap, (first[0], next(counter), first[1], True, lane))

        load_lane()
        while heap:
            key, _, val, is_head, lane = heapq.heappop(heap)
            yield key, val
            if is_head:
                load_lane()
            nxt = next(lane, None)
            if nxt is not None:
                heapq.heappush(heap, (nxt[0], next(counter), nxt[1], False, lane))

    def enum_in_gap(self, lo, hi):
        streams = []
        a1 = lo[0] if lo is not None else None
        a2 = hi[0] if hi is not None else None
        same = (lo is not None and hi is not None
                and not self.first.less(a1, a2) and not self.first.less(a2, a1))
        if same:
            ia = self.first.index_of(a1)
            streams.append(self._second_stream(a1, ia, lo[1], hi[1]))
        else:
            if lo is not None:
                ia = self.first.index_of(a1)
                streams.append(self._second_stream(a1, ia, lo[1], None))
            if hi is not None:
                ia = self.first.index_of(a2)
                streams.append(self._second_stream(a2, ia, None, hi[1]))
            streams.append(self._stream_over(
                self.first.enum_in_gap(a1, a2), None, None))
        for _, el in _kmerge(*streams):
            yield el

    def colour_label(self, el):
        return self.first.colour_label(el[0])

    def format_el(self, el):
        return f"({self.first.format_el(el[0])},{self.second.format_el(el[1])})"

    def __repr__(self):
        return f"LexProduct({self.first!r},{self.second!r})"


class FactorOrder(OrderSpec):
    """Order-sum refinement used to factor a weakly monotone map: over each
    rational q sits either the (convex) solution interval of h(y) = q,
    tagged ('im', q, y), or the single element ('pt', q) when q has no
    solution.  Ordered lexicographically; enumerated Cantor-style."""

    def __init__(self, point_preimage: Callable[[Rat], Optional[RatInterval]]):
        self.point_preimage = point_preimage
        self._fibre_index_cache = {}

    def contains(self, el):
        if not isinstance(el, tuple):
            return False
        if el[0] == "pt":
            return self.point_preimage(el[1]) is None
        if el[0] == "im":
            fibre = self.point_preimage(el[1])
            return fibre is not None and fibre.contains(el[2])
        return False

    def less(self, a, b):
        if a[1] != b[1]:
            return a[1] < b[1]
        if a[0] == "im" and b[0] == "im":
            return a[2] < b[2]
        return False  # the fibre over one q never mixes tags

    def _fibre_elements(self, q) -> Iterator:
        fibre = self.point_preimage(q)
        if fibre is None:
            yield ("pt", q)
        else:
            for y in interval_rationals(fibre):
                yield ("im", q, y)

    def _fibre_index(self, el) -> int:
        cache = self._fibre_index_cache
        if el not in cache:
            q = el[1]
            for j, cand in enumerate(self._fibre_elements(q)):
                cache.setdefault(cand, j)
                if cand == el:
                    break
            else:  # pragma: no cover
                raise ValueError(f"not in order: {el}")
        return cache[el]

    def index_of(self, el):
        return _cantor(rat_index(el[1]), self._fibre_index(el))

    def _fibre_stream(self, q, y_lo, y_hi):
        # fibre elements over q with second coordinate strictly inside
        # (y_lo, y_hi); for 'pt' fibres only the unbounded query matches
        iq = rat_index(q)
        fibre = self.point_preimage(q)
        if fibre is None:
            if y_lo is None and y_hi is None:
                yield _cantor(iq, 0), ("pt", q)
            return
        window = intersect_intervals(fibre, RatInterval(y_lo, y_hi))
        if window is None:
            return
        for y in interval_rationals(window):
            el = ("im", q, y)
            yield self.index_of(el), el

    def _stream_over(self, q_iter):
        heap = []
        counter = itertools.count()

        def load_lane():
            while True:
                q = next(q_iter, None)
                if q is None:
                    return
                lane = self._fibre_stream(q, None, None)
                first = next(lane, None)
                if first is not None:
                    heapq.heappush(heap, (first[0], next(counter), first[1], True, lane))
                    return

        load_lane()
        while heap:
            key, _, val, is_head, lane = heapq.heappop(heap)
            yield key, val
            if is_head:
                load_lane()
            nxt = next(lane, None)
            if nxt is not None:
                heapq.heappush(heap, (nxt[0], next(counter), nxt[1], False, lane))

    def enum(self):
        for _, el in self._stream_over(rationals()):
            yield el

    def enum_in_gap(self, lo, hi):
        streams = []
        q1 = lo[1] if lo is not None else None
        q2 = hi[1] if hi is not None else None
        if lo is not None and hi is not None and q1 == q2:
            y1 = lo[2] if lo[0] == "im" else None
            y2 = hi[2] if hi[0] == "im" else None
            streams.append(self._fibre_stream(q1, y1, y2))
        else:
            if lo is not None and lo[0] == "im":
                streams.append(self._fibre_stream(q1, lo[2], None))
            if hi is not None and hi[0] == "im":
                streams.append(self._fibre_stream(q2, None, hi[2]))
            streams.append(self._stream_over(enumerated_in_interval(q1, q2)))
        for _, el in _kmerge(*streams):
            yield el

    def format_el(self, el):
        if el[0] == "pt":
            return f"pt:{el[1]}"
        return f"im:{el[1]}@{el[2]}"

    def __repr__(self):
        return "FactorOrder"


class RedPoints(OrderSpec):
    """Suborder of the red elements of a coloured spec (dense, endpoint-free:
    adjoined endpoints are blue by construction)."""

    def __init__(self, base: OrderSpec):
        self.base = base

    def contains(self, el):
        return self.base.contains(el) and self.base.colour_label(el) == Colour.RED

    def less(self, a, b):
        return self.base.less(a, b)

    def enum(self):
        return (el for el in self.base.enum()
                if self.base.colour_label(el) == Colour.RED)

    def enum_in_gap(self, lo, hi):
        return (el for el in self.base.enum_in_gap(lo, hi)
                if self.base.colour_label(el) == Colour.RED)

    def colour_label(self, el):
        return Colour.RED

    def format_el(self, el):
        return self.base.format_el(el)

    def __repr__(self):
        return f"RedPoints({self.base!r})"


class SuborderOfCert(OrderSpec):
    """A suborder carved out of a certified generic embedding's structure;
    the certificate supplies the oracles, this class only adapts them."""

    def __init__(self, name, contains, less, enum_in_gap, colour_label=None,
                 format_el=None, has_min=False, has_max=False,
                 min_el=None, max_el=None):
        self.name = name
        self._contains = contains
        self._less = less
        self._enum_in_gap = enum_in_gap
        self._colour_label = colour_label
        self._format_el = format_el
        self.has_min = has_min
        self.has_max = has_max
        self.min_el = min_el
        self.max_el = max_el

    def contains(self, el):
        return self._contains(el)

    def less(self, a, b):
        return self._less(a, b)

    def enum(self):
        return self._enum_in_gap(None, None)

    def enum_in_gap(self, lo, hi):
        return self._enum_in_gap(lo, hi)

    def colour_label(self, el):
        return self._colour_label(el) if self._colour_label else None

    def format_el(self, el):
        return self._format_el(el) if self._format_el else str(el)

    def __repr__(self):
        return f"SuborderOfCert({self.name})"


# ---------------------------------------------------------------------------
# constraints
# ---------------------------------------------------------------------------

class ConstraintViolation(ValueError):
    """A seed pair breaks a named constraint."""


class Constraint:
    name = "constraint"

    def admissible(self, x, y) -> bool:
        raise NotImplementedError

    def candidate_stream(self, x, lo, hi, side):
        """Optional routing: a denser stream of candidates for the partner
        of x within the (lo, hi) gap on the given side ('target' for
        forward evaluation, 'source' for backward).  None defers to the
        spec's own gap enumeration."""
        return None


class LabelConstraint(Constraint):
    """Preserve a unary label, e.g. colour or a class index."""

    def __init__(self, name, source_label, target_label):
        self.name = name
        self.source_label = source_label
        self.target_label = target_label

    def admissible(self, x, y):
        return self.source_label(x) == self.target_label(y)


class SetStabilization(Constraint):
    """Keep a decidable set invariant: members pair with members,
    non-members with non-members.  Member candidates are routed through
    the set's own in-gap enumeration, which realizes 'map to the
    least-index point of the set in the correct gap'."""

    def __init__(self, name, source_member, target_member,
                 source_in_gap=None, target_in_gap=None):
        self.name = name
        self.source_member = source_member
        self.target_member = target_member
        self.source_in_gap = source_in_gap
        self.target_in_gap = target_in_gap

    def admissible(self, x, y):
        return self.source_member(x) == self.target_member(y)

    def candidate_stream(self, x, lo, hi, side):
        if side == "target":
            if self.source_member(x) and self.target_in_gap is not None:
                return self.target_in_gap(lo, hi)
        else:
            if self.target_member(x) and self.source_in_gap is not None:
                return self.source_in_gap(lo, hi)
        return None


# ---------------------------------------------------------------------------
# the engine
# ---------------------------------------------------------------------------

class LazyIso:
    """Growing partial isomorphism between two OrderSpecs.

    The memo is a list of pairs sorted by the source order (hence also by
    the target order), plus both lookup directions.  Every evaluation
    either hits the memo or inserts one new pair chosen deterministically.
    """

    def __init__(self, source: OrderSpec, target: OrderSpec, seed=(),
                 constraints=()):
        self.source = source
        self.target = target
        self.constraints = tuple(constraints)
        self._pairs = []  # sorted by source order
        self._fwd = {}
        self._bwd = {}
        if source.has_min != target.has_min or source.has_max != target.has_max:
            raise ValueError("endpoint-incompatible order specs")
        endpoint_pairs = []
        if source.has_min:
            endpoint_pairs.append((source.min_el, target.min_el))
        if source.has_max:
            endpoint_pairs.append((source.max_el, target.max_el))
        for x, y in itertools.chain(endpoint_pairs, seed):
            self._insert_seed(x, y)

    def _insert_seed(self, x, y):
        if x in self._fwd:
            if self._fwd[x] != y:
                raise ConstraintViolation(f"seed conflict at {self.source.format_el(x)}")
            return
        if not self.source.contains(x) or not self.target.contains(y):
            raise ConstraintViolation(
                f"seed pair outside orders: {self.source.format_el(x)} -> "
                f"{self.target.format_el(y)}")
        for c in self.constraints:
            if not c.admissible(x, y):
                raise ConstraintViolation(
                    f"seed pair {self.source.format_el(x)} -> "
                    f"{self.target.format_el(y)} violates {c.name}")
        i = self._locate(x, key_idx=0, less=self.source.less)
        # order-compatibility with both neighbours
        if i > 0 and not self.target.less(self._pairs[i - 1][1], y):
            raise ConstraintViolation(
                f"seed not order-preserving at {self.source.format_el(x)}")
        if i < len(self._pairs) and not self.target.less(y, self._pairs[i][1]):
            raise ConstraintViolation(
                f"seed not order-preserving at {self.source.format_el(x)}")
        self._pairs.insert(i, (x, y))
        self._fwd[x] = y
        self._bwd[y] = x

    def _locate(self, el, key_idx, less):
        lo, hi = 0, len(self._pairs)
        while lo < hi:
            mid = (lo + hi) // 2
            if less(self._pairs[mid][key_idx], el):
                lo = mid + 1
            else:
                hi = mid
        return lo

    def _extend(self, el, side):
        # side 'target': el is a source point needing an image; 'source':
        # el is a target point needing a preimage
        if side == "target":
            key_idx, val_idx = 0, 1
            less, other = self.source.less, self.target
        else:
            key_idx, val_idx = 1, 0
            less, other = self.target.less, self.source
        i = self._locate(el, key_idx, less)
        lo = self._pairs[i - 1][val_idx] if i > 0 else None
        hi = self._pairs[i][val_idx] if i < len(self._pairs) else None

        stream = None
        for c in self.constraints:
            stream = c.candidate_stream(el, lo, hi, side)
            if stream is not None:
                break
        if stream is None:
            stream = other.enum_in_gap(lo, hi)

        ok = ((lambda x, y: all(c.admissible(x, y) for c in self.constraints))
              if side == "target"
              else (lambda y, x: all(c.admissible(x, y) for c in self.constraints)))
        for steps, cand in enumerate(stream):
            if steps > FAULT_CAP:
                break
            if not other.contains(cand):
                continue
            if ok(el, cand):
                if side == "target":
                    pair = (el, cand)
                else:
                    pair = (cand, el)
                self._pairs.insert(i, pair)
                self._fwd[pair[0]] = pair[1]
                self._bwd[pair[1]] = pair[0]
                return cand
        raise RuntimeError(
            "back-and-forth search exhausted; specs are not dense-compatible "
            "under the given constraints")

    def eval_fwd(self, x):
        if x in self._fwd:
            return self._fwd[x]
        if not self.source.contains(x):
            raise ValueError(f"not in source order: {x!r}")
        return self._extend(x, "target")

    def eval_bwd(self, y):
        if y in self._bwd:
            return self._bwd[y]
        if not self.target.contains(y):
            raise ValueError(f"not in target order: {y!r}")
        return self._extend(y, "source")

    def memo_pairs(self):
        return tuple(self._pairs)

    def memo_dump(self) -> str:
        return ", ".join(
            f"{self.source.format_el(x)} -> {self.target.format_el(y)}"
            for x, y in self._pairs)


def build(source, target, seed=(), constraints=()) -> LazyIso:
    """Seeded constrained iso; seeds violating a constraint are rejected
    with the constraint named."""
    return LazyIso(source, target, seed=seed, constraints=constraints)
