"""Finite-rank ordered abelian groups of exponents, and cut positions in them.

Two group kinds are supported:

* lexicographic QQ^n (coordinate 0 most significant),
* weighted: QQ^n order-embedded in the reals by q |-> sum q_i * w_i for
  positive, pairwise QQ-linearly independent weights w_i in Q(sqrt(d)).

A *position* (GroupCut) is a point of the order completion: below all
elements, above all, exactly at an element, immediately above/below an
element, or an edge of a coset g + H_k of a standard convex subgroup
H_k = {0}^k x QQ^(n-k).  Positions are encoded as nudge-terminated keys so
that one entrywise comparison decides the order of any two of them and of
any element against any of them.

Final segments of the group are represented by their boundary position:
S = {g : g > boundary}.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .coeff import QuadExt, rational_between

LOWER = -1
UPPER = 1

LEX = "lex"
WEIGHTED = "weighted"

Q0 = Fraction(0)


def _side_name(side: int) -> str:
    return "upper" if side > 0 else "lower"


class ValueGroup:
    """Exponent group descriptor.  Immutable."""

    __slots__ = ("kind", "rank", "weights")

    def __init__(self, kind: str, rank: int,
                 weights: Optional[Sequence[QuadExt]] = None):
        if kind not in (LEX, WEIGHTED):
            raise ValueError(f"unknown group kind {kind!r}")
        if rank < 0:
            raise ValueError("rank must be >= 0")
        if kind == WEIGHTED:
            if rank < 1:
                raise ValueError("weighted groups need rank >= 1")
            if weights is None or len(weights) != rank:
                raise ValueError("weighted groups need one weight per rank")
            weights = tuple(QuadExt.of(w) for w in weights)
            for w in weights:
                if w.sign() <= 0:
                    raise ValueError("weights must be positive")
            for i in range(len(weights)):
                for j in range(i + 1, len(weights)):
                    # w_i, w_j dependent over QQ iff the ratio is rational
                    if (weights[i] / weights[j]).is_rational():
                        raise ValueError(
                            f"weights {i} and {j} are rationally dependent")
            self.weights = weights
        else:
            if weights is not None:
                raise ValueError("lexicographic groups take no weights")
            self.weights = None
        self.kind = kind
        self.rank = rank

    # -- identity -------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ValueGroup):
            return NotImplemented
        return (self.kind == other.kind and self.rank == other.rank
                and self.weights == other.weights)

    def __hash__(self) -> int:
        return hash((self.kind, self.rank, self.weights))

    def __repr__(self) -> str:
        if self.kind == WEIGHTED:
            ws = ",".join(str(w) for w in self.weights)
            return f"ValueGroup(weighted;{ws})"
        return f"ValueGroup(lex^{self.rank})"

    # -- elements -------------------------------------------------------------

    def elem(self, *coords) -> "GroupElem":
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        if len(coords) != self.rank:
            raise ValueError(f"need {self.rank} coordinates, got {len(coords)}")
        return GroupElem(self, tuple(Fraction(c) for c in coords))

    def zero(self) -> "GroupElem":
        return self.elem(*([0] * self.rank))

    def unit(self, i: int) -> "GroupElem":
        coords = [0] * self.rank
        coords[i] = 1
        return self.elem(*coords)

    def real_value(self, g: "GroupElem") -> QuadExt:
        if self.kind != WEIGHTED:
            raise ValueError("real_value needs a weighted group")
        out = QuadExt(0)
        for q, w in zip(g.coords, self.weights):
            out = out + w * q
        return out

    def cmp(self, g1: "GroupElem", g2: "GroupElem") -> int:
        if g1.group != self or g2.group != self:
            raise ValueError("elements from a different group")
        if self.kind == LEX:
            if g1.coords == g2.coords:
                return 0
            return 1 if g1.coords > g2.coords else -1
        return self.real_value(g1).cmp(self.real_value(g2))

    # -- positions ------------------------------------------------------------

    def minus_inf(self) -> "GroupCut":
        return GroupCut(self, "minf", ())

    def plus_inf(self) -> "GroupCut":
        return GroupCut(self, "pinf", ())

    def at(self, g: "GroupElem") -> "GroupCut":
        """The position occupied by the element itself."""
        self._own(g)
        if self.kind == WEIGHTED:
            return GroupCut(self, "key", ((self.real_value(g), 0),))
        return GroupCut(self, "key", tuple((q, 0) for q in g.coords))

    def above(self, g: "GroupElem") -> "GroupCut":
        """Position immediately above g (no element in between)."""
        return self._nudged(g, UPPER)

    def below(self, g: "GroupElem") -> "GroupCut":
        return self._nudged(g, LOWER)

    def _nudged(self, g: "GroupElem", side: int) -> "GroupCut":
        self._own(g)
        if self.rank == 0:
            return self.plus_inf() if side > 0 else self.minus_inf()
        if self.kind == WEIGHTED:
            return GroupCut(self, "key", ((self.real_value(g), side),))
        key = tuple((q, 0) for q in g.coords[:-1]) + ((g.coords[-1], side),)
        return GroupCut(self, "key", key)

    def coset_edge(self, g: "GroupElem", fixed: int, side: int) -> "GroupCut":
        """Edge of the coset of g modulo the subgroup zeroing the first
        `fixed` coordinates.  fixed=rank degenerates to above/below,
        fixed=0 to the infinities."""
        self._own(g)
        if self.kind != LEX:
            raise ValueError("coset edges exist only in lexicographic groups")
        if not 0 <= fixed <= self.rank:
            raise ValueError("fixed coordinate count out of range")
        if fixed == 0:
            return self.plus_inf() if side > 0 else self.minus_inf()
        key = tuple((q, 0) for q in g.coords[:fixed - 1]) \
            + ((g.coords[fixed - 1], side),)
        return GroupCut(self, "key", key)

    def _own(self, g: "GroupElem") -> None:
        if g.group != self:
            raise ValueError("element from a different group")

    # -- segments -------------------------------------------------------------

    def seg_empty(self) -> "FinalSegment":
        return FinalSegment(self.plus_inf())

    def seg_all(self) -> "FinalSegment":
        return FinalSegment(self.minus_inf())

    def seg_above(self, g: "GroupElem") -> "FinalSegment":
        """{x : x > g}"""
        return FinalSegment(self.above(g))

    def seg_at_least(self, g: "GroupElem") -> "FinalSegment":
        """{x : x >= g}"""
        return FinalSegment(self.below(g))


@dataclass(frozen=True)
class GroupElem:
    group: ValueGroup
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.group.rank:
            raise ValueError("coordinate count must match the group rank")

    def cmp(self, other: "GroupElem") -> int:
        return self.group.cmp(self, other)

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    def __add__(self, other: "GroupElem") -> "GroupElem":
        self.group._own(other)
        return GroupElem(self.group, tuple(a + b for a, b
                                           in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElem":
        return GroupElem(self.group, tuple(-a for a in self.coords))

    def __sub__(self, other: "GroupElem") -> "GroupElem":
        return self + (-other)

    def scale(self, q) -> "GroupElem":
        q = Fraction(q)
        return GroupElem(self.group, tuple(a * q for a in self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def sign(self) -> int:
        return self.cmp(self.group.zero())

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


class GroupCut:
    """A position in the order completion of the group.

    key encoding (lexicographic groups): a tuple of (coord, nudge) entries,
    nudges 0 except possibly on the last entry.  A full-length key with
    final nudge 0 is the position of an element; a final nudge of +/-1 on a
    key of length k is the upper/lower edge of the coset fixing the first k
    coordinates (k=rank: immediately above/below a single element).
    Weighted groups use a single (real value, nudge) entry.  Entrywise
    comparison of keys, (coord, nudge) pairs lexicographically, decides the
    order; "minf"/"pinf" sort below/above every key.
    """

    __slots__ = ("group", "kind", "key")

    def __init__(self, group: ValueGroup, kind: str, key: tuple):
        self.group = group
        self.kind = kind
        self.key = key

    # -- order ----------------------------------------------------------------

    def cmp(self, other: "GroupCut") -> int:
        if self.group != other.group:
            raise ValueError("positions in different groups")
        order = {"minf": 0, "key": 1, "pinf": 2}
        if self.kind != other.kind:
            return 1 if order[self.kind] > order[other.kind] else -1
        if self.kind != "key":
            return 0
        for (q1, s1), (q2, s2) in zip(self.key, other.key):
            c = _coord_cmp(q1, q2)
            if c:
                return c
            if s1 != s2:
                return 1 if s1 > s2 else -1
        if len(self.key) != len(other.key):
            # cannot happen: a shorter key ends in a nonzero nudge while the
            # longer continues with nudge 0 at that index
            raise AssertionError("prefix keys must differ in a nudge")
        return 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupCut):
            return NotImplemented
        return (self.group == other.group and self.kind == other.kind
                and self.key == other.key)

    def __hash__(self) -> int:
        return hash((self.kind, self.key))

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    def side_of(self, g: GroupElem) -> int:
        """-1 if g is below this position, +1 above, 0 exactly at it."""
        return -self.cmp(self.group.at(g))

    # -- structure ------------------------------------------------------------

    def is_element_position(self) -> bool:
        return self.kind == "key" and self.nudge() == 0

    def nudge(self) -> int:
        """Final nudge; 0 for element positions, sign for infinities."""
        if self.kind == "minf":
            return -1
        if self.kind == "pinf":
            return 1
        return self.key[-1][1] if self.key else 0

    def coords(self) -> tuple:
        """Key coordinates padded with zeros to full rank (lex only)."""
        if self.kind != "key" or self.group.kind != LEX:
            raise ValueError("no coordinate vector for this position")
        qs = [q for q, _ in self.key]
        qs += [Q0] * (self.group.rank - len(qs))
        return tuple(qs)

    def describe(self) -> dict:
        """Stable plain-data form for printing and JSON."""
        if self.kind == "minf":
            return {"kind": "minus_inf"}
        if self.kind == "pinf":
            return {"kind": "plus_inf"}
        if self.group.kind == WEIGHTED:
            val, s = self.key[0]
            base = {"value": str(val)}
            if s == 0:
                return {"kind": "element", **base}
            return {"kind": "above" if s > 0 else "below", **base}
        qs = [str(q) for q, _ in self.key]
        s = self.key[-1][1]
        if len(self.key) == self.group.rank:
            base = {"coords": qs}
            if s == 0:
                return {"kind": "element", **base}
            return {"kind": "above" if s > 0 else "below", **base}
        return {"kind": "coset_edge", "side": _side_name(s),
                "fixed_coords": qs}

    def __repr__(self) -> str:
        d = self.describe()
        kind = d.pop("kind")
        if not d:
            return f"<{kind}>"
        val = d.get("coords") or d.get("fixed_coords") or d.get("value")
        if kind == "coset_edge":
            return f"<coset({','.join(val)}){'+' if self.nudge() > 0 else '-'}>"
        mark = {"above": "+", "below": "-", "element": ""}[kind]
        if isinstance(val, list):
            val = ",".join(val)
        return f"<({val}){mark}>"


def _coord_cmp(q1, q2) -> int:
    if isinstance(q1, QuadExt) or isinstance(q2, QuadExt):
        return QuadExt.of(q1).cmp(QuadExt.of(q2))
    if q1 == q2:
        return 0
    return 1 if q1 > q2 else -1


@dataclass(frozen=True)
class FinalSegment:
    """Upward-closed subset {g : g > boundary} of the group."""

    boundary: GroupCut

    def __post_init__(self):
        if self.boundary.kind == "key" and self.boundary.nudge() == 0:
            raise ValueError("segment boundary must be a proper cut position")

    @property
    def group(self) -> ValueGroup:
        return self.boundary.group

    def contains(self, g: GroupElem) -> bool:
        return self.boundary.side_of(g) > 0

    def is_empty(self) -> bool:
        return self.boundary.kind == "pinf"

    def is_all(self) -> bool:
        return self.boundary.kind == "minf"

    def subset_of(self, other: "FinalSegment") -> bool:
        return self.boundary >= other.boundary

    def complement(self) -> "InitialSegment":
        return InitialSegment(self.boundary)

    def describe(self) -> dict:
        return {"above": self.boundary.describe()}

    def __repr__(self) -> str:
        return f"Seg[> {self.boundary!r}]"


@dataclass(frozen=True)
class InitialSegment:
    """Downward-closed subset {g : g < boundary} of the group."""

    boundary: GroupCut

    def __post_init__(self):
        if self.boundary.kind == "key" and self.boundary.nudge() == 0:
            raise ValueError("segment boundary must be a proper cut position")

    @property
    def group(self) -> ValueGroup:
        return self.boundary.group

    def contains(self, g: GroupElem) -> bool:
        return self.boundary.side_of(g) < 0

    def is_empty(self) -> bool:
        return self.boundary.kind == "minf"

    def __repr__(self) -> str:
        return f"Seg[< {self.boundary!r}]"


# -- coordinate subgroups ------------------------------------------------------

def check_mask(mask: Sequence[int], group: ValueGroup) -> tuple:
    mask = tuple(sorted(mask))
    if len(set(mask)) != len(mask):
        raise ValueError("repeated coordinates in mask")
    if mask and (mask[0] < 0 or mask[-1] >= group.rank):
        raise ValueError("mask coordinate out of range")
    return mask


def is_convex(mask: Sequence[int], group: ValueGroup) -> bool:
    """Whether the subgroup supported on the masked coordinates is convex."""
    mask = check_mask(mask, group)
    if len(mask) in (0, group.rank):
        return True
    if group.kind == WEIGHTED:
        # archimedean: nothing strictly between the trivial and the whole
        return False
    # lex: convex subgroups are exactly the coordinate suffixes
    return mask[0] == group.rank - len(mask)


def convexity_witness(mask: Sequence[int],
                      group: ValueGroup) -> tuple[GroupElem, GroupElem]:
    """A pair (x, y) with 0 < x < y, y in the subgroup, x outside it."""
    mask = check_mask(mask, group)
    if is_convex(mask, group):
        raise ValueError("subgroup is convex")
    if group.kind == WEIGHTED:
        i = mask[0]
        j = next(k for k in range(group.rank) if k not in mask)
        y = group.unit(i)
        # shrink a mixed element below y; n halvings suffice and are checked
        x = group.unit(j)
        while not x < y:
            x = x.scale(Fraction(1, 2))
        return x, y
    i = mask[0]
    j = next(k for k in range(group.rank) if k not in mask and k > i)
    return group.unit(j), group.unit(i)


def is_cofinal(mask: Sequence[int], group: ValueGroup) -> bool:
    """Whether the masked subgroup is cofinal in the group."""
    mask = check_mask(mask, group)
    if group.rank == 0:
        return True
    if not mask:
        return False
    if group.kind == WEIGHTED:
        return True
    return mask[0] == 0


# -- position transport along a coordinate injection ---------------------------

def _require_lex(*groups: ValueGroup) -> None:
    for g in groups:
        if g.kind != LEX:
            raise ValueError("position transport needs lexicographic groups")


def restrict_position(pos: GroupCut, mask: Sequence[int],
                      sub: ValueGroup) -> GroupCut:
    """Where a position of the big group falls among the subgroup's elements.

    mask[i] is the big-group coordinate carrying the subgroup's i-th one.
    """
    big = pos.group
    _require_lex(big, sub)
    mask = check_mask(mask, big)
    if len(mask) != sub.rank:
        raise ValueError("mask length must equal the subgroup rank")
    if pos.kind == "minf":
        return sub.minus_inf()
    if pos.kind == "pinf":
        return sub.plus_inf()
    prefix: list[Fraction] = []
    up = {level: i for i, level in enumerate(mask)}
    for level, (q, s) in enumerate(pos.key):
        terminal = level == len(pos.key) - 1
        if level in up:
            if terminal and s != 0:
                g = sub.elem(prefix + [q] + [0] * (sub.rank - len(prefix) - 1))
                return sub.coset_edge(g, len(prefix) + 1, s)
            prefix.append(q)
            continue
        side = 1 if q > 0 or (q == 0 and s > 0) else \
            (-1 if q < 0 or (q == 0 and s < 0) else 0)
        if side == 0:
            continue
        g = sub.elem(prefix + [0] * (sub.rank - len(prefix)))
        return sub.coset_edge(g, len(prefix), side)
    # keys ending in nudge 0 are full length, so every mask level was seen
    # and all off-mask entries were exact zeros: an element of the subgroup
    return sub.at(sub.elem(prefix))


def _lift_coords(prefix: Sequence[Fraction], mask: tuple,
                 upto: int) -> list[Fraction]:
    """Big-group coordinates 0..upto-1 embedding the subgroup prefix."""
    out = []
    pos = {level: i for i, level in enumerate(mask)}
    for level in range(upto):
        out.append(prefix[pos[level]] if level in pos else Q0)
    return out


def embed_position_min(pos: GroupCut, mask: Sequence[int],
                       big: ValueGroup) -> GroupCut:
    """The least big-group position restricting back to pos.

    Equivalently the boundary of the largest final segment of the big group
    lying above every subgroup element below pos.
    """
    sub = pos.group
    _require_lex(big, sub)
    mask = check_mask(mask, big)
    if pos.kind == "minf":
        return big.minus_inf()
    if pos.kind == "pinf":
        first = mask[0] if mask else big.rank
        if first == 0:
            return big.plus_inf()
        g = big.zero()
        return big.coset_edge(g, first, UPPER)
    if pos.nudge() == 0:
        raise ValueError("element positions have no unique transport")
    level = len(pos.key) - 1  # subgroup level of the nudge
    qs = [q for q, _ in pos.key]
    side = pos.nudge()
    if side < 0:
        coords = _lift_coords(qs, mask, mask[level] + 1)
        g = big.elem(coords + [0] * (big.rank - len(coords)))
        return big.coset_edge(g, mask[level] + 1, LOWER)
    nxt = mask[level + 1] if level + 1 < len(mask) else big.rank
    coords = _lift_coords(qs, mask, nxt)
    g = big.elem(coords + [0] * (big.rank - len(coords)))
    return big.coset_edge(g, nxt, UPPER)


def embed_position_max(pos: GroupCut, mask: Sequence[int],
                       big: ValueGroup) -> GroupCut:
    """The greatest big-group position restricting back to pos."""
    sub = pos.group
    _require_lex(big, sub)
    mask = check_mask(mask, big)
    if pos.kind == "pinf":
        return big.plus_inf()
    if pos.kind == "minf":
        first = mask[0] if mask else big.rank
        if first == 0:
            return big.minus_inf()
        return big.coset_edge(big.zero(), first, LOWER)
    if pos.nudge() == 0:
        raise ValueError("element positions have no unique transport")
    level = len(pos.key) - 1
    qs = [q for q, _ in pos.key]
    side = pos.nudge()
    if side > 0:
        coords = _lift_coords(qs, mask, mask[level] + 1)
        g = big.elem(coords + [0] * (big.rank - len(coords)))
        return big.coset_edge(g, mask[level] + 1, UPPER)
    nxt = mask[level + 1] if level + 1 < len(mask) else big.rank
    coords = _lift_coords(qs, mask, nxt)
    g = big.elem(coords + [0] * (big.rank - len(coords)))
    return big.coset_edge(g, nxt, LOWER)


def segment_above(seg: InitialSegment, into: Optional[ValueGroup] = None,
                  mask: Optional[Sequence[int]] = None) -> FinalSegment:
    """Largest final segment lying strictly above the initial segment.

    Same-group form: the complement.  With into/mask, the initial segment
    of the subgroup is read inside the big group and the result is the
    largest final segment of the big group above its image.
    """
    if into is None:
        return FinalSegment(seg.boundary)
    if mask is None:
        raise ValueError("cross-group form needs the coordinate mask")
    return FinalSegment(embed_position_min(seg.boundary, mask, into))


def embed_element(g: GroupElem, mask: Sequence[int],
                  big: ValueGroup) -> GroupElem:
    mask = check_mask(mask, big)
    coords = _lift_coords(g.coords, mask, big.rank)
    return big.elem(coords)


def restrict_element(g: GroupElem, mask: Sequence[int],
                     sub: ValueGroup) -> Optional[GroupElem]:
    """Subgroup preimage of g, or None if g is off the subgroup."""
    mask = check_mask(mask, g.group)
    keep = []
    for level, q in enumerate(g.coords):
        if level in mask:
            keep.append(q)
        elif q != 0:
            return None
    return sub.elem(keep)


# -- elements strictly inside an interval of positions --------------------------

def element_in_interval(lo: GroupCut, hi: GroupCut) -> Optional[GroupElem]:
    """A group element strictly between two positions, or None if the
    interval contains no element (adjacent element/nudge positions)."""
    group = lo.group
    if group != hi.group:
        raise ValueError("positions in different groups")
    if lo.cmp(hi) >= 0:
        raise ValueError("empty position interval")
    if group.kind == WEIGHTED:
        return _weighted_between(lo, hi)
    n = group.rank
    if lo.kind == "minf" and hi.kind == "pinf":
        return group.zero()
    if lo.kind == "minf":
        return _just_under(hi)
    if hi.kind == "pinf":
        return _just_over(lo)
    k1, k2 = lo.key, hi.key
    for j in range(min(len(k1), len(k2))):
        (q1, s1), (q2, s2) = k1[j], k2[j]
        if q1 != q2:
            qs = [q for q, _ in k1[:j]]
            mid = (q1 + q2) / 2
            return group.elem(qs + [mid] + [0] * (n - j - 1))
        if s1 != s2:
            # same coordinate, different nudges; s1 < s2 since lo < hi
            qs = [q for q, _ in k1[:j + 1]]
            if s1 == -1 and s2 == 1:
                # lower vs upper edge of the same coset: its base element
                return group.elem(qs + [0] * (n - j - 1))
            if s1 == -1:
                # lo is the lower coset edge, hi continues inside the coset
                tail = GroupCut(group, hi.kind, hi.key)
                e = _just_under(tail)
                if e is None:
                    return None
                return e if _strictly_inside(e, lo, hi) else None
            # s1 == 0, s2 == 1: lo continues inside the coset hi tops
            e = _just_over(lo)
            if e is None:
                return None
            return e if _strictly_inside(e, lo, hi) else None
    raise AssertionError("identical prefixes of different lengths")


def _strictly_inside(e: GroupElem, lo: GroupCut, hi: GroupCut) -> bool:
    return lo.side_of(e) > 0 and hi.side_of(e) < 0


def _just_under(pos: GroupCut) -> Optional[GroupElem]:
    """An element below pos and above any strictly lower coset-mate, when
    one exists immediately under the key."""
    group = pos.group
    n = group.rank
    qs = [q for q, _ in pos.key]
    s = pos.key[-1][1]
    if s > 0:
        return group.elem(qs + [0] * (n - len(qs)))
    if s < 0:
        qs = qs[:-1] + [qs[-1] - 1]
        return group.elem(qs + [0] * (n - len(qs)))
    # element position: the nearest element below is one step down in the
    # least significant coordinate; none when the key is the element itself
    if len(qs) == n:
        return group.elem(qs[:-1] + [qs[-1] - 1]) if n else None
    return None


def _just_over(pos: GroupCut) -> Optional[GroupElem]:
    group = pos.group
    n = group.rank
    qs = [q for q, _ in pos.key]
    s = pos.key[-1][1]
    if s < 0:
        return group.elem(qs + [0] * (n - len(qs)))
    if s > 0:
        qs = qs[:-1] + [qs[-1] + 1]
        return group.elem(qs + [0] * (n - len(qs)))
    if len(qs) == n:
        return group.elem(qs[:-1] + [qs[-1] + 1]) if n else None
    return None


def _weighted_between(lo: GroupCut, hi: GroupCut) -> Optional[GroupElem]:
    group = lo.group
    w0 = group.weights[0]

    def along0(q0: Fraction) -> GroupElem:
        return group.elem((q0,) + (Q0,) * (group.rank - 1))

    if lo.kind == "minf" and hi.kind == "pinf":
        return group.zero()
    if lo.kind == "minf":
        v = hi.key[0][0]
        # (floor - 1) * w0 < v regardless of the nudge
        return along0(Fraction((v / w0).floor() - 1))
    if hi.kind == "pinf":
        v = lo.key[0][0]
        return along0(Fraction((v / w0).floor() + 1))
    (v1, s1), (v2, s2) = lo.key[0], hi.key[0]
    if v1.cmp(v2) < 0:
        return along0(rational_between(v1 / w0, v2 / w0))
    if s1 == -1 and s2 == 1:
        # just below / just above the same real value: hit it exactly
        coords = _solve_weighted(group, v1)
        return group.elem(coords) if coords is not None else None
    return None


def _solve_weighted(group: ValueGroup, v: QuadExt) -> Optional[tuple]:
    """Coordinates q with sum q_i w_i == v, or None.

    Solved exactly in the basis {1, sqrt(d)} of the weight field; only the
    first two weights are used, the rest are set to 0.
    """
    ws = group.weights
    if group.rank == 1 or len(ws) == 1:
        q = v / ws[0]
        return (q.as_fraction(),) if q.is_rational() else None
    w1, w2 = ws[0], ws[1]
    det = w1.a * w2.b - w2.a * w1.b
    if det == 0:
        # weights share the ratio of rational to irrational part; fall back
        q = v / w1
        if q.is_rational():
            return (q.as_fraction(),) + (Q0,) * (group.rank - 1)
        return None
    q1 = (v.a * w2.b - w2.a * v.b) / det
    q2 = (w1.a * v.b - v.a * w1.b) / det
    if QuadExt.of(q1) * w1 + QuadExt.of(q2) * w2 != v:
        return None
    return (q1, q2) + (Q0,) * (group.rank - 2)


# -- adjoining one fresh lex coordinate at a position ---------------------------

def extend_at_position(at: GroupCut) -> tuple[ValueGroup, tuple, GroupElem]:
    """A rank+1 lexicographic group with one new coordinate placed so that
    its unit element sits exactly at position `at` among the old elements.

    Returns (new group, mask of the old coordinates, value of the new unit).
    """
    group = at.group
    if group.kind != LEX:
        raise ValueError("only lexicographic groups can be extended this way")
    if at.kind == "key" and at.nudge() == 0:
        raise ValueError("cannot place a new value on top of an element")
    n = group.rank
    big = ValueGroup(LEX, n + 1)
    if at.kind == "minf":
        j, prefix, s = 0, [], -1
    elif at.kind == "pinf":
        j, prefix, s = 0, [], 1
    else:
        j = len(at.key)
        prefix = [q for q, _ in at.key]
        s = at.nudge()
    mask = tuple(i if i < j else i + 1 for i in range(n))
    coords = prefix + [Fraction(s)] + [Q0] * (n - j)
    return big, mask, big.elem(coords)
