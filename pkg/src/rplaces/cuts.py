"""Cuts in ordered Hahn-sum fields.

A cut splits a field into an initial segment D and its complement E.  Four
representations cover everything this library produces: the two improper
cuts, an edge of an ultrametric ball (principal cuts are edges of singleton
balls), and the cut traced by an element g of a declared extension field
("filler": D = {x : x < g}).

Comparison is exact.  The only undecidable-looking corner, filler against
filler, reduces to finding a field element strictly between the two
generators; term extraction relative to the base field settles that in
finitely many steps or reports honest budget exhaustion.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .balls import (
    Ball, NonBallWithFiller, ball_contains, ball_eq, between_ball,
)
from .coeff import QuadExt, rational_between
from .ordfield import (
    DEFAULT_MAX_STEPS, Exhausted, ExpansionBudgetError, FieldDescriptor,
    FieldElement, FieldMismatchError, InSubfield, Obstructed,
    approx_analysis, lift,
)
from .valgroup import (
    LOWER, UPPER, FinalSegment, GroupElem, element_in_interval,
    embed_element, embed_position_max, embed_position_min, restrict_element,
    restrict_position,
)

BELOW = "below"
ABOVE = "above"

LT, EQ, GT = -1, 0, 1


class CutComparisonError(Exception):
    """The comparison left the decidable fragment (unrelated extension
    fields, or an analysis budget ran out)."""


def _side_name(side: int) -> str:
    return "upper" if side == UPPER else "lower"


def _rational_under(c: QuadExt) -> Fraction:
    return rational_between(c - 1, c)


def _rational_over(c: QuadExt) -> Fraction:
    return rational_between(c, c + 1)


class Cut:
    """One cut of `field`; construct through the cut_* factories."""

    __slots__ = ("field", "kind", "ball", "side", "g")

    def __init__(self, field: FieldDescriptor, kind: str,
                 ball: Optional[Ball] = None, side: Optional[int] = None,
                 g: Optional[FieldElement] = None):
        self.field = field
        self.kind = kind
        self.ball = ball
        self.side = side
        self.g = g

    def is_principal(self) -> bool:
        return self.kind == "edge" and self.ball.is_singleton()

    def describe(self) -> dict:
        if self.kind in ("minus_inf", "plus_inf"):
            return {"kind": self.kind}
        if self.kind == "edge":
            return {"kind": "edge", "ball": self.ball.describe(),
                    "side": _side_name(self.side)}
        return {"kind": "filler", "element": str(self.g),
                "extension": self.g.field.name,
                "side": _side_name(self.side)}

    def __repr__(self):
        if self.kind == "minus_inf":
            return f"Cut(-inf over {self.field.name})"
        if self.kind == "plus_inf":
            return f"Cut(+inf over {self.field.name})"
        sign = "+" if self.side == UPPER else "-"
        if self.kind == "edge":
            return f"Cut({self.ball!r}{sign})"
        return f"Cut({self.g}{sign} over {self.field.name})"


def cut_minus_inf(field: FieldDescriptor) -> Cut:
    return Cut(field, "minus_inf")


def cut_plus_inf(field: FieldDescriptor) -> Cut:
    return Cut(field, "plus_inf")


def cut_edge(ball: Ball, side: int) -> Cut:
    """Edge of a ball; the whole-field ball's edges are the improper cuts."""
    if side not in (LOWER, UPPER):
        raise ValueError("side must be LOWER or UPPER")
    if ball.is_whole_field():
        return cut_minus_inf(ball.field) if side == LOWER \
            else cut_plus_inf(ball.field)
    return Cut(ball.field, "edge", ball=ball, side=side)


def cut_principal(a: FieldElement, side: int) -> Cut:
    return cut_edge(Ball(a.field, a, a.field.group.seg_empty()), side)


def cut_filler(g: FieldElement, side: int, target: FieldDescriptor,
               max_steps: int = DEFAULT_MAX_STEPS) -> Cut:
    """The cut of `target` traced by an element of a declared extension."""
    if side not in (LOWER, UPPER):
        raise ValueError("side must be LOWER or UPPER")
    if g.field is target:
        raise ValueError("filler element must come from a proper extension")
    if target.embedding_mask_into(g.field) is None:
        raise FieldMismatchError(
            f"{target.name} does not embed in {g.field.name}")
    res = approx_analysis(g, target, max_steps)
    if isinstance(res, InSubfield):
        raise ValueError("filler element lies in the target field")
    if isinstance(res, Exhausted):
        raise ExpansionBudgetError(
            "cannot verify the filler leaves the target field within the "
            "step budget")
    return Cut(target, "filler", side=side, g=g)


# -- membership ---------------------------------------------------------------

def side_of(C: Cut, x: FieldElement) -> str:
    """Which side of the cut x falls on; BELOW means x is in D."""
    if x.field is not C.field:
        x = lift(x, C.field)
    if C.kind == "minus_inf":
        return ABOVE
    if C.kind == "plus_inf":
        return BELOW
    if C.kind == "edge":
        B = C.ball
        if ball_contains(B, x):
            return BELOW if C.side == UPPER else ABOVE
        return BELOW if x.cmp(B.center) < 0 else ABOVE
    return BELOW if lift(x, C.g.field).cmp(C.g) < 0 else ABOVE


# -- comparison ---------------------------------------------------------------

def cut_cmp(C1: Cut, C2: Cut) -> int:
    """Total order on cuts of one field: -1, 0, +1."""
    if C1.field is not C2.field:
        raise CutComparisonError("cuts live in different fields")
    k1, k2 = C1.kind, C2.kind
    if k1 == "minus_inf" or k2 == "minus_inf":
        if k1 == k2:
            return EQ
        if k1 == "minus_inf":
            return EQ if _is_beyond(C2, -1) else LT
        return EQ if _is_beyond(C1, -1) else GT
    if k1 == "plus_inf" or k2 == "plus_inf":
        if k1 == k2:
            return EQ
        if k2 == "plus_inf":
            return EQ if _is_beyond(C1, +1) else LT
        return EQ if _is_beyond(C2, +1) else GT
    if k1 == "edge" and k2 == "edge":
        return _edge_pair_cmp(C1, C2)
    if k1 == "edge":
        return _edge_vs_filler(C1, C2)
    if k2 == "edge":
        return -_edge_vs_filler(C2, C1)
    return _filler_pair_cmp(C1, C2)


def _is_beyond(C: Cut, direction: int) -> bool:
    """Filler cut equal to an improper cut: its generator lies outside the
    whole target field on the given side."""
    if C.kind != "filler":
        return False
    res = _filler_analysis(C)
    if res.obstruction != "exponent":
        return False
    mask = C.field.embedding_mask_into(C.g.field)
    bound = restrict_position(C.g.field.group.below(res.gamma0), mask,
                              C.field.group)
    if bound.kind != "minf":
        return False
    return res.coeff.sign() == direction


def _filler_analysis(C: Cut, max_steps: int = DEFAULT_MAX_STEPS) -> Obstructed:
    res = approx_analysis(C.g, C.field, max_steps)
    if isinstance(res, InSubfield):
        raise CutComparisonError(
            "filler element collapsed into the target field")
    if isinstance(res, Exhausted):
        raise CutComparisonError(
            "filler analysis exhausted its step budget; raise max_steps")
    return res


def _edge_pair_cmp(C1: Cut, C2: Cut) -> int:
    B1, B2 = C1.ball, C2.ball
    d = B2.center - B1.center
    if B1.radius.boundary == B2.radius.boundary and \
            (d.is_zero() or B1.radius.contains(d.val())):
        if C1.side == C2.side:
            return EQ
        return LT if C1.side == LOWER else GT
    big, small, flip = (B1, B2, False) if B2.radius.subset_of(B1.radius) \
        else (B2, B1, True)
    if not d.is_zero() and not big.radius.contains(d.val()):
        return LT if B1.center.cmp(B2.center) < 0 else GT
    # small sits strictly inside big, so big's edge decides
    big_side = C2.side if flip else C1.side
    out = LT if big_side == LOWER else GT
    return -out if flip else out


def _hull_zone(B: Ball, g: FieldElement) -> tuple[str, int]:
    """Where an extension element g sits relative to the convex hull of B:
    strictly between members ("inside"), in the gap between B and the rest
    of its field ("adjacent"), or past some outside field element
    ("beyond"); paired with the sign of g - center."""
    G = g.field
    mask = B.field.embedding_mask_into(G)
    if mask is None:
        raise CutComparisonError(
            f"{B.field.name} does not embed in {G.name}")
    d = g - lift(B.center, G)
    if d.is_zero():
        raise CutComparisonError("extension element equals the ball center")
    pos = G.group.at(d.val())
    bnd = B.radius.boundary
    if pos.cmp(embed_position_max(bnd, mask, G.group)) > 0:
        return "inside", d.sign()
    if pos.cmp(embed_position_min(bnd, mask, G.group)) > 0:
        return "adjacent", d.sign()
    return "beyond", d.sign()


def _edge_vs_filler(Ce: Cut, Cf: Cut) -> int:
    zone, sigma = _hull_zone(Ce.ball, Cf.g)
    if zone == "inside":
        return LT if Ce.side == LOWER else GT
    if zone == "adjacent":
        if (sigma > 0) == (Ce.side == UPPER):
            return EQ
        return LT if Ce.side == LOWER else GT
    return LT if sigma > 0 else GT


def _common_extension(x: FieldElement, y: FieldElement
                      ) -> tuple[FieldElement, FieldElement]:
    if x.field is y.field:
        return x, y
    if x.field.embedding_mask_into(y.field) is not None:
        return lift(x, y.field), y
    if y.field.embedding_mask_into(x.field) is not None:
        return x, lift(y, x.field)
    raise CutComparisonError(
        f"extension fields {x.field.name} and {y.field.name} are unrelated")


def _filler_pair_cmp(C1: Cut, C2: Cut) -> int:
    g1, g2 = _common_extension(C1.g, C2.g)
    d = g2 - g1
    if d.is_zero():
        return EQ
    if d.sign() > 0:
        lo, hi, order = g1, g2, LT
    else:
        lo, hi, order = g2, g1, GT
    x = _element_between_fillers(lo, hi, C1.field)
    return order if x is not None else EQ


def _element_between_fillers(lo: FieldElement, hi: FieldElement,
                             F: FieldDescriptor,
                             max_steps: int = DEFAULT_MAX_STEPS
                             ) -> Optional[FieldElement]:
    """An element of F strictly between two extension elements lo < hi of a
    common extension, or None when no such element exists.

    Term extraction of lo over F yields the best approximant r* and the
    obstruction scale gamma0 = max v(lo - F).  Writing w = v(hi - lo), an
    element between the two exists exactly when some F-expressible monomial
    fits into the gap: a coefficient slot at w itself when w sits in the
    exponent image, an exponent slot strictly between w and gamma0, a
    coefficient nudge at gamma0, or r* already falling inside.
    """
    delta = hi - lo
    res = approx_analysis(lo, F, max_steps)
    if isinstance(res, InSubfield):
        x = res.approximant
        ok = lift(x, lo.field).cmp(lo) > 0 and lift(x, hi.field).cmp(hi) < 0
        return x if ok else None
    if isinstance(res, Exhausted):
        raise CutComparisonError(
            "filler analysis exhausted its step budget; raise max_steps")
    gamma0, c0, r_star = res.gamma0, res.coeff, res.approximant
    G = lo.field
    mask = F.embedding_mask_into(G)
    w = delta.val()
    if w.cmp(gamma0) > 0:
        return None

    def between(cand: FieldElement) -> bool:
        c = lift(cand, G)
        return c.cmp(lo) > 0 and c.cmp(hi) < 0

    def checked(cand: FieldElement) -> FieldElement:
        if not between(cand):
            raise AssertionError("slot candidate failed its side checks")
        return cand

    if w.cmp(gamma0) < 0:
        if between(r_star):
            return r_star
        wF = restrict_element(w, mask, F.group)
        if wF is not None:
            # coefficient slot at the gap scale itself
            s = rational_between(QuadExt(0), delta.leading_coeff())
            return checked(r_star + F.monomial(wF, s))
        rho_w = restrict_position(G.group.at(w), mask, F.group)
        rho_g = restrict_position(G.group.at(gamma0), mask, F.group)
        slot = element_in_interval(rho_w, rho_g) if rho_w.cmp(rho_g) < 0 \
            else None
        if slot is not None:
            return checked(r_star + F.monomial(slot))
        if res.obstruction == "coefficient":
            gF = restrict_element(gamma0, mask, F.group)
            return checked(r_star + F.monomial(gF, _rational_over(c0)))
        return None
    # w == gamma0: the gap spans exactly the obstruction scale
    if res.obstruction == "coefficient":
        gF = restrict_element(gamma0, mask, F.group)
        s = rational_between(c0, c0 + delta.leading_coeff())
        return checked(r_star + F.monomial(gF, s))
    return r_star if between(r_star) else None


# -- equivalence --------------------------------------------------------------

def equivalent(C1: Cut, C2: Cut) -> bool:
    """Equal cuts, or the two edges of one ball."""
    order = cut_cmp(C1, C2)
    if order == EQ:
        return True
    lo, hi = (C1, C2) if order == LT else (C2, C1)
    if lo.kind == "minus_inf" and hi.kind == "plus_inf":
        return True  # edges of the whole-field ball
    if lo.kind == "edge" and hi.kind == "edge":
        return lo.side == LOWER and hi.side == UPPER and \
            ball_eq(lo.ball, hi.ball)
    if lo.kind == "edge" and hi.kind == "filler":
        return _hull_zone(lo.ball, hi.g)[0] == "adjacent"
    if lo.kind == "filler" and hi.kind == "edge":
        return _hull_zone(hi.ball, lo.g)[0] == "adjacent"
    if lo.kind == "filler" and hi.kind == "filler":
        return _filler_pair_ball(lo, hi) is not None
    return False


def _filler_pair_ball(lo: Cut, hi: Cut) -> Optional[Ball]:
    """The ball whose edges the two strictly ordered filler cuts are, if
    one exists."""
    F = lo.field
    g_lo, g_hi = _common_extension(lo.g, hi.g)
    m = _element_between_fillers(g_lo, g_hi, F)
    if m is None:
        return None
    G = g_lo.field
    mask = F.embedding_mask_into(G)
    mG = lift(m, G)
    thr = (mG - g_lo).val()
    d2 = (g_hi - mG).val()
    if thr.cmp(d2) < 0:
        thr = d2
    boundary = restrict_position(G.group.above(thr), mask, F.group)
    cand = Ball(F, m, FinalSegment(boundary))
    if cut_cmp(lo, cut_edge(cand, LOWER)) == EQ and \
            cut_cmp(hi, cut_edge(cand, UPPER)) == EQ:
        return cand
    return None


# -- classification -----------------------------------------------------------

@dataclass(frozen=True)
class PrincipalResult:
    element: FieldElement
    side: int

    kind = "principal"


@dataclass(frozen=True)
class BallCutResult:
    ball: Ball
    side: int

    kind = "ball"


@dataclass(frozen=True)
class NonBallRefutation:
    """One disagreement between the analyzed cut and a candidate ball-edge
    cut: the witness element lands on different sides of the two."""
    radius: FinalSegment
    side: int
    center: FieldElement
    witness: FieldElement


@dataclass(frozen=True)
class NonBallCertificate:
    gamma0: GroupElem           # obstruction exponent, in the base group
    coeff: QuadExt              # the coefficient outside the base field
    approximant: FieldElement   # best base-field approximant
    refutations: tuple


@dataclass(frozen=True)
class NonBallResult:
    certificate: NonBallCertificate

    kind = "non_ball"


@dataclass(frozen=True)
class UnknownResult:
    reached: Optional[GroupElem]
    reason: str

    kind = "unknown"


ClassifyResult = Union[PrincipalResult, BallCutResult, NonBallResult,
                       UnknownResult]


def classify(C: Cut, precision: GroupElem,
             max_steps: int = DEFAULT_MAX_STEPS) -> ClassifyResult:
    """Decide what kind of cut a representation denotes: principal, a ball
    edge, or certified non-ball.  Filler cuts are analyzed term by term;
    obstructions past the precision cutoff yield Unknown."""
    if C.kind in ("minus_inf", "plus_inf"):
        side = UPPER if C.kind == "plus_inf" else LOWER
        return BallCutResult(Ball(C.field, C.field.zero(),
                                  C.field.group.seg_all()), side)
    if C.kind == "edge":
        if C.ball.is_singleton():
            return PrincipalResult(C.ball.center, C.side)
        return BallCutResult(C.ball, C.side)

    R = C.field
    G = C.g.field
    mask = R.embedding_mask_into(G)
    if precision.group == R.group:
        cutoff = embed_element(precision, mask, G.group)
    elif precision.group == G.group:
        cutoff = precision
    else:
        raise ValueError("precision cutoff must live in the value group of "
                         "the cut's field or of the filler's field")
    residual = C.g
    approx = R.zero()
    for _ in range(max_steps):
        if residual.is_zero():
            raise ValueError("filler element collapsed into the target "
                             "field")
        gamma = residual.val()
        c = residual.leading_coeff()
        if gamma.cmp(cutoff) > 0:
            return UnknownResult(precision,
                                 "no obstruction at or below the cutoff")
        g_sub = restrict_element(gamma, mask, R.group)
        if g_sub is None:
            side = UPPER if c.sign() > 0 else LOWER
            T = FinalSegment(restrict_position(G.group.above(gamma), mask,
                                               R.group))
            if T.is_empty():
                return PrincipalResult(approx, side)
            return BallCutResult(Ball(R, approx, T), side)
        if not (c.d is None or c.d == R.coeff_d):
            return NonBallResult(_non_ball_certificate(C, approx, g_sub, c))
        approx = approx + R.monomial(g_sub, c)
        residual = residual - G.monomial(gamma, c)
    return UnknownResult(None, "term extraction exceeded the step budget")


def _non_ball_certificate(C: Cut, r_star: FieldElement, gamma0: GroupElem,
                          c0: QuadExt) -> NonBallCertificate:
    """Refute every candidate ball whose edge could trace the cut.

    At the obstruction scale the cut behaves like the cut of the rationals
    at the irrational c0: elements r* + q*t^gamma0 fall below it exactly
    when q < c0.  A ball edge at that scale splits instead at a rational
    threshold (its center's coefficient) or not at all, so for each
    candidate radius, side, and center a rational q between the two
    thresholds gives a concrete disagreement witness.
    """
    R = C.field
    group = R.group
    lo_q = _rational_under(c0)
    hi_q = _rational_over(c0)
    mid_q = rational_between(QuadExt(lo_q), c0)

    def at_coeff(q) -> FieldElement:
        return r_star + R.monomial(gamma0, q)

    refutations = []
    closed = group.seg_at_least(gamma0)
    open_ = group.seg_above(gamma0)
    for T in (closed, open_):
        for side in (LOWER, UPPER):
            for center_q in (Fraction(0), lo_q, mid_q):
                center = at_coeff(center_q)
                edge = cut_edge(Ball(R, center, T), side)
                if T is closed:
                    # every sampled coefficient lies inside this ball, so
                    # the edge puts them all on its own side
                    wq = hi_q if side == UPPER else lo_q
                elif QuadExt(center_q).cmp(c0) < 0:
                    wq = rational_between(QuadExt(center_q), c0)
                else:
                    wq = rational_between(c0, QuadExt(center_q))
                witness = at_coeff(wq)
                if side_of(C, witness) == side_of(edge, witness):
                    raise AssertionError("refutation witness agreed with "
                                         "the candidate ball edge")
                refutations.append(
                    NonBallRefutation(T, side, center, witness))
    return NonBallCertificate(gamma0, c0, r_star, tuple(refutations))


# -- restriction ---------------------------------------------------------------

def restrict(C: Cut, R: FieldDescriptor,
             max_steps: int = DEFAULT_MAX_STEPS) -> Cut:
    """The cut (D intersect R, E intersect R) of the subfield R."""
    F = C.field
    mask = R.embedding_mask_into(F)
    if mask is None:
        raise FieldMismatchError(f"{R.name} is not a declared subfield of "
                                 f"{F.name}")
    if C.kind == "minus_inf":
        return cut_minus_inf(R)
    if C.kind == "plus_inf":
        return cut_plus_inf(R)
    if C.kind == "filler":
        return Cut(R, "filler", side=C.side, g=C.g)
    B = C.ball
    res = approx_analysis(B.center, R, max_steps)
    if isinstance(res, Exhausted):
        raise ExpansionBudgetError(
            "center analysis exhausted its step budget; raise max_steps")
    if isinstance(res, Obstructed) and not B.radius.contains(res.gamma0):
        # the ball misses R entirely; both edges trace the center's cut
        return Cut(R, "filler", side=C.side, g=B.center)
    center = res.approximant
    S0 = FinalSegment(restrict_position(B.radius.boundary, mask, R.group))
    return cut_edge(Ball(R, center, S0), C.side)


# -- fibers ---------------------------------------------------------------------

@dataclass(frozen=True)
class FiberDescription:
    """The closed interval of extension-field cuts restricting to a cut."""
    lower: Cut
    upper: Cut
    singleton: bool

    def describe(self) -> dict:
        return {"lower": self.lower.describe(),
                "upper": self.upper.describe(),
                "singleton": self.singleton}


def fiber(C: Cut, F: FieldDescriptor,
          max_steps: int = DEFAULT_MAX_STEPS) -> FiberDescription:
    R = C.field
    mask = R.embedding_mask_into(F)
    if mask is None:
        raise FieldMismatchError(f"{R.name} is not a declared subfield of "
                                 f"{F.name}")
    if C.kind == "filler":
        if C.g.field.embedding_mask_into(F) is None:
            raise FieldMismatchError(
                "fiber of a filler cut needs the filler's field inside the "
                "target extension")
        between = between_ball(NonBallWithFiller(R, C.g), ambient=F,
                               max_steps=max_steps)
        return FiberDescription(cut_edge(between, LOWER),
                                cut_edge(between, UPPER), False)
    if C.kind == "edge":
        center, bnd, side = C.ball.center, C.ball.radius.boundary, C.side
    else:
        center = R.zero()
        bnd = R.group.minus_inf()
        side = UPPER if C.kind == "plus_inf" else LOWER
    tight = FinalSegment(embed_position_max(bnd, mask, F.group))
    wide = FinalSegment(embed_position_min(bnd, mask, F.group))
    aF = lift(center, F)
    small_edge = cut_edge(Ball(F, aF, tight), side)
    big_edge = cut_edge(Ball(F, aF, wide), side)
    if side == UPPER:
        lower, upper = small_edge, big_edge
    else:
        lower, upper = big_edge, small_edge
    return FiberDescription(lower, upper, tight.boundary == wide.boundary)


# -- elements around cuts --------------------------------------------------------

def _element_past(C: Cut, direction: int) -> FieldElement:
    """An element of C's field strictly on the given side of C; the cut
    must not be improper in that direction."""
    F = C.field
    if C.kind in ("minus_inf", "plus_inf"):
        return F.zero()
    if C.kind == "edge":
        B = C.ball
        if B.is_singleton():
            return B.center + direction
        out = element_in_interval(F.group.minus_inf(), B.radius.boundary)
        return B.center + F.monomial(out, direction)
    res = _filler_analysis(C)
    r_star = res.approximant
    G = C.g.field
    mask = F.embedding_mask_into(G)
    if res.obstruction == "coefficient":
        gF = restrict_element(res.gamma0, mask, F.group)
        s = Fraction(abs(res.coeff.floor()) + 1)
        return r_star + F.monomial(gF, direction * s)
    rho = restrict_position(G.group.at(res.gamma0), mask, F.group)
    step = element_in_interval(F.group.minus_inf(), rho)
    if step is None:
        # the generator lies beyond the field; every element is past it
        # on the approachable side
        return F.zero()
    return r_star + F.monomial(step, direction)


def cut_lt_witness(C1: Cut, C2: Cut,
                   max_steps: int = DEFAULT_MAX_STEPS) -> FieldElement:
    """An element strictly between two cuts with C1 < C2: above C1 and
    below C2."""
    if cut_cmp(C1, C2) != LT:
        raise ValueError("witness requires strictly ordered cuts")
    if C1.kind == "minus_inf":
        return _element_past(C2, -1)
    if C2.kind == "plus_inf":
        return _element_past(C1, +1)
    if C1.kind == "edge" and C2.kind == "edge":
        return _edge_pair_witness(C1, C2)
    if C1.kind == "edge" and C2.kind == "filler":
        return _edge_filler_witness(C1, C2, below_filler=True)
    if C1.kind == "filler" and C2.kind == "edge":
        return _edge_filler_witness(C2, C1, below_filler=False)
    g1, g2 = _common_extension(C1.g, C2.g)
    x = _element_between_fillers(g1, g2, C1.field, max_steps)
    if x is None:
        raise AssertionError("strictly ordered filler cuts admitted no "
                             "witness")
    return x


def _edge_pair_witness(C1: Cut, C2: Cut) -> FieldElement:
    B1, B2 = C1.ball, C2.ball
    if ball_eq(B1, B2):
        return B1.center
    d = B2.center - B1.center
    big, small = (B1, B2) if B2.radius.subset_of(B1.radius) else (B2, B1)
    if not d.is_zero() and not big.radius.contains(d.val()):
        return (B1.center + B2.center) / 2
    gamma = element_in_interval(big.radius.boundary, small.radius.boundary)
    if gamma is None:
        raise AssertionError("properly nested balls with no radius between")
    step = small.center.field.monomial(gamma)
    # a member of the big ball on the far side of the small one
    return small.center - step if big is B1 else small.center + step


def _edge_filler_witness(Ce: Cut, Cf: Cut, below_filler: bool
                         ) -> FieldElement:
    """Element between a ball-edge cut and a filler cut; below_filler says
    the edge cut is the smaller one."""
    B = Ce.ball
    F = Ce.field
    g = Cf.g
    G = g.field
    mask = F.embedding_mask_into(G)
    zone, sigma = _hull_zone(B, g)
    d = g - lift(B.center, G)
    vd = d.val()
    delta_img = restrict_element(vd, mask, F.group)
    rho = restrict_position(G.group.at(vd), mask, F.group)
    if zone in ("inside", "adjacent"):
        if (sigma > 0) == below_filler:
            return B.center
        # a member of B on the far side of g
        if delta_img is not None:
            s = Fraction(abs(d.leading_coeff().floor()) + 1)
            off = F.monomial(delta_img, s if sigma > 0 else -s)
        else:
            gamma = element_in_interval(B.radius.boundary, rho)
            if gamma is None:
                raise AssertionError("inside-hull element with no member "
                                     "scale under it")
            off = F.monomial(gamma, 1 if sigma > 0 else -1)
        return B.center + off
    # beyond the hull: an element of F between the ball and g
    if delta_img is not None:
        c0 = d.leading_coeff()
        s = rational_between(QuadExt(0), c0) if sigma > 0 \
            else rational_between(c0, QuadExt(0))
        return B.center + F.monomial(delta_img, s)
    gamma = element_in_interval(rho, B.radius.boundary)
    if gamma is None:
        raise AssertionError("beyond-hull element with no separating scale")
    return B.center + F.monomial(gamma, 1 if sigma > 0 else -1)


def find_between(C1: Cut, C2: Cut,
                 max_steps: int = DEFAULT_MAX_STEPS) -> FieldElement:
    """A deterministic element a with C1 <= a- and a+ <= C2: the midpoint
    of the cut anchors when that passes the side checks, else a
    constructed witness."""
    if cut_cmp(C1, C2) != LT:
        raise ValueError("find_between requires C1 < C2")
    a1 = _anchor(C1, max_steps)
    a2 = _anchor(C2, max_steps)
    F = C1.field
    if a1 is None and a2 is None:
        cand = F.zero()
    elif a1 is None:
        cand = a2 - 1
    elif a2 is None:
        cand = a1 + 1
    else:
        cand = (a1 + a2) / 2
    if side_of(C1, cand) == ABOVE and side_of(C2, cand) == BELOW:
        return cand
    return cut_lt_witness(C1, C2, max_steps)


def _anchor(C: Cut, max_steps: int) -> Optional[FieldElement]:
    if C.kind in ("minus_inf", "plus_inf"):
        return None
    F = C.field
    if C.kind == "edge":
        B = C.ball
        if B.is_singleton():
            return B.center
        rep = F.monomial(element_in_interval(F.group.minus_inf(),
                                             B.radius.boundary))
        return B.center + rep if C.side == UPPER else B.center - rep
    res = approx_analysis(C.g, C.field, max_steps)
    return res.approximant if isinstance(res, Obstructed) else None


# -- full ball intervals -----------------------------------------------------------

@dataclass(frozen=True)
class FullBallReport:
    """Edge positions of sampled balls relative to one ball's edge
    interval: members' edges land jointly inside, others' jointly outside,
    which is what makes the interval full."""
    cases: tuple
    all_consistent: bool


def is_full_ball_interval(B: Ball, samples) -> FullBallReport:
    lower = cut_edge(B, LOWER)
    upper = cut_edge(B, UPPER)

    def in_closed(C: Cut) -> bool:
        return cut_cmp(lower, C) <= 0 and cut_cmp(C, upper) <= 0

    def in_open(C: Cut) -> bool:
        return cut_cmp(lower, C) < 0 and cut_cmp(C, upper) < 0

    cases = []
    consistent = True
    for B1 in samples:
        e_lo, e_hi = cut_edge(B1, LOWER), cut_edge(B1, UPPER)
        if ball_eq(B1, B):
            relation = "equal"
            joint = in_closed(e_lo) and in_closed(e_hi) and \
                not in_open(e_lo) and not in_open(e_hi)
        else:
            d = B1.center - B.center
            inside_big = d.is_zero() or B1.radius.contains(d.val())
            inside_self = d.is_zero() or B.radius.contains(d.val())
            if B.radius.subset_of(B1.radius) and inside_big:
                relation = "contains"
                joint = cut_cmp(e_lo, lower) < 0 and \
                    cut_cmp(upper, e_hi) < 0
            elif B1.radius.subset_of(B.radius) and inside_self:
                relation = "inside"
                joint = in_open(e_lo) and in_open(e_hi)
            else:
                relation = "disjoint"
                joint = cut_cmp(e_hi, lower) <= 0 or \
                    cut_cmp(upper, e_lo) <= 0
        consistent = consistent and joint
        cases.append({"ball": B1.describe(), "relation": relation,
                      "joint": joint})
    return FullBallReport(tuple(cases), consistent)
