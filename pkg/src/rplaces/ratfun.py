"""Sparse polynomials and rational functions over one Hahn-sum field.

Coefficients are full FieldElement values (fractions of plain sums), so a
"constant" already carries arbitrary field arithmetic; the variables here
are the transcendentals a place realizes.  Fractions are never
gcd-reduced, only normalized so the denominator's leading coefficient is
one.  Substitution is exact and reports a pole instead of dividing by
zero.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence, Union

from .coeff import QuadExt
from .ordfield import FieldDescriptor, FieldElement, FieldMismatchError, lift


class PoleMarker:
    """Denominator vanished under an exact substitution."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "POLE"


POLE = PoleMarker()


def _as_element(field: FieldDescriptor, c) -> FieldElement:
    if isinstance(c, FieldElement):
        if c.field is not field:
            return lift(c, field)
        return c
    return field.const(c)


class Poly:
    """Finite map from exponent tuples to nonzero coefficients."""

    __slots__ = ("field", "variables", "terms")

    def __init__(self, field: FieldDescriptor, variables: Sequence[str],
                 terms: dict):
        self.field = field
        self.variables = tuple(variables)
        clean = {}
        for key, c in terms.items():
            key = tuple(int(e) for e in key)
            if len(key) != len(self.variables):
                raise ValueError("exponent tuple does not match variables")
            if any(e < 0 for e in key):
                raise ValueError("polynomial exponents must be nonnegative")
            c = _as_element(field, c)
            if not c.is_zero():
                clean[key] = clean[key] + c if key in clean else c
        self.terms = {k: c for k, c in clean.items() if not c.is_zero()}

    @staticmethod
    def const(field: FieldDescriptor, variables: Sequence[str],
              c) -> "Poly":
        zero = (0,) * len(tuple(variables))
        return Poly(field, variables, {zero: c})

    @staticmethod
    def var(field: FieldDescriptor, variables: Sequence[str],
            name: str) -> "Poly":
        variables = tuple(variables)
        if name not in variables:
            raise ValueError(f"unknown variable {name!r}")
        key = tuple(1 if v == name else 0 for v in variables)
        return Poly(field, variables, {key: field.one()})

    def is_zero(self) -> bool:
        return not self.terms

    def lead_key(self) -> tuple:
        """Largest exponent tuple in lexicographic order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms)

    def _pair(self, other) -> tuple["Poly", "Poly"]:
        if not isinstance(other, Poly):
            other = Poly.const(self.field, self.variables, other)
        if other.field is not self.field or \
                other.variables != self.variables:
            raise FieldMismatchError("polynomials over different settings")
        return self, other

    def __add__(self, other) -> "Poly":
        a, b = self._pair(other)
        out = dict(a.terms)
        for k, c in b.terms.items():
            out[k] = out[k] + c if k in out else c
        return Poly(self.field, self.variables, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.field, self.variables,
                    {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        a, b = self._pair(other)
        return a + (-b)

    def __rsub__(self, other) -> "Poly":
        return -(self - other)

    def __mul__(self, other) -> "Poly":
        a, b = self._pair(other)
        out: dict = {}
        for k1, c1 in a.terms.items():
            for k2, c2 in b.terms.items():
                k = tuple(e1 + e2 for e1, e2 in zip(k1, k2))
                c = c1 * c2
                out[k] = out[k] + c if k in out else c
        return Poly(self.field, self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(self.field, self.variables, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c: FieldElement) -> "Poly":
        return Poly(self.field, self.variables,
                    {k: v * c for k, v in self.terms.items()})

    def evaluate(self, assignment: dict,
                 target: Optional[FieldDescriptor] = None) -> FieldElement:
        """Exact substitution; values may live in one extension field."""
        values = [assignment[v] for v in self.variables]
        if target is None:
            target = _common_field(self.field, values)
        values = [lift(v, target) for v in values]
        total = target.zero()
        for key, c in self.terms.items():
            part = lift(c, target)
            for v, e in zip(values, key):
                if e:
                    part = part * v ** e
            total = total + part
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field is other.field and \
            self.variables == other.variables and \
            self.terms.keys() == other.terms.keys() and \
            all(self.terms[k] == other.terms[k] for k in self.terms)

    def __hash__(self):
        raise TypeError("polynomials are not hashable")

    def __repr__(self):
        return f"<poly {format_poly(self)}>"


def _common_field(field: FieldDescriptor, values) -> FieldDescriptor:
    target = field
    for v in values:
        if v.field is target:
            continue
        if target.embedding_mask_into(v.field) is not None:
            target = v.field
        elif v.field.embedding_mask_into(target) is None:
            raise FieldMismatchError(
                f"no common extension of {target.name} and {v.field.name}")
    return target


class RatFun:
    """Quotient of two polynomials, denominator monic at its leading
    exponent tuple."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly):
        num, den = num._pair(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        c = den.terms[den.lead_key()]
        if not (c - num.field.one()).is_zero():
            inv = 1 / c
            num = num.scale(inv)
            den = den.scale(inv)
        self.num = num
        self.den = den

    @staticmethod
    def const(field: FieldDescriptor, variables: Sequence[str],
              c) -> "RatFun":
        return RatFun(Poly.const(field, variables, c),
                      Poly.const(field, variables, 1))

    @staticmethod
    def var(field: FieldDescriptor, variables: Sequence[str],
            name: str) -> "RatFun":
        return RatFun(Poly.var(field, variables, name),
                      Poly.const(field, variables, 1))

    @property
    def field(self) -> FieldDescriptor:
        return self.num.field

    @property
    def variables(self) -> tuple:
        return self.num.variables

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _coerce(self, other) -> "RatFun":
        if isinstance(other, RatFun):
            return other
        return RatFun.const(self.field, self.variables, other)

    def __add__(self, other) -> "RatFun":
        o = self._coerce(other)
        return RatFun(self.num * o.den + o.num * self.den,
                      self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFun":
        return RatFun(-self.num, self.den)

    def __sub__(self, other) -> "RatFun":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatFun":
        return -(self - other)

    def __mul__(self, other) -> "RatFun":
        o = self._coerce(other)
        return RatFun(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFun":
        o = self._coerce(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RatFun(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "RatFun":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "RatFun":
        if n < 0:
            if self.num.is_zero():
                raise ZeroDivisionError("negative power of zero")
            return RatFun(self.den, self.num) ** (-n)
        out = RatFun.const(self.field, self.variables, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFun):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        raise TypeError("rational functions are not hashable")

    def eval_at(self, assignment: dict,
                target: Optional[FieldDescriptor] = None
                ) -> Union[FieldElement, PoleMarker]:
        """Substitute; POLE when the denominator vanishes exactly."""
        missing = [v for v in self.variables if v not in assignment]
        if missing:
            raise ValueError(f"assignment misses {missing}")
        if target is None:
            values = [assignment[v] for v in self.variables]
            target = _common_field(self.field, values)
        bottom = self.den.evaluate(assignment, target)
        if bottom.is_zero():
            return POLE
        return self.num.evaluate(assignment, target) / bottom

    def __repr__(self):
        return f"<ratfun {format_ratfun(self)}>"


# -- printing -------------------------------------------------------------------

_PLAIN = frozenset("0123456789/")


def _coeff_text(c: FieldElement) -> str:
    s = str(c)
    body = s[1:] if s.startswith("-") else s
    if body and set(body) <= _PLAIN:
        return s
    return f"({s})"


def _monomial_text(variables: tuple, key: tuple) -> str:
    parts = []
    for v, e in zip(variables, key):
        if e == 1:
            parts.append(v)
        elif e:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    chunks = []
    for key in sorted(p.terms, reverse=True):
        mono = _monomial_text(p.variables, key)
        cs = _coeff_text(p.terms[key])
        if not mono:
            text = cs
        elif cs == "1":
            text = mono
        elif cs == "-1":
            text = f"-{mono}"
        else:
            text = f"{cs}*{mono}"
        if not chunks:
            chunks.append(text)
        elif text.startswith("-"):
            chunks.append(f" - {text[1:]}")
        else:
            chunks.append(f" + {text}")
    return "".join(chunks)


def format_ratfun(f: RatFun) -> str:
    num = format_poly(f.num)
    if f.den == Poly.const(f.field, f.variables, 1):
        return num
    return f"({num})/({format_poly(f.den)})"


# -- parsing --------------------------------------------------------------------

class RatFunSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def _tokenize(text: str) -> list:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("num", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        if ch in "+-*/^(),":
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise RatFunSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    """Recursive descent over +, -, *, /, ^ with the usual precedence;
    identifiers are the declared variables, `t` monomials, or `sqrt`."""

    def __init__(self, text: str, field: FieldDescriptor,
                 variables: Sequence[str], names=None):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.field = field
        self.variables = tuple(variables)
        self.names = names or {}

    def peek(self) -> tuple:
        return self.tokens[self.pos]

    def take(self, kind: Optional[str] = None) -> tuple:
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise RatFunSyntaxError(
                f"expected {kind!r}, found {tok[1]!r}", tok[2])
        self.pos += 1
        return tok

    def parse(self) -> RatFun:
        out = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise RatFunSyntaxError(f"trailing input {tok[1]!r}", tok[2])
        return out

    def expr(self) -> RatFun:
        negate = False
        if self.peek()[0] == "-":
            self.take()
            negate = True
        out = self.term()
        if negate:
            out = -out
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> RatFun:
        out = self.power()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            rhs = self.power()
            if op == "*":
                out = out * rhs
            else:
                if rhs.is_zero():
                    raise RatFunSyntaxError(
                        "division by zero", self.peek()[2])
                out = out / rhs
        return out

    def power(self) -> RatFun:
        kind, name, at = self.peek()
        if kind == "name" and name == "t" and \
                name not in self.variables and \
                self.tokens[self.pos + 1][0] == "^":
            return self.hahn_monomial()
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            base = base ** self.signed_int()
        return base

    def atom(self) -> RatFun:
        kind, text, at = self.take()
        if kind == "num":
            # fractions like 7/5 arrive as divisions and normalize away
            return RatFun.const(self.field, self.variables, int(text))
        if kind == "(":
            out = self.expr()
            self.take(")")
            return out
        if kind == "name":
            if text in self.variables:
                return RatFun.var(self.field, self.variables, text)
            if text == "sqrt":
                self.take("(")
                d = int(self.take("num")[1])
                self.take(")")
                return RatFun.const(self.field, self.variables,
                                    self.field.const(QuadExt(0, 1, d)))
            if text == "t":
                exp = self.field.group.elem(
                    *([Fraction(1)] + [Fraction(0)] *
                      (self.field.group.rank - 1)))
                return RatFun.const(self.field, self.variables,
                                    self.field.monomial(exp))
            if text in self.names:
                val = self.names[text]
                if val.field is not self.field:
                    val = lift(val, self.field)
                return RatFun.const(self.field, self.variables, val)
            raise RatFunSyntaxError(f"unknown name {text!r}", at)
        raise RatFunSyntaxError(f"unexpected token {text!r}", at)

    def hahn_monomial(self) -> RatFun:
        self.take("name")
        self.take("^")
        self.take("(")
        if self.peek()[0] == "(":
            self.take()
            coords = [self.fraction()]
            while self.peek()[0] == ",":
                self.take()
                coords.append(self.fraction())
            self.take(")")
        else:
            coords = [self.fraction()]
        self.take(")")
        if len(coords) != self.field.group.rank:
            raise RatFunSyntaxError(
                f"exponent rank {len(coords)} does not match the field",
                self.peek()[2])
        exp = self.field.group.elem(*coords)
        return RatFun.const(self.field, self.variables,
                            self.field.monomial(exp))

    def fraction(self) -> Fraction:
        sign = 1
        if self.peek()[0] == "-":
            self.take()
            sign = -1
        top = int(self.take("num")[1])
        if self.peek()[0] == "/":
            self.take()
            return Fraction(sign * top, int(self.take("num")[1]))
        return Fraction(sign * top)

    def signed_int(self) -> int:
        sign = 1
        if self.peek()[0] == "-":
            self.take()
            sign = -1
        return sign * int(self.take("num")[1])


def parse_ratfun(text: str, field: FieldDescriptor,
                 variables: Sequence[str], names=None) -> RatFun:
    return _Parser(text, field, variables, names).parse()
