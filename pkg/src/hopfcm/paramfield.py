"""Exact arithmetic over declared real parameters.

The coefficient tower used by the symbolic half of the package:

* ``Rational``          -- arbitrary-precision rationals (``fractions.Fraction``).
* ``ParamPoly``         -- multivariate polynomials in the declared parameters,
  sparse dict of exponent vectors, rational coefficients.
* ``ParamExpr``         -- the fraction field of ``ParamPoly``, kept in a
  canonical form (gcd-cancelled, primitive positive-leading denominator) so
  structural equality is field equality.
* ``GaussExpr``         -- the Gaussian extension ``re + i*im`` of any of the
  real scalar types here, used for complexified vector fields.
* ``Jet``               -- truncated polynomials in designated small parameters,
  used to expand focus quantities around a point of the center variety.

All values are immutable after construction; operations are pure functions.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DivisionByZero, PoleAtPoint, TruncationTooLow

Rational = Fraction


def rat(value, den=None) -> Fraction:
    """Build a Rational from ints, strings like '3/7', floats or Fractions."""
    if den is not None:
        return Fraction(value, den)
    if isinstance(value, str):
        return Fraction(value)
    return Fraction(value)


# ---------------------------------------------------------------------------
# monomial helpers (exponent tuples, graded-lex order)


def _grlex_key(exp):
    return (sum(exp), exp)


def _mono_mul(e1, e2):
    return tuple(a + b for a, b in zip(e1, e2))


class ParamPoly:
    """Sparse multivariate polynomial over Q in a fixed parameter tuple."""

    __slots__ = ("params", "terms", "_hash")

    def __init__(self, params, terms):
        self.params = tuple(params)
        self.terms = {e: c for e, c in terms.items() if c != 0}
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, params):
        return cls(params, {})

    @classmethod
    def const(cls, params, value):
        value = Fraction(value)
        n = len(params)
        if value == 0:
            return cls(params, {})
        return cls(params, {(0,) * n: value})

    @classmethod
    def var(cls, params, name):
        i = params.index(name)
        e = tuple(1 if j == i else 0 for j in range(len(params)))
        return cls(params, {e: Fraction(1)})

    # -- basic queries -------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self):
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def leading(self):
        """Leading (exponent, coefficient) under graded lex order."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def degree_in(self, i):
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, ParamPoly):
            if other.params != self.params:
                raise ValueError("parameter rings differ")
            return other
        if isinstance(other, (int, Fraction)):
            return ParamPoly.const(self.params, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return ParamPoly(self.params, terms)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly(self.params, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _mono_mul(e1, e2)
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return ParamPoly(self.params, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponents must be nonnegative integers")
        result = ParamPoly.const(self.params, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.params, frozenset(self.terms.items())))
        return self._hash

    # -- calculus / evaluation ------------------------------------------------

    def derivative(self, name):
        i = self.params.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            e2 = tuple(x - 1 if j == i else x for j, x in enumerate(e))
            out[e2] = out.get(e2, 0) + c * e[i]
        return ParamPoly(self.params, out)

    def evaluate(self, values):
        """Evaluate with every parameter bound.

        ``values`` maps parameter name to any scalar supporting + * **
        (Rational, float, Jet, ParamExpr, ...). Returns a Rational for the
        empty polynomial.
        """
        vals = [values[p] for p in self.params]
        acc = None
        for e, c in sorted(self.terms.items(), key=lambda item: _grlex_key(item[0])):
            term = c
            for v, p in zip(vals, e):
                if p:
                    term = term * v**p
            acc = term if acc is None else acc + term
        return Fraction(0) if acc is None else acc

    def substitute(self, mapping, new_params):
        """Partial substitution; unmapped parameters carry over to new_params."""
        values = {}
        for p in self.params:
            if p in mapping:
                v = mapping[p]
                if isinstance(v, ParamExpr):
                    if v.num.params != tuple(new_params):
                        raise ValueError("substitution value in wrong ring")
                    values[p] = v
                else:
                    values[p] = ParamExpr.const(new_params, Fraction(v))
            else:
                values[p] = ParamExpr.var(new_params, p)
        result = self.evaluate(values)
        if isinstance(result, Fraction):
            return ParamExpr.const(new_params, result)
        return result

    # -- printing -------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            factors = []
            for name, p in zip(self.params, e):
                if p == 1:
                    factors.append(name)
                elif p > 1:
                    factors.append(f"{name}^{p}")
            if not factors:
                body = str(c)
            elif c == 1:
                body = "*".join(factors)
            elif c == -1:
                body = "-" + "*".join(factors)
            else:
                body = str(c) + "*" + "*".join(factors)
            parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    __repr__ = __str__


# ---------------------------------------------------------------------------
# multivariate gcd via content / primitive-part recursion


def _rational_content(poly: ParamPoly) -> Fraction:
    """Positive rational c with poly/c integer-primitive; sign from grlex lead."""
    if poly.is_zero():
        return Fraction(1)
    num_gcd = 0
    den_lcm = 1
    for c in poly.terms.values():
        num_gcd = math.gcd(num_gcd, abs(c.numerator))
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    content = Fraction(num_gcd, den_lcm)
    _, lead = poly.leading()
    return content if lead > 0 else -content


def _scale(poly: ParamPoly, q: Fraction) -> ParamPoly:
    if q == 1:
        return poly
    return ParamPoly(poly.params, {e: c * q for e, c in poly.terms.items()})


def _coeff_wrt(poly: ParamPoly, i: int, d: int) -> ParamPoly:
    """Coefficient of x_i^d, as a polynomial with x_i-exponent zeroed."""
    out = {}
    for e, c in poly.terms.items():
        if e[i] == d:
            e2 = tuple(0 if j == i else x for j, x in enumerate(e))
            out[e2] = c
    return ParamPoly(poly.params, out)

def _shift(poly: ParamPoly, i: int, d: int) -> ParamPoly:
    """Multiply by x_i^d."""
    return ParamPoly(
        poly.params,
        {tuple(x + d if j == i else x for j, x in enumerate(e)): c
         for e, c in poly.terms.items()},
    )


def exact_div(a: ParamPoly, b: ParamPoly) -> ParamPoly:
    """Quotient a/b when b divides a exactly; raises ValueError otherwise."""
    if b.is_zero():
        raise DivisionByZero("polynomial division by zero")
    if a.is_zero():
        return a
    if b.is_constant():
        return _scale(a, 1 / b.constant_value())
    params = a.params
    rem = a
    quo = {}
    be, bc = b.leading()
    while not rem.is_zero():
        re, rc = rem.leading()
        qe = tuple(x - y for x, y in zip(re, be))
        if any(x < 0 for x in qe):
            raise ValueError("inexact polynomial division")
        qc = rc / bc
        quo[qe] = quo.get(qe, 0) + qc
        rem = rem - ParamPoly(params, {qe: qc}) * b
    return ParamPoly(params, quo)


def _content_wrt(poly: ParamPoly, i: int) -> ParamPoly:
    cont = ParamPoly.zero(poly.params)
    for d in range(poly.degree_in(i) + 1):
        c = _coeff_wrt(poly, i, d)
        if not c.is_zero():
            cont = poly_gcd(cont, c)
            if cont.is_constant():
                break
    return cont


def _prem(f: ParamPoly, g: ParamPoly, i: int) -> ParamPoly:
    """Pseudo-remainder of f by g with respect to variable i."""
    dg = g.degree_in(i)
    lcg = _coeff_wrt(g, i, dg)
    r = f
    while not r.is_zero() and r.degree_in(i) >= dg:
        dr = r.degree_in(i)
        lcr = _coeff_wrt(r, i, dr)
        r = lcg * r - _shift(lcr * g, i, dr - dg)
    return r


def _primitive_positive(poly: ParamPoly) -> ParamPoly:
    c = _rational_content(poly)
    return poly if c == 1 else _scale(poly, 1 / c)


def poly_gcd(a: ParamPoly, b: ParamPoly) -> ParamPoly:
    """gcd in Q[params], normalized integer-primitive with positive lead."""
    if a.is_zero():
        return _primitive_positive(b) if not b.is_zero() else b
    if b.is_zero():
        return _primitive_positive(a)
    if a.is_constant() or b.is_constant():
        return ParamPoly.const(a.params, 1)
    # main variable: lowest index occurring in either operand
    arity = len(a.params)
    main = next(
        i for i in range(arity) if a.degree_in(i) > 0 or b.degree_in(i) > 0
    )
    da, db = a.degree_in(main), b.degree_in(main)
    if da == 0 or db == 0:
        # gcd divides the content of the operand that involves main
        f, g = (a, b) if da == 0 else (b, a)
        return poly_gcd(f, _content_wrt(g, main))
    ca, cb = _content_wrt(a, main), _content_wrt(b, main)
    pa, pb = exact_div(a, ca), exact_div(b, cb)
    cg = poly_gcd(ca, cb)
    f, g = (pa, pb) if pa.degree_in(main) >= pb.degree_in(main) else (pb, pa)
    while True:
        r = _prem(f, g, main)
        if r.is_zero():
            break
        if r.degree_in(main) == 0:
            g = ParamPoly.const(a.params, 1)
            break
        f, g = g, exact_div(r, _content_wrt(r, main))
    return _primitive_positive(cg * _primitive_positive(g))


# ---------------------------------------------------------------------------


class ParamExpr:
    """Element of the fraction field Q(params), canonical after normalization.

    Canonical form: gcd(num, den) = 1 and den integer-primitive with positive
    leading coefficient under graded lex, so equal field elements have
    identical representations.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: ParamPoly, den: ParamPoly, _normalized=False):
        if den.is_zero():
            raise DivisionByZero("zero denominator polynomial")
        if not _normalized:
            num, den = self._normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @staticmethod
    def _normalize(num, den):
        if num.is_zero():
            return num, ParamPoly.const(num.params, 1)
        g = poly_gcd(num, den)
        if not g.is_constant():
            num, den = exact_div(num, g), exact_div(den, g)
        c = _rational_content(den)
        if c != 1:
            num, den = _scale(num, 1 / c), _scale(den, 1 / c)
        return num, den

    # -- constructors ---------------------------------------------------------

    @classmethod
    def const(cls, params, value):
        return cls(
            ParamPoly.const(params, value),
            ParamPoly.const(params, 1),
            _normalized=True,
        )

    @classmethod
    def var(cls, params, name):
        return cls(
            ParamPoly.var(params, name),
            ParamPoly.const(params, 1),
            _normalized=True,
        )

    @classmethod
    def zero(cls, params):
        return cls.const(params, 0)

    @classmethod
    def one(cls, params):
        return cls.const(params, 1)

    @classmethod
    def from_poly(cls, poly):
        return cls(poly, ParamPoly.const(poly.params, 1), _normalized=True)

    # -- queries ---------------------------------------------------------------

    @property
    def params(self):
        return self.num.params

    def is_zero(self):
        return self.num.is_zero()

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        return self.num.constant_value() / self.den.constant_value()

    # -- arithmetic --------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, ParamExpr):
            if other.params != self.params:
                raise ValueError("parameter rings differ")
            return other
        if isinstance(other, (int, Fraction)):
            return ParamExpr.const(self.params, other)
        if isinstance(other, ParamPoly):
            return ParamExpr.from_poly(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return ParamExpr(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return ParamExpr(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return ParamExpr(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division by zero field element")
        return ParamExpr(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n):
        if not isinstance(n, int):
            raise ValueError("exponents must be integers")
        if n < 0:
            return ParamExpr.one(self.params) / self ** (-n)
        return ParamExpr(self.num**n, self.den**n)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- calculus / evaluation ------------------------------------------------------

    def derivative(self, name):
        if name not in self.params:
            raise ValueError(f"unknown parameter {name!r}")
        dn = self.num.derivative(name)
        dd = self.den.derivative(name)
        return ParamExpr(dn * self.den - self.num * dd, self.den * self.den)

    def evaluate(self, values):
        """Evaluate at a full assignment; raises PoleAtPoint on a vanishing
        denominator.  Values may be Rationals, floats, or Jets."""
        den_val = self.den.evaluate(values)
        if _scalar_is_noninvertible(den_val):
            raise PoleAtPoint(f"denominator vanishes at {values!r}")
        num_val = self.num.evaluate(values)
        return num_val / den_val

    def substitute(self, mapping, new_params):
        """Partial substitution into a (possibly) smaller parameter ring."""
        den_sub = self.den.substitute(mapping, new_params)
        if den_sub.is_zero():
            raise PoleAtPoint(f"denominator vanishes under {mapping!r}")
        num_sub = self.num.substitute(mapping, new_params)
        return num_sub / den_sub

    def __str__(self):
        if self.den.is_constant() and self.den.constant_value() == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def _scalar_is_noninvertible(x):
    if isinstance(x, Jet):
        return x.constant_part() == 0
    if isinstance(x, ParamExpr):
        return x.is_zero()
    return x == 0


# ---------------------------------------------------------------------------


class GaussExpr:
    """re + i*im over any real scalar type of this module (parameters stay real,
    so conjugation negates im and fixes everything else)."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = re
        self.im = im

    @classmethod
    def real(cls, value):
        return cls(value, _zero_like(value))

    def conj(self):
        return GaussExpr(self.re, -self.im)

    def is_zero(self):
        return _is_zero_scalar(self.re) and _is_zero_scalar(self.im)

    def _coerce(self, other):
        if isinstance(other, GaussExpr):
            return other
        if isinstance(other, (int, Fraction, ParamExpr, Jet)):
            return GaussExpr(other + _zero_like(self.re), _zero_like(self.re))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return GaussExpr(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussExpr(-self.re, -self.im)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return GaussExpr(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        norm = other.re * other.re + other.im * other.im
        return GaussExpr(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponents must be nonnegative integers")
        result = GaussExpr(_one_like(self.re), _zero_like(self.re))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self):
        return f"({self.re}) + i*({self.im})"

    __repr__ = __str__


# ---------------------------------------------------------------------------


class JetContext:
    """Declares the small-parameter names and the truncation degree."""

    __slots__ = ("names", "degree")

    def __init__(self, names, degree):
        if degree < 0:
            raise ValueError("truncation degree must be nonnegative")
        self.names = tuple(names)
        self.degree = int(degree)

    def __eq__(self, other):
        return (
            isinstance(other, JetContext)
            and self.names == other.names
            and self.degree == other.degree
        )

    def __hash__(self):
        return hash((self.names, self.degree))

    def zero(self):
        return Jet(self, {})

    def one(self):
        return Jet(self, {(): Fraction(1)})

    def const(self, value):
        value = Fraction(value)
        return Jet(self, {(): value} if value else {})

    def eps(self, name):
        """The basis jet for one small parameter."""
        i = self.names.index(name)
        if self.degree < 1:
            return self.zero()
        return Jet(self, {((i, 1),): Fraction(1)})


def _jet_mono_mul(m1, m2, cap):
    """Merge two sorted (index, exp) monomials; None when degree exceeds cap."""
    if not m1:
        return m2
    if not m2:
        return m1
    out = dict(m1)
    for i, e in m2:
        out[i] = out.get(i, 0) + e
    if sum(out.values()) > cap:
        return None
    return tuple(sorted(out.items()))


def _jet_mono_degree(m):
    return sum(e for _, e in m)


class Jet:
    """Truncated polynomial in the small parameters of a JetContext.

    Arithmetic drops every monomial of total degree above the context degree.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        self.terms = {m: c for m, c in terms.items() if c != 0}

    def constant_part(self):
        return self.terms.get((), Fraction(0))

    def is_zero(self):
        return not self.terms

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.ctx != self.ctx:
                raise ValueError("jet contexts differ")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Jet(self.ctx, terms)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        cap = self.ctx.degree
        out = {}
        for m1, c1 in self.terms.items():
            d1 = _jet_mono_degree(m1)
            for m2, c2 in other.terms.items():
                if d1 + _jet_mono_degree(m2) > cap:
                    continue
                m = _jet_mono_mul(m1, m2, cap)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Jet(self.ctx, out)

    __rmul__ = __mul__

    def inverse(self):
        c0 = self.constant_part()
        if c0 == 0:
            raise DivisionByZero("jet with zero constant part is not invertible")
        # (c0 + n)^-1 = (1/c0) * sum_k (-n/c0)^k, n nilpotent past the cap
        inv0 = 1 / c0
        nil = Jet(self.ctx, {m: -c * inv0 for m, c in self.terms.items() if m != ()})
        acc = self.ctx.const(inv0)
        power = self.ctx.const(inv0)
        for _ in range(self.ctx.degree):
            power = power * nil
            if power.is_zero():
                break
            acc = acc + power
        return acc

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponents must be nonnegative integers")
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def homogeneous_part(self, degree):
        """The degree-m homogeneous layer, as a jet."""
        if degree > self.ctx.degree:
            raise TruncationTooLow(
                f"jet truncated at degree {self.ctx.degree}, "
                f"degree {degree} requested"
            )
        return Jet(
            self.ctx,
            {m: c for m, c in self.terms.items() if _jet_mono_degree(m) == degree},
        )

    def linear_coefficients(self):
        """Gradient w.r.t. the small parameters, as a list of Rationals."""
        grad = [Fraction(0)] * len(self.ctx.names)
        for m, c in self.terms.items():
            if _jet_mono_degree(m) == 1:
                grad[m[0][0]] = c
        return grad

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (_jet_mono_degree(m), m)):
            c = self.terms[m]
            factors = [
                self.ctx.names[i] if e == 1 else f"{self.ctx.names[i]}^{e}"
                for i, e in m
            ]
            parts.append(str(c) + ("*" + "*".join(factors) if factors else ""))
        return " + ".join(parts)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# scalar dispatch helpers shared by the generic algorithms


def _zero_like(x):
    if isinstance(x, ParamExpr):
        return ParamExpr.zero(x.params)
    if isinstance(x, Jet):
        return x.ctx.zero()
    if isinstance(x, Fraction):
        return Fraction(0)
    if isinstance(x, complex):
        return 0j
    if isinstance(x, float):
        return 0.0
    if isinstance(x, int):
        return Fraction(0)
    if isinstance(x, GaussExpr):
        return GaussExpr(_zero_like(x.re), _zero_like(x.re))
    raise TypeError(f"no zero for {type(x)!r}")


def _one_like(x):
    if isinstance(x, ParamExpr):
        return ParamExpr.one(x.params)
    if isinstance(x, Jet):
        return x.ctx.one()
    if isinstance(x, Fraction):
        return Fraction(1)
    if isinstance(x, complex):
        return 1 + 0j
    if isinstance(x, float):
        return 1.0
    if isinstance(x, int):
        return Fraction(1)
    if isinstance(x, GaussExpr):
        return GaussExpr(_one_like(x.re), _zero_like(x.re))
    raise TypeError(f"no one for {type(x)!r}")


def _is_zero_scalar(x):
    if isinstance(x, (ParamExpr, Jet, GaussExpr)):
        return x.is_zero()
    return x == 0


def conjugate_scalar(x):
    if isinstance(x, GaussExpr):
        return x.conj()
    if isinstance(x, complex):
        return x.conjugate()
    return x


zero_like = _zero_like
one_like = _one_like
is_zero_scalar = _is_zero_scalar
