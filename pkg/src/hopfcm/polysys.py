"""Polynomial vector fields on three-dimensional state space.

Evaluation, Jacobians, characteristic cubics and the Hopf eigenvalue test,
closed-form and Newton equilibria, existence regions, and affine/linear
changes of coordinates with time rescaling.  Coefficients are either exact
field elements (``ParamExpr``/``Rational``/``Jet``) or machine scalars; the
algorithms are generic over the scalar type.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import (
    NonConvergence,
    PoleAtPoint,
    RegionUndefined,
    SchemaError,
    SingularTransform,
)
from . import grammar
from .paramfield import ParamExpr, is_zero_scalar, one_like

STATE_ARITY = 3


class StatePoly:
    """Sparse polynomial in the three state variables, generic coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = {e: c for e, c in terms.items() if not is_zero_scalar(c)}

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def const(cls, value):
        return cls({(0, 0, 0): value})

    @classmethod
    def monomial(cls, exp, coeff):
        return cls({tuple(exp): coeff})

    @classmethod
    def var(cls, axis, one):
        e = tuple(1 if j == axis else 0 for j in range(STATE_ARITY))
        return cls({e: one})

    def is_zero(self):
        return not self.terms

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def __add__(self, other):
        if not isinstance(other, StatePoly):
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            if e in terms:
                terms[e] = terms[e] + c
            else:
                terms[e] = c
        return StatePoly(terms)

    def __neg__(self):
        return StatePoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, StatePoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, StatePoly):
            return NotImplemented
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                if e in out:
                    out[e] = out[e] + c1 * c2
                else:
                    out[e] = c1 * c2
        return StatePoly(out)

    def scale(self, factor):
        return StatePoly({e: c * factor for e, c in self.terms.items()})

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponents must be nonnegative integers")
        if not self.terms and n == 0:
            raise ValueError("0**0 of an empty polynomial needs a coefficient ring")
        sample = next(iter(self.terms.values()), None)
        result = StatePoly.const(one_like(sample)) if sample is not None else None
        if n == 0:
            return result
        acc = None
        base = self
        while n:
            if n & 1:
                acc = base if acc is None else acc * base
            n >>= 1
            if n:
                base = base * base
        return acc

    def diff(self, axis):
        out = {}
        for e, c in self.terms.items():
            if e[axis] == 0:
                continue
            e2 = tuple(x - 1 if j == axis else x for j, x in enumerate(e))
            coeff = c * e[axis]
            if e2 in out:
                out[e2] = out[e2] + coeff
            else:
                out[e2] = coeff
        return StatePoly(out)

    def evaluate(self, point):
        acc = None
        for e, c in self.terms.items():
            term = c
            for v, p in zip(point, e):
                if p:
                    term = term * v**p
            acc = term if acc is None else acc + term
        return acc

    def evaluate_or(self, point, default):
        val = self.evaluate(point)
        return default if val is None else val

    def map_coeffs(self, fn):
        return StatePoly({e: fn(c) for e, c in self.terms.items()})

    def compose(self, subs):
        """Substitute each state variable by the StatePoly in ``subs``."""
        acc = None
        for e, c in self.terms.items():
            term = StatePoly.const(c)
            for s, p in zip(subs, e):
                if p:
                    term = term * s**p
            acc = term if acc is None else acc + term
        return StatePoly.zero() if acc is None else acc

    def constant_term(self):
        return self.terms.get((0, 0, 0))

    def homogeneous_component(self, degree):
        return StatePoly({e: c for e, c in self.terms.items() if sum(e) == degree})

    def min_degree(self):
        return min((sum(e) for e in self.terms), default=-1)

    def chop(self, tol):
        """Drop float coefficients below tol in absolute value."""
        return StatePoly(
            {e: c for e, c in self.terms.items() if abs(c) > tol}
        )

    def __eq__(self, other):
        if not isinstance(other, StatePoly):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(
            is_zero_scalar(self.terms[e] - other.terms[e]) for e in self.terms
        )

    def __str__(self):
        if not self.terms:
            return "0"
        names = ("x1", "x2", "x3")
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e), reverse=True):
            mono = "*".join(
                n if p == 1 else f"{n}^{p}" for n, p in zip(names, e) if p
            )
            c = self.terms[e]
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    __repr__ = __str__


@dataclass
class VectorField3:
    """Three StatePolys sharing a backend tag and declared parameter tuple."""

    components: tuple
    backend: str  # "exact" | "float"
    params: tuple = ()
    name: Optional[str] = None
    symmetry: Optional[str] = None

    def evaluate(self, point):
        zero = 0.0 if self.backend == "float" else Fraction(0)
        return tuple(c.evaluate_or(point, zero) for c in self.components)

    def jacobian_at(self, point):
        zero = 0.0 if self.backend == "float" else Fraction(0)
        return [
            [self.components[i].diff(j).evaluate_or(point, zero) for j in range(3)]
            for i in range(3)
        ]

    def linear_matrix(self):
        """Coefficient matrix of the linear part (field must vanish at 0)."""
        rows = []
        for comp in self.components:
            row = []
            for j in range(3):
                e = tuple(1 if i == j else 0 for i in range(3))
                c = comp.terms.get(e)
                row.append(c if c is not None else self._zero())
            rows.append(row)
        return rows

    def _zero(self):
        if self.backend == "float":
            return 0.0
        if self.params:
            return ParamExpr.zero(self.params)
        return Fraction(0)

    def substitute_params(self, mapping, new_params=()):
        """Bind some or all parameters; exact backend only."""
        comps = tuple(
            c.map_coeffs(
                lambda q: q.substitute(mapping, new_params)
                if isinstance(q, ParamExpr)
                else q
            )
            for c in self.components
        )
        return VectorField3(comps, self.backend, tuple(new_params), self.name)

    def to_float(self, assignment):
        """Evaluate all coefficients numerically, producing a float field."""
        vals = {k: float(v) for k, v in assignment.items()}

        def conv(q):
            if isinstance(q, ParamExpr):
                return float(q.evaluate(vals))
            return float(q)

        comps = tuple(c.map_coeffs(conv) for c in self.components)
        return VectorField3(comps, "float", (), self.name)


@dataclass
class CharCubic:
    """Coefficients of P(lam) = lam^3 + alpha lam^2 + beta lam + gamma."""

    alpha: object
    beta: object
    gamma: object


@dataclass
class HopfReport:
    """Outcome of the eigenvalue test at an equilibrium.

    ``is_hopf`` is None when the sign conditions are undecidable symbolically;
    ``conditions`` always carries the residuals (gamma - alpha*beta, beta,
    alpha) for inspection.  ``omega_squared`` is beta.
    """

    is_hopf: Optional[bool]
    omega_squared: object
    lambda3: object
    conditions: dict = field(default_factory=dict)

    @property
    def omega(self):
        try:
            return float(self.omega_squared) ** 0.5
        except TypeError:
            if isinstance(self.omega_squared, ParamExpr) and self.omega_squared.is_constant():
                return float(self.omega_squared.constant_value()) ** 0.5
            return None

    def eigenvalues(self):
        w = self.omega
        lam3 = self.lambda3
        if isinstance(lam3, ParamExpr) and lam3.is_constant():
            lam3 = float(lam3.constant_value())
        if w is None:
            return None
        return (complex(0, w), complex(0, -w), complex(lam3, 0))


def char_cubic(m) -> CharCubic:
    """alpha = -trace, beta = sum of principal 2x2 minors, gamma = -det."""
    a = m
    alpha = -(a[0][0] + a[1][1] + a[2][2])
    beta = (
        a[0][0] * a[1][1]
        - a[0][1] * a[1][0]
        + a[0][0] * a[2][2]
        - a[0][2] * a[2][0]
        + a[1][1] * a[2][2]
        - a[1][2] * a[2][1]
    )
    det = (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )
    return CharCubic(alpha, beta, -det)


def _sign_of(x):
    """+1, 0, -1 for decidable scalars, None for non-constant expressions."""
    if isinstance(x, ParamExpr):
        if x.is_zero():
            return 0
        if x.is_constant():
            v = x.constant_value()
            return (v > 0) - (v < 0)
        return None
    if isinstance(x, (int, Fraction, float)):
        return (x > 0) - (x < 0)
    return None


def hopf_test(cubic: CharCubic, tol: float = 1e-9) -> HopfReport:
    """Purely imaginary pair plus nonzero real eigenvalue.

    Requires gamma - alpha*beta = 0, beta > 0 and alpha != 0; then the
    spectrum is +/- sqrt(beta) i together with -alpha.  Exact residuals are
    tested exactly; float residuals against ``tol`` relative to the cubic's
    coefficient scale.
    """
    alpha, beta, gamma = cubic.alpha, cubic.beta, cubic.gamma
    residual = gamma - alpha * beta
    conditions = {"gamma_minus_alpha_beta": residual, "beta": beta, "alpha": alpha}
    if isinstance(residual, float):
        scale = max(1.0, abs(gamma), abs(alpha * beta))
        ok = abs(residual) <= tol * scale and beta > tol and abs(alpha) > tol
        return HopfReport(ok, beta, -alpha, conditions)
    s_res = _sign_of(residual)
    s_beta = _sign_of(beta)
    s_alpha = _sign_of(alpha)
    if s_res is None or s_beta is None or s_alpha is None:
        verdict = None
        if s_res not in (0, None):
            verdict = False  # residual provably nonzero
        return HopfReport(verdict, beta, -alpha, conditions)
    ok = s_res == 0 and s_beta > 0 and s_alpha != 0
    return HopfReport(ok, beta, -alpha, conditions)


# ---------------------------------------------------------------------------
# existence regions for the d = 0 equilibria


def check_existence_conditions(region: str, params) -> bool:
    """Membership in one of the parameter sets W1..W4 (d = 0 families).

    Each requires discriminant (a+b)^2 + 4ac > 0 and c != 0.
    """
    a, b, c = (Fraction(params[k]) for k in ("a", "b", "c"))
    delta = (a + b) ** 2 + 4 * a * c
    if delta <= 0:
        raise RegionUndefined(f"discriminant {delta} is not positive")
    sqrt_delta = _fraction_sqrt_or_float(delta)
    if region == "W1":
        return a > 0 and c != 0 and b < -a - sqrt_delta
    if region == "W2":
        return a < 0 and c != 0 and b > -a - sqrt_delta
    if region == "W3":
        return a > 0 and c != 0 and b < -a + sqrt_delta
    if region == "W4":
        return a < 0 and c != 0 and b > -a + sqrt_delta
    raise ValueError(f"unknown region {region!r}")


def _fraction_sqrt_or_float(q: Fraction):
    """Exact square root when q is a perfect rational square, else float."""
    num, den = q.numerator, q.denominator
    rn = _isqrt_exact(num)
    rd = _isqrt_exact(den)
    if rn is not None and rd is not None:
        return Fraction(rn, rd)
    return float(q) ** 0.5


def _isqrt_exact(n: int):
    import math

    r = math.isqrt(n)
    return r if r * r == n else None


# ---------------------------------------------------------------------------
# Newton refinement (float backend)


def equilibria(fld: VectorField3, mode: str, seeds=None, params=None):
    """Equilibria either from the closed-form catalog or by Newton refinement.

    ``closed_form_catalog`` needs the parameter values of the original
    quadratic family; ``newton`` needs a float backend and a seed list.
    """
    if mode == "closed_form_catalog":
        from .catalog import equilibria_catalog

        if params is None:
            raise ValueError("catalog mode needs the parameter values")
        return equilibria_catalog(params)
    if mode == "newton":
        if fld.backend != "float":
            raise ValueError("newton mode needs the float backend")
        if not seeds:
            raise ValueError("newton mode needs a seed list")
        return [
            (f"root{i}", newton_equilibrium(fld, seed), True)
            for i, seed in enumerate(seeds)
        ]
    raise ValueError(f"unknown mode {mode!r}")


def newton_equilibrium(fld: VectorField3, seed, tol=1e-12, max_iter=100):
    """Damped Newton on the residual; tolerance on the residual sup-norm."""
    import numpy as np

    x = np.array([float(v) for v in seed], dtype=float)
    for _ in range(max_iter):
        r = np.array(fld.evaluate(tuple(x)), dtype=float)
        if np.max(np.abs(r)) < tol:
            return tuple(x)
        jac = np.array(fld.jacobian_at(tuple(x)), dtype=float)
        try:
            step = np.linalg.solve(jac, r)
        except np.linalg.LinAlgError as exc:
            raise NonConvergence(f"singular Jacobian at {x}") from exc
        lam = 1.0
        best = None
        r0 = np.max(np.abs(r))
        for _ in range(40):
            cand = x - lam * step
            rc = np.max(np.abs(np.array(fld.evaluate(tuple(cand)), dtype=float)))
            if rc < r0:
                best = cand
                break
            lam *= 0.5
        if best is None:
            raise NonConvergence(f"step damping failed at {x}")
        x = best
    r = np.max(np.abs(np.array(fld.evaluate(tuple(x)), dtype=float)))
    if r < tol:
        return tuple(x)
    raise NonConvergence(f"residual {r} after {max_iter} iterations")


# ---------------------------------------------------------------------------
# coordinate changes


def _mat_det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _mat_inv3(m):
    det = _mat_det3(m)
    if is_zero_scalar(det):
        raise SingularTransform("transform matrix is singular")
    if isinstance(det, (float, complex)) and abs(det) < 1e-300:
        raise SingularTransform("transform matrix is numerically singular")
    cof = [
        [
            m[1][1] * m[2][2] - m[1][2] * m[2][1],
            -(m[1][0] * m[2][2] - m[1][2] * m[2][0]),
            m[1][0] * m[2][1] - m[1][1] * m[2][0],
        ],
        [
            -(m[0][1] * m[2][2] - m[0][2] * m[2][1]),
            m[0][0] * m[2][2] - m[0][2] * m[2][0],
            -(m[0][0] * m[2][1] - m[0][1] * m[2][0]),
        ],
        [
            m[0][1] * m[1][2] - m[0][2] * m[1][1],
            -(m[0][0] * m[1][2] - m[0][2] * m[1][0]),
            m[0][0] * m[1][1] - m[0][1] * m[1][0],
        ],
    ]
    return [[cof[j][i] / det for j in range(3)] for i in range(3)], det


def transform(fld: VectorField3, shift, linear, time_scale) -> VectorField3:
    """Express the dynamics in new coordinates u with x = shift + linear @ u,
    after the time rescaling tau = time_scale * t (the field divides by it).
    """
    if is_zero_scalar(time_scale):
        raise SingularTransform("time_scale must be nonzero")
    inv, _ = _mat_inv3(linear)
    one = one_like(time_scale)
    subs = []
    for i in range(3):
        terms = {}
        if not is_zero_scalar(shift[i]):
            terms[(0, 0, 0)] = shift[i]
        for j in range(3):
            if not is_zero_scalar(linear[i][j]):
                e = tuple(1 if t == j else 0 for t in range(3))
                terms[e] = linear[i][j]
        subs.append(StatePoly(terms))
    composed = [c.compose(subs) for c in fld.components]
    inv_scale = one / time_scale
    new_comps = []
    for i in range(3):
        acc = None
        for j in range(3):
            if is_zero_scalar(inv[i][j]):
                continue
            part = composed[j].scale(inv[i][j])
            acc = part if acc is None else acc + part
        acc = StatePoly.zero() if acc is None else acc
        new_comps.append(acc.scale(inv_scale))
    return VectorField3(tuple(new_comps), fld.backend, fld.params, fld.name)


# ---------------------------------------------------------------------------
# system-definition documents


def parse_system(document) -> VectorField3:
    """Build a field from a JSON document or dict (see the schema in README).

    Schema: {"backend": "exact"|"float", "params": {name: value-or-null},
    "state_vars": [s1, s2, s3], "equations": [[{"exp": [i,j,k],
    "coeff": "<grammar string>"}...] x3]}.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise SchemaError("document must be a JSON object")
    backend = document.get("backend")
    if backend not in ("exact", "float"):
        raise SchemaError("backend must be 'exact' or 'float'")
    params_doc = document.get("params", {})
    if not isinstance(params_doc, dict):
        raise SchemaError("params must be an object")
    state_vars = document.get("state_vars")
    if not (isinstance(state_vars, list) and len(state_vars) == 3):
        raise SchemaError("state_vars must list exactly three names")
    equations = document.get("equations")
    if not (isinstance(equations, list) and len(equations) == 3):
        raise SchemaError("equations must list exactly three components")
    if any(not eq for eq in equations):
        raise SchemaError("empty equations array")

    param_names = tuple(sorted(params_doc))
    if backend == "float":
        missing = [k for k, v in params_doc.items() if v is None]
        if missing:
            raise SchemaError(f"float backend requires values for {missing}")
        values = {k: float(_parse_value(v)) for k, v in params_doc.items()}
    else:
        values = {
            k: Fraction(_parse_value(v)) for k, v in params_doc.items() if v is not None
        }
        free = tuple(k for k in param_names if k not in values)

    comps = []
    for eq in equations:
        terms = {}
        for item in eq:
            if not isinstance(item, dict) or "exp" not in item or "coeff" not in item:
                raise SchemaError("each monomial needs 'exp' and 'coeff'")
            exp = item["exp"]
            if (
                not isinstance(exp, list)
                or len(exp) != 3
                or any(not isinstance(e, int) or e < 0 for e in exp)
            ):
                raise SchemaError(f"malformed monomial exponent {exp!r}")
            node = grammar.parse_expression(item["coeff"])
            used = grammar.ast_params(node)
            unknown = used - set(param_names)
            if unknown:
                raise SchemaError(f"unknown parameter(s) {sorted(unknown)}")
            if backend == "float":
                coeff = grammar.eval_float(node, values)
            else:
                coeff = grammar.eval_exact(node, param_names)
                if values:
                    try:
                        coeff = coeff.substitute(values, free)
                    except PoleAtPoint as exc:
                        raise SchemaError(
                            "parameter values hit a coefficient pole"
                        ) from exc
            e = tuple(exp)
            if e in terms:
                terms[e] = terms[e] + coeff
            else:
                terms[e] = coeff
        comps.append(StatePoly(terms))
    return VectorField3(
        tuple(comps),
        backend,
        () if backend == "float" else free,
        document.get("name"),
    )


def _parse_value(v):
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, (int, float)):
        return v
    raise SchemaError(f"bad parameter value {v!r}")
