"""Focus quantities via the formal-first-integral recursion.

Starting from the canonical normal form (udot = -v + P, vdot = u + Q,
wdot = lam w + R), the complex variables x = u + iv, y = u - iv, z = w turn
the system into

    xdot = ix + sum a_jkl x^j y^k z^l,
    ydot = -iy + sum b_jkl x^j y^k z^l,
    zdot = lam z + sum c_jkl x^j y^k z^l,

with b_jkl = conj(a_kjl) and c_jkl = conj(c_kjl).  A formal series
Psi = xy + sum d_K x^K is built degree by degree: writing the derivative of
Psi along the field as a sum of monomial coefficients L_K, every coefficient
with K != (k,k,0) is killed by choosing d_K = -S_K / (i(k1-k2) + lam k3),
whose divisor never vanishes for lam != 0.  The obstructions at (k,k,0),
with the normalization d_kk0 = 0, are the focus quantities L_{k-1}; the
origin is a center on the center manifold exactly when they all vanish.

The recursion is generic over the coefficient scalar: exact rational
functions, rationals, truncated jets (for expansions around a center point),
or machine complex numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import DegenerateLambda, NotAFirstIntegralCandidate, NotRealSystem
from .normalform import NormalForm3, to_normal_form
from .paramfield import (
    GaussExpr,
    Jet,
    conjugate_scalar,
    is_zero_scalar,
    one_like,
    zero_like,
)
from .polysys import StatePoly, VectorField3


@dataclass
class ComplexSystem:
    """Complexified quadratic+ coefficients and the transverse eigenvalue.

    ``sigma`` is an optional trace term on the rotation block (xdot =
    (sigma + i) x + ...); it must be an infinitesimal (zero-constant jet),
    so the monomials (k, k, 0) stay obstructions.
    """

    a: dict
    b: dict
    c: dict
    lam: object
    backend: str
    sigma: object = None

    def degree(self):
        return max(
            (sum(e) for d in (self.a, self.b, self.c) for e in d), default=1
        )


@dataclass
class FocusReport:
    """Ordered focus quantities with normalization metadata.

    The quantities are reported in the convention where the derivative of
    Psi along the field is sum_j L_{j-1} (x y)^j with x y = u^2 + v^2, and
    the series normalization d_kk0 = 0.  ``scales`` records any externally
    determined positive per-quantity factors used for comparisons against
    published closed forms.
    """

    quantities: list
    backend: str
    normalization: str = "psi-coefficients d_kk0 = 0; quantities real"
    scales: dict = dc_field(default_factory=dict)

    def first_nonzero(self):
        for i, q in enumerate(self.quantities):
            if not is_zero_scalar(q):
                return i + 1, q
        return None, None


def complexify(nf: NormalForm3) -> ComplexSystem:
    """Complex coefficient extraction; requires canonical orientation."""
    if nf.orientation != 1:
        raise ValueError("complexify needs the canonical (+1) orientation frame")
    if nf.field.backend == "float":
        return _complexify_generic(
            nf, half=0.5 + 0j, mhalf_i=-0.5j, one=1.0 + 0j, lam=complex(nf.lam)
        )
    sample = nf.lam
    zero = zero_like(sample)
    one = one_like(sample)
    half_r = one * Fraction(1, 2)
    half = GaussExpr(half_r, zero)
    mhalf_i = GaussExpr(zero, -half_r)
    gone = GaussExpr(one, zero)
    return _complexify_generic(nf, half=half, mhalf_i=mhalf_i, one=gone, lam=nf.lam)


def _complexify_generic(nf, half, mhalf_i, one, lam):
    is_float = nf.field.backend == "float"

    def lift(t):
        if is_float:
            return complex(t)
        return GaussExpr(t, zero_like(t))

    def times_i(g):
        if is_float:
            return g * 1j
        return GaussExpr(-g.im, g.re)

    # u = (x + y)/2, v = -i/2 (x - y), w = z
    u_sub = StatePoly({(1, 0, 0): half, (0, 1, 0): half})
    v_sub = StatePoly({(1, 0, 0): mhalf_i, (0, 1, 0): -mhalf_i})
    w_sub = StatePoly({(0, 0, 1): one})
    subs = [u_sub, v_sub, w_sub]

    P = nf.P.map_coeffs(lift)
    Q = nf.Q.map_coeffs(lift)
    R = nf.R.map_coeffs(lift)
    iQ = Q.map_coeffs(times_i)
    X1 = (P + iQ).compose(subs)
    X2 = (P - iQ).compose(subs)
    X3 = R.compose(subs)
    cs = ComplexSystem(
        dict(X1.terms), dict(X2.terms), dict(X3.terms), lam, nf.field.backend
    )
    _check_reality(cs)
    return cs


def _check_reality(cs: ComplexSystem, tol: float = 1e-9):
    def close(p, q):
        diff = p - q
        if cs.backend == "float":
            return abs(diff) <= tol * max(1.0, abs(p), abs(q))
        return is_zero_scalar(diff)

    zero = 0j if cs.backend == "float" else None
    for (j, k, l), coeff in cs.a.items():
        other = cs.b.get((k, j, l))
        if other is None:
            other = zero if zero is not None else zero_like(coeff)
        if not close(other, conjugate_scalar(coeff)):
            raise NotRealSystem(f"b[{k},{j},{l}] != conj(a[{j},{k},{l}])")
    for (j, k, l), coeff in cs.b.items():
        other = cs.a.get((k, j, l))
        if other is None:
            other = zero if zero is not None else zero_like(coeff)
        if not close(coeff, conjugate_scalar(other)):
            raise NotRealSystem(f"b[{j},{k},{l}] != conj(a[{k},{j},{l}])")
    for (j, k, l), coeff in cs.c.items():
        other = cs.c.get((k, j, l))
        if other is None:
            other = zero if zero is not None else zero_like(coeff)
        if not close(other, conjugate_scalar(coeff)):
            raise NotRealSystem(f"c[{k},{j},{l}] != conj(c[{j},{k},{l}])")


@dataclass
class PsiSeries:
    """Coefficients d_K of the formal series Psi = xy + sum d_K x^K.

    The normalization zeroes every diagonal coefficient d_kk0, which makes the
    obstruction values unique.
    """

    coefficients: dict
    truncation_degree: int
    normalization: str = "d_kk0 = 0"


def focus_quantities(cs: ComplexSystem, n: int) -> FocusReport:
    """First n focus quantities through monomial degree 2n + 2."""
    quantities, _ = _psi_recursion(cs, n)
    return FocusReport(quantities, cs.backend)


def psi_series(cs: ComplexSystem, n: int) -> PsiSeries:
    """The formal series built alongside the first n focus quantities."""
    _, d = _psi_recursion(cs, n)
    return PsiSeries(d, 2 * n + 2)


def _psi_recursion(cs: ComplexSystem, n: int):
    if n < 1:
        raise ValueError("n must be at least 1")
    if is_zero_scalar(cs.lam):
        raise DegenerateLambda("transverse eigenvalue is zero")
    is_float = cs.backend == "float"
    lam = cs.lam
    sigma = cs.sigma
    if sigma is not None:
        if not isinstance(sigma, Jet) or sigma.constant_part() != 0:
            raise ValueError("sigma must be a zero-constant jet")
    if is_float:
        one_c = 1.0 + 0j
    else:
        base_one = one_like(lam)
        one_c = GaussExpr(base_one, zero_like(lam))

    def divisor(k1, k2, k3):
        if is_float:
            return complex(lam * k3, k1 - k2)
        re = lam * k3 if k3 else zero_like(lam)
        if sigma is not None and k1 + k2:
            re = re + sigma * (k1 + k2)
        im = one_like(lam) * (k1 - k2)
        return GaussExpr(re, im)

    # contributions of each component: (coeff dict, exponent offset axis)
    comps = ((cs.a, 0), (cs.b, 1), (cs.c, 2))
    d = {(1, 1, 0): one_c}
    quantities = []
    for m in range(3, 2 * n + 3):
        layer = {}
        for k1 in range(m, -1, -1):
            for k2 in range(m - k1, -1, -1):
                k3 = m - k1 - k2
                target = (k1, k2, k3)
                S = None
                for coeffs, axis in comps:
                    for (j, k, l), coeff in coeffs.items():
                        kap = [k1 - j, k2 - k, k3 - l]
                        kap[axis] += 1
                        factor = kap[axis]
                        if factor <= 0 or kap[0] < 0 or kap[1] < 0 or kap[2] < 0:
                            continue
                        dk = d.get((kap[0], kap[1], kap[2]))
                        if dk is None:
                            continue
                        term = coeff * dk
                        if factor != 1:
                            term = term * factor
                        S = term if S is None else S + term
                if S is None:
                    continue
                if k1 == k2 and k3 == 0:
                    layer[target] = S  # obstruction; d stays zero
                elif not _gauss_is_zero(S, is_float):
                    d[target] = -S / divisor(k1, k2, k3)
        if m % 2 == 0 and m >= 4:
            k = m // 2
            S = layer.get((k, k, 0))
            quantities.append(_realize(S, is_float, lam))
    return quantities, d


def _gauss_is_zero(x, is_float):
    if is_float:
        return x == 0
    return x.is_zero()


def identity_defect(cs: ComplexSystem, n: int):
    """Residual of the defining identity through degree 2n + 2.

    Recomputes the derivative of the built Psi along the field and subtracts
    sum_j L_{j-1} (xy)^j; every coefficient of total degree <= 2n+2 must
    cancel.  Returns the worst surviving magnitude (floats) or raises
    AssertionError on a symbolic survivor.
    """
    quantities, d = _psi_recursion(cs, n)
    is_float = cs.backend == "float"
    lam = cs.lam
    comps = ((cs.a, 0), (cs.b, 1), (cs.c, 2))
    worst = 0.0
    for m in range(3, 2 * n + 3):
        for k1 in range(m, -1, -1):
            for k2 in range(m - k1, -1, -1):
                k3 = m - k1 - k2
                S = None
                for coeffs, axis in comps:
                    for (j, k, l), coeff in coeffs.items():
                        kap = [k1 - j, k2 - k, k3 - l]
                        kap[axis] += 1
                        factor = kap[axis]
                        if factor <= 0 or min(kap) < 0:
                            continue
                        dk = d.get((kap[0], kap[1], kap[2]))
                        if dk is None:
                            continue
                        term = coeff * dk
                        if factor != 1:
                            term = term * factor
                        S = term if S is None else S + term
                dm = d.get((k1, k2, k3))
                if dm is not None:
                    if is_float:
                        lin = complex(lam * k3, k1 - k2) * dm
                    else:
                        re = lam * k3 if k3 else zero_like(lam)
                        im = one_like(lam) * (k1 - k2)
                        lin = GaussExpr(re, im) * dm
                    S = lin if S is None else S + lin
                if k1 == k2 and k3 == 0 and k1 >= 2:
                    L = quantities[k1 - 2]
                    if is_float:
                        S = (S if S is not None else 0j) - L
                    else:
                        S = (S if S is not None else GaussExpr(zero_like(lam), zero_like(lam))) - GaussExpr(L, zero_like(L))
                if S is None:
                    continue
                if is_float:
                    worst = max(worst, abs(S))
                elif not S.is_zero():
                    raise AssertionError(
                        f"identity defect at monomial {(k1, k2, k3)}: {S}"
                    )
    return worst


def _realize(S, is_float, lam):
    """Extract the real value of an obstruction, enforcing Im = 0."""
    if S is None:
        return 0.0 if is_float else zero_like(lam)
    if is_float:
        if abs(S.imag) > 1e-9 * max(1.0, abs(S)):
            raise NotRealSystem(f"focus quantity has imaginary part {S.imag}")
        return S.real
    if not is_zero_scalar(S.im):
        raise NotRealSystem(f"focus quantity has imaginary part {S.im}")
    return S.re


def linear_and_quadratic_parts(cs: ComplexSystem, n: int) -> FocusReport:
    """Focus quantities of a jet-coefficient system; same recursion, jets out."""
    report = focus_quantities(cs, n)
    for q in report.quantities:
        if not isinstance(q, Jet):
            raise ValueError("system coefficients are not jet-valued")
    return report


def verify_first_integral(fld: VectorField3, H: StatePoly, tol: float = 1e-9) -> bool:
    """True iff the derivative of H along the field is the zero polynomial."""
    if H.total_degree() <= 0:
        raise NotAFirstIntegralCandidate("candidate is constant")
    acc = None
    for axis in range(3):
        part = fld.components[axis] * H.diff(axis)
        acc = part if acc is None else acc + part
    if acc is None or acc.is_zero():
        return True
    if fld.backend == "float":
        return all(abs(c) <= tol for c in acc.terms.values())
    return False


def report_for_field(
    fld: VectorField3,
    n: int,
    equilibrium=None,
    matrix=None,
    time_scale=None,
) -> FocusReport:
    """Normal form -> canonical frame -> complexify -> focus quantities."""
    if equilibrium is None:
        zero = fld._zero()
        equilibrium = (zero, zero, zero)
    nf = to_normal_form(fld, equilibrium, matrix=matrix, time_scale=time_scale)
    cs = complexify(nf.canonical())
    return focus_quantities(cs, n)


def verify_center_conditions(fld: VectorField3, condition: dict, n: int) -> bool:
    """True iff L_1..L_n vanish identically under the parameter substitution."""
    mapping = {k: Fraction(v) for k, v in condition.items()}
    remaining = tuple(p for p in fld.params if p not in mapping)
    bound = fld.substitute_params(mapping, remaining)  # raises PoleAtPoint
    if all(
        comp.homogeneous_component(deg).is_zero()
        for comp in bound.components
        for deg in range(2, comp.total_degree() + 1)
    ):
        return True  # linear system: every obstruction vanishes
    report = report_for_field(bound, n)
    return all(is_zero_scalar(q) for q in report.quantities)
