"""Reduction of a Hopf equilibrium to rotation-plus-axis normal form.

The target shape has linear part ((0, -o, 0), (o, 0, 0), (0, 0, lambda)) with
o = +/-1 after time rescaling; ``orientation`` records o.  The canonical
orientation for the complexification step is +1 (udot = -v + ...); a field
arriving with orientation -1 is canonicalized by the swap (u, v) -> (v, u),
and the swap is recorded so reported quantities stay attached to the
system's own frame.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import BadTransform, NotHopf
from .paramfield import Jet, ParamExpr, is_zero_scalar, one_like, zero_like
from .polysys import StatePoly, VectorField3, char_cubic, hopf_test, transform


@dataclass
class NormalForm3:
    """A field whose linear part is the rotation-plus-hyperbolic block."""

    field: VectorField3
    lam: object
    orientation: int
    shift: tuple = None
    matrix: list = None
    time_scale: object = None
    swapped: bool = False

    @property
    def P(self):
        return _nonlinear_part(self.field.components[0])

    @property
    def Q(self):
        return _nonlinear_part(self.field.components[1])

    @property
    def R(self):
        return _nonlinear_part(self.field.components[2])

    def canonical(self):
        """Orientation +1 frame (udot = -v + ...), swapping u and v if needed."""
        if self.orientation == 1:
            return self
        comps = self.field.components
        swapped = (
            _swap_uv(comps[1]),
            _swap_uv(comps[0]),
            _swap_uv(comps[2]),
        )
        fld = VectorField3(swapped, self.field.backend, self.field.params, self.field.name)
        return replace(self, field=fld, orientation=1, swapped=not self.swapped)


def _swap_uv(poly: StatePoly) -> StatePoly:
    return StatePoly({(e[1], e[0], e[2]): c for e, c in poly.terms.items()})


def _nonlinear_part(poly: StatePoly) -> StatePoly:
    return StatePoly({e: c for e, c in poly.terms.items() if sum(e) >= 2})


def _is_const(x, value, tol):
    if isinstance(x, (ParamExpr, Jet)):
        return (x - Fraction(value)).is_zero()
    if isinstance(x, (int, Fraction)):
        return x == value
    if hasattr(x, "is_zero"):
        # any exact scalar exposing an is_zero predicate
        return (x - Fraction(value)).is_zero()
    return abs(x - value) <= tol


def _classify_linear(mat, tol):
    """Check rotation + axis block shape; return (s, orientation, lam) where
    the (u, v) block is ((0, -o*s), (o*s, 0)) and lam is the axis entry."""
    for (i, j) in ((0, 2), (1, 2), (2, 0), (2, 1), (0, 0), (1, 1)):
        if not _is_const(mat[i][j], 0, tol):
            raise BadTransform(f"linear part entry {(i, j)} does not vanish")
    a01, a10, lam = mat[0][1], mat[1][0], mat[2][2]
    if not _is_const(a01 + a10, 0, tol):
        raise BadTransform("rotation block is not antisymmetric")
    if is_zero_scalar(a01):
        raise BadTransform("rotation block vanishes")
    return a01, lam


def to_normal_form(
    fld: VectorField3,
    equilibrium,
    matrix=None,
    time_scale=None,
    tol: float = 1e-9,
) -> NormalForm3:
    """Translate the equilibrium to the origin, apply the linear change of
    coordinates and a time rescaling, and validate the resulting shape.

    Exact backend: ``matrix`` entries must lie in the parameter field, and
    the rescaled rotation entries must be exactly +/-1.  When ``time_scale``
    is omitted it is inferred from the rotation entry, which must then be a
    positive constant (or numerically positive under the float backend);
    time is never reversed.  Float backend with no matrix: an eigenbasis is
    computed numerically.
    """
    is_float = fld.backend == "float"
    res = fld.evaluate(equilibrium)
    for v in res:
        if not _is_const(v, 0, tol if is_float else 0):
            raise NotHopf(f"point {equilibrium!r} is not an equilibrium: {res!r}")
    jac = fld.jacobian_at(equilibrium)
    report = hopf_test(char_cubic(jac))
    if report.is_hopf is False:
        raise NotHopf(f"eigenvalue conditions fail: {report.conditions!r}")

    if matrix is None:
        if not is_float:
            one = one_like(fld.components[0].evaluate_or(equilibrium, Fraction(0)))
            zero = zero_like(one)
            matrix = [[one, zero, zero], [zero, one, zero], [zero, zero, one]]
        else:
            matrix = _float_eigenbasis(jac)

    sample = matrix[0][0]
    one = one_like(sample)
    zero = zero_like(one)
    shift = tuple(equilibrium)
    moved = transform(fld, shift, matrix, one)
    lin = moved.jacobian_at((zero, zero, zero))
    s, lam_raw = _classify_linear(lin, tol * 10)

    if time_scale is None:
        # infer |s| as the rescale; it must be a known-positive constant
        if _is_const(s, 1, tol) or _is_const(s, -1, tol):
            time_scale = one_like(s)
        elif isinstance(s, ParamExpr):
            if not s.is_constant():
                raise BadTransform(
                    "rotation entry is not constant; pass time_scale explicitly"
                )
            sval = s.constant_value()
            time_scale = ParamExpr.const(s.params, abs(sval))
        elif isinstance(s, (int, Fraction)):
            time_scale = abs(Fraction(s))
        elif isinstance(s, float):
            time_scale = abs(s)
        else:
            raise BadTransform(
                "cannot infer a positive time scale; pass time_scale explicitly"
            )

    final = transform(fld, shift, matrix, time_scale)
    if is_float:
        final = VectorField3(
            tuple(c.chop(tol * 1e-3) for c in final.components),
            "float",
            final.params,
            fld.name,
        )
    lin = final.jacobian_at((zero, zero, zero))
    s, lam = _classify_linear(lin, tol)
    if _is_const(s, 1, tol):
        orientation = -1  # udot = +v: clockwise frame
    elif _is_const(s, -1, tol):
        orientation = 1
    else:
        raise BadTransform(f"rotation entry {s!r} did not rescale to +/-1")
    if is_zero_scalar(lam):
        raise NotHopf("transverse eigenvalue is zero")

    nf_field = VectorField3(final.components, final.backend, final.params, fld.name)
    nf = NormalForm3(
        field=nf_field,
        lam=lam,
        orientation=orientation,
        shift=shift,
        matrix=matrix,
        time_scale=time_scale,
    )
    _validate_nonlinear(nf)
    return nf


def _validate_nonlinear(nf: NormalForm3):
    for comp in nf.field.components:
        const = comp.constant_term()
        if const is not None and not is_zero_scalar(const):
            raise BadTransform("constant term survived the translation")


def _float_eigenbasis(jac):
    """Real basis (Im v, Re v, v3) from the complex eigenpair."""
    import numpy as np

    m = np.array(jac, dtype=float)
    vals, vecs = np.linalg.eig(m)
    complex_idx = [i for i in range(3) if abs(vals[i].imag) > 1e-12]
    real_idx = [i for i in range(3) if abs(vals[i].imag) <= 1e-12]
    if len(complex_idx) != 2 or len(real_idx) != 1:
        raise NotHopf(f"eigenvalues {vals} lack a complex pair plus real axis")
    i = complex_idx[0] if vals[complex_idx[0]].imag > 0 else complex_idx[1]
    v = vecs[:, i]
    # fix the phase so the basis is deterministic
    pivot = max(range(3), key=lambda r: abs(v[r]))
    v = v / v[pivot]
    vr, vi = v.real, v.imag
    v3 = vecs[:, real_idx[0]].real
    basis = np.column_stack([vi, vr, v3])
    return [[float(basis[r][c]) for c in range(3)] for r in range(3)]


def roundtrip_defect(nf: NormalForm3, original: VectorField3):
    """Transform the original field with the stored data and subtract the
    normal form; returns the max absolute coefficient of the difference
    (0 when exact, None when a symbolic coefficient fails to cancel).
    """
    redone = transform(original, nf.shift, nf.matrix, nf.time_scale)
    reference = nf.field.components
    if nf.swapped:
        reference = tuple(
            _swap_uv(c) for c in (reference[1], reference[0], reference[2])
        )
    worst = 0
    for got, want in zip(redone.components, reference):
        diff = got - want
        for coeff in diff.terms.values():
            if isinstance(coeff, (int, float, Fraction)):
                worst = max(worst, abs(coeff))
            elif not coeff.is_zero():
                return None
    return worst
