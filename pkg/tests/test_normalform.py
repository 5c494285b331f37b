"""Normal-form reduction: validation, orientation, round trips."""

from fractions import Fraction

import pytest

from hopfcm.catalog import e1_normal, e1_shifted, e4m, e4_normal, khaled_original
from hopfcm.errors import BadTransform, NotHopf
from hopfcm.normalform import roundtrip_defect, to_normal_form
from hopfcm.paramfield import ParamExpr
from hopfcm.polysys import StatePoly, VectorField3

F = Fraction
P = ("c", "d", "k")


def _zero3(params=P):
    z = ParamExpr.zero(params)
    return (z, z, z)


def _eigen_matrix():
    c, d, k = (ParamExpr.var(P, n) for n in P)
    zero, one = ParamExpr.zero(P), ParamExpr.one(P)
    den = c**2 * d**2 + k**2
    return [
        [k * (c * d + 1) / den, c * d * (c * d + 1) / den, zero],
        [zero, one, zero],
        [zero, zero, one],
    ]


def test_already_normal_system_validates_with_identity():
    nf = to_normal_form(e1_normal(), _zero3())
    d, k = ParamExpr.var(P, "d"), ParamExpr.var(P, "k")
    assert nf.lam == -(d**2) / k
    assert nf.orientation == -1
    for part in (nf.P, nf.Q, nf.R):
        assert part.min_degree() >= 2


def test_shifted_system_reduces_to_printed_normal_form():
    d, k = ParamExpr.var(P, "d"), ParamExpr.var(P, "k")
    nf = to_normal_form(
        e1_shifted(), _zero3(), matrix=_eigen_matrix(), time_scale=k / d
    )
    ref = e1_normal()
    for got, want in zip(nf.field.components, ref.components):
        assert (got - want).is_zero()
    assert roundtrip_defect(nf, e1_shifted()) == 0


def test_canonical_swap_records_orientation():
    nf = to_normal_form(e1_normal(), _zero3())
    canon = nf.canonical()
    assert canon.orientation == 1
    assert canon.swapped is True
    assert canon.canonical() is canon
    # canonical frame: udot = -v + nonlinear
    lin = canon.field.linear_matrix()
    assert lin[0][1] == -1 and lin[1][0] == 1


def test_nonconstant_rotation_requires_explicit_time_scale():
    with pytest.raises(BadTransform):
        to_normal_form(e1_shifted(), _zero3(), matrix=_eigen_matrix())


def test_float_eigenbasis_path():
    nf = to_normal_form(e4m({"c": 0.25, "h": 2.0}), (0.0, 0.0, 0.0))
    assert nf.orientation == 1
    assert nf.lam == pytest.approx(0.1781741612749496, rel=1e-10)
    assert roundtrip_defect(nf, e4m({"c": 0.25, "h": 2.0})) < 1e-9


def test_float_prebuilt_normal_form_orientation():
    fld = e4_normal({"c": 0.25, "h": 2.0})
    identity = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    nf = to_normal_form(fld, (0.0, 0.0, 0.0), matrix=identity)
    assert nf.orientation == -1  # clockwise frame as built
    assert nf.canonical().orientation == 1
    # the automatic eigenbasis lands directly in the canonical frame
    auto = to_normal_form(fld, (0.0, 0.0, 0.0))
    assert auto.orientation == 1


def test_not_an_equilibrium_rejected():
    fld = khaled_original({"a": 1, "b": 0, "c": 1, "d": 1})
    with pytest.raises(NotHopf):
        to_normal_form(fld, (F(1), F(1), F(1)))


def test_non_hopf_equilibrium_rejected():
    fld = khaled_original({"a": 2, "b": 0, "c": 1, "d": 1})
    with pytest.raises(NotHopf):
        to_normal_form(fld, (F(0), F(0), F(1)))


def test_bad_matrix_rejected():
    fld = e1_normal({"c": 0, "d": 1, "k": 1})
    bad = [
        [F(1), F(1), F(0)],
        [F(0), F(1), F(0)],
        [F(0), F(0), F(1)],
    ]
    with pytest.raises(BadTransform):
        to_normal_form(fld, (F(0), F(0), F(0)), matrix=bad, time_scale=F(1))


def test_degenerate_transverse_eigenvalue_rejected():
    comps = (
        StatePoly({(0, 1, 0): F(-1), (2, 0, 0): F(1)}),
        StatePoly({(1, 0, 0): F(1)}),
        StatePoly({(1, 1, 0): F(1)}),  # lam = 0
    )
    with pytest.raises(NotHopf):
        to_normal_form(VectorField3(comps, "exact", ()), (F(0),) * 3)
