import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hahnchain.chain import (ChainSpec, Family, JacobiOperator, build, dumps, from_dict, is_mirror_symmetric,
                             load_chain, loads, perturb_coupling, save_chain, to_dict,
                             u_product_identity_residual)
from hahnchain.errors import InvalidSpec, ParseError
from hahnchain.hahn_m1 import DualM1HahnParams, ordered_spectrum, recurrence_coeffs

from conftest import ETA_GRID, N_GRID


def test_build_asymmetric_example():
    op = build(ChainSpec.asymmetric(3, 0))
    np.testing.assert_allclose(op.J, [6, 4, 2 * math.sqrt(5)], rtol=1e-15)
    np.testing.assert_array_equal(op.B, [-2, 2, -2, 2])
    assert op.n_sites == 4 and op.N == 3
    assert op.family is Family.ASYMMETRIC


def test_build_symmetric_example():
    op = build(ChainSpec.symmetric(3, 1))
    np.testing.assert_allclose(op.J, [2 * math.sqrt(15), 4, 2 * math.sqrt(15)], rtol=1e-15)
    np.testing.assert_array_equal(op.B, 0.0)


@pytest.mark.parametrize("factory", [ChainSpec.asymmetric, ChainSpec.symmetric])
def test_even_N_rejected(factory):
    with pytest.raises(InvalidSpec):
        factory(4, 0)


@pytest.mark.parametrize("kwargs", [
    dict(family=Family.ASYMMETRIC, N=3),
    dict(family=Family.ASYMMETRIC, N=3, eta=-0.6),
    dict(family=Family.CUSTOM, N=2, custom_J=(1.0, 1.0)),
    dict(family=Family.CUSTOM, N=2, custom_J=(1.0, 0.0), custom_B=(0.0, 0.0, 0.0)),
    dict(family=Family.CUSTOM, N=2, custom_J=(1.0,), custom_B=(0.0, 0.0, 0.0)),
    dict(family=Family.SYMMETRIC, N=3, eta=1.0, custom_J=(1.0, 1.0, 1.0)),
])
def test_invalid_specs(kwargs):
    with pytest.raises(InvalidSpec):
        ChainSpec(**kwargs)


def test_operator_rejects_bad_arrays():
    with pytest.raises(InvalidSpec):
        JacobiOperator([0.0, 0.0], [-1.0])
    with pytest.raises(InvalidSpec):
        JacobiOperator([0.0, 0.0, 0.0], [1.0])
    with pytest.raises(InvalidSpec):
        JacobiOperator([0.0, np.inf], [1.0])


def test_operator_is_immutable():
    op = build(ChainSpec.asymmetric(3, 0))
    with pytest.raises(ValueError):
        op.J[0] = 1.0


def test_mirror_symmetry_examples():
    assert is_mirror_symmetric(build(ChainSpec.symmetric(3, 1)))
    assert not is_mirror_symmetric(build(ChainSpec.asymmetric(3, 0)))
    assert is_mirror_symmetric(build(ChainSpec.custom([1, 1], [5, 0, 5])), tol=1e-12)


@pytest.mark.parametrize("N", N_GRID)
@pytest.mark.parametrize("eta", ETA_GRID)
def test_symmetric_family_is_mirror_symmetric_exactly(N, eta):
    op = build(ChainSpec.symmetric(N, eta))
    np.testing.assert_array_equal(op.J, op.J[::-1])
    np.testing.assert_array_equal(op.B, 0.0)
    assert not is_mirror_symmetric(build(ChainSpec.asymmetric(N, eta)))


def test_u_product_residual_examples():
    assert u_product_identity_residual(build(ChainSpec.asymmetric(5, 1))) <= 1e-12
    assert u_product_identity_residual(build(ChainSpec.asymmetric(3, 0))) == 0.0
    # 1*4 against 16*9
    assert u_product_identity_residual(build(ChainSpec.custom([1, 2, 3, 4, 5], [0] * 6))) == 35.0
    with pytest.raises(InvalidSpec):
        u_product_identity_residual(build(ChainSpec.custom([1, 2], [0] * 3)))


@pytest.mark.parametrize("N", N_GRID)
@pytest.mark.parametrize("eta", ETA_GRID)
def test_family_matches_recurrence_coeffs(N, eta):
    for spec in (ChainSpec.asymmetric(N, eta), ChainSpec.symmetric(N, eta)):
        op = build(spec)
        rec = recurrence_coeffs(spec.params)
        np.testing.assert_allclose(op.B, rec.b, rtol=1e-12, atol=0)
        np.testing.assert_allclose(op.J, np.sqrt(rec.u), rtol=1e-12, atol=0)


@pytest.mark.parametrize("N", N_GRID)
@pytest.mark.parametrize("eta", ETA_GRID)
def test_trace_and_frobenius_identities(N, eta):
    op = build(ChainSpec.asymmetric(N, eta))
    x = ordered_spectrum(op.params)
    assert np.sum(op.B) == 0.0
    assert np.sum(x) == 0.0
    lhs = np.sum(x ** 2)
    rhs = np.sum(op.B ** 2) + 2 * np.sum(op.J ** 2)
    assert abs(lhs - rhs) <= 1e-9 * lhs


def test_frobenius_hand_value():
    op = build(ChainSpec.asymmetric(3, 0))
    assert np.sum(op.B ** 2) + 2 * np.sum(op.J ** 2) == pytest.approx(160.0, rel=1e-15)
    assert np.sum(ordered_spectrum(op.params) ** 2) == 160.0


def test_perturb_coupling():
    op = build(ChainSpec.asymmetric(5, 0))
    pert = perturb_coupling(op, 2, 1.05)
    assert pert.family is Family.CUSTOM
    assert pert.J[1] == op.J[1] * 1.05
    np.testing.assert_array_equal(np.delete(pert.J, 1), np.delete(op.J, 1))
    np.testing.assert_array_equal(pert.B, op.B)
    for n in (0, 6):
        with pytest.raises(InvalidSpec):
            perturb_coupling(op, n, 1.05)


def test_inf_norm():
    op = build(ChainSpec.asymmetric(3, 0))
    assert op.inf_norm() == pytest.approx(np.max(np.sum(np.abs(op.matrix()), axis=1)), rel=1e-15)


@pytest.mark.parametrize("spec", [ChainSpec.asymmetric(3, 0), ChainSpec.asymmetric(31, 3),
                                  ChainSpec.symmetric(7, 2), ChainSpec.asymmetric(5, 0.5),
                                  ChainSpec.custom([0.1, 1 / 3, 7.0], [1e-300, -2.5, 0.0, math.pi])])
def test_round_trip_is_bit_exact(spec, tmp_path):
    op = build(spec)
    back = loads(dumps(op))
    assert back == op
    assert back.J.tobytes() == op.J.tobytes() and back.B.tobytes() == op.B.tobytes()
    path = tmp_path / "chain.json"
    save_chain(op, path)
    assert load_chain(path) == op
    assert dumps(load_chain(path)) == dumps(op)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(min_value=1e-6, max_value=1e6), min_size=1, max_size=12), st.data())
def test_round_trip_random_custom_chains(J, data):
    B = data.draw(st.lists(st.floats(-1e6, 1e6), min_size=len(J) + 1, max_size=len(J) + 1))
    op = build(ChainSpec.custom(J, B))
    assert loads(dumps(op)) == op


def test_edited_family_file_is_demoted_to_custom():
    d = to_dict(build(ChainSpec.asymmetric(3, 0)))
    d["J"][1] = 4.2
    op = from_dict(d)
    assert op.family is Family.CUSTOM
    assert op.J[1] == 4.2


def test_zero_coupling_in_file():
    d = to_dict(build(ChainSpec.asymmetric(3, 0)))
    d["J"][0] = 0
    with pytest.raises(InvalidSpec):
        loads(json.dumps(d))


@pytest.mark.parametrize("mutate", [
    lambda d: d["B"].pop(),
    lambda d: d.update(J="abc"),
    lambda d: d["J"].__setitem__(0, "1.0"),
    lambda d: d["J"].__setitem__(0, True),
    lambda d: d.update(family="ring"),
    lambda d: d.update(n_sites=7),
    lambda d: d.update(xi=5.0),
    lambda d: d.pop("eta"),
])
def test_malformed_files(mutate):
    d = to_dict(build(ChainSpec.asymmetric(3, 0)))
    mutate(d)
    with pytest.raises(ParseError):
        loads(json.dumps(d))


def test_invalid_json_reports_position():
    with pytest.raises(ParseError, match="line 2"):
        loads('{"J": [1],\n "B": [0, 0,]}')
    with pytest.raises(ParseError):
        loads("[1, 2]")


def test_family_metadata_in_file():
    d = json.loads(dumps(build(ChainSpec.asymmetric(5, 1))))
    assert d["family"] == "asym-dualm1hahn"
    assert d["eta"] == 1.0 and d["xi"] == 2.0
    assert d["n_sites"] == 6
    assert "eta" not in to_dict(build(ChainSpec.custom([1.0], [0.0, 0.0])))


def test_params_of_specs():
    assert ChainSpec.asymmetric(5, 1).params == DualM1HahnParams(2, 1, 5)
    assert ChainSpec.symmetric(5, 1).xi == 1.0
    assert ChainSpec.custom([1.0], [0.0, 0.0]).params is None
