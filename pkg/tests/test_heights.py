import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadrec.errors import UsageError
from quadrec.heights import (
    abc_quality,
    archimedean_height_sum,
    element_height,
    lambda_v,
    local_values,
    log_norm,
    phi_norm_ratio,
    radical,
    totient_density,
    triple_height,
)
from quadrec.ring import as_element, prime_ideals_above, qelem, quadratic_field
from oracles import phi_brute

K5 = quadratic_field(5)
K2 = quadratic_field(2)
KM1 = quadratic_field(-1)
KM3 = quadratic_field(-3)
PHI = qelem(K5, 0, 1)
TOL = 1e-12

elements = st.builds(
    qelem,
    st.sampled_from([K5, K2, KM1, KM3]),
    st.integers(-30, 30), st.integers(-30, 30), st.integers(1, 30),
).filter(lambda x: not x.is_zero())


def test_height_spot_values():
    assert element_height(1) == 0.0
    assert abs(element_height(2) - math.log(2)) < TOL
    assert abs(element_height(Fraction(1, 2)) - math.log(2)) < TOL
    assert abs(element_height(Fraction(2, 3)) - math.log(3)) < TOL
    golden = math.log((1 + math.sqrt(5)) / 2) / 2
    assert abs(element_height(PHI) - golden) < 1e-9
    assert abs(element_height(PHI.conjugate()) - golden) < 1e-9
    root5 = qelem(K5, -1, 2)  # 2*omega - 1
    assert abs(element_height(root5) - math.log(5) / 2) < TOL
    one_plus_i = qelem(KM1, 1, 1)
    assert abs(element_height(one_plus_i) - math.log(2) / 2) < TOL


def test_local_values_examples():
    vals = local_values(as_element(2, K5))
    finite = [pv for pv in vals if pv.kind == "finite"]
    inf = [pv for pv in vals if pv.kind == "infinite"]
    assert [(pv.ideal.label(), pv.value) for pv in finite] == [("2i", Fraction(1, 4))]
    assert sorted(float(pv.value) for pv in inf) == [2.0, 2.0]
    assert all(pv.weight == 1 for pv in inf)

    vals = local_values(PHI)
    assert all(pv.kind == "infinite" for pv in vals)
    got = sorted(float(pv.value) for pv in vals)
    assert abs(got[0] - 0.6180339887498949) < 1e-12
    assert abs(got[1] - 1.618033988749895) < 1e-12


def test_complex_place_is_exact():
    vals = local_values(qelem(KM1, 1, 1))
    inf = [pv for pv in vals if pv.kind == "infinite"]
    assert len(inf) == 1 and inf[0].weight == 2
    assert inf[0].value == Fraction(2)  # |1+i|^2, exact


@given(elements)
@settings(max_examples=150)
def test_product_formula(x):
    total = sum(pv.log_value() for pv in local_values(x))
    assert abs(total) < TOL


@given(st.integers(-40, 40).filter(lambda a: a != 0), st.integers(1, 40))
def test_product_formula_rational(a, den):
    x = as_element(Fraction(a, den))
    total = sum(pv.log_value() for pv in local_values(x))
    assert abs(total) < TOL


@given(elements)
@settings(max_examples=60)
def test_height_inversion_and_lambda_sum(x):
    h = element_height(x)
    assert abs(h - element_height(x.inverse())) < TOL
    lam = sum(lambda_v(x, pv) for pv in local_values(x))
    assert abs(lam - h) < TOL


def test_height_power_scaling():
    for g in [as_element(2), as_element(Fraction(3, 2)), PHI * PHI,
              qelem(K2, 1, 1)]:
        h1 = element_height(g)
        for n in range(1, 21):
            assert abs(element_height(g ** n) - n * h1) < TOL * n


def test_triple_height_examples():
    assert abs(triple_height(32, 1, 31) - 5 * math.log(2)) < TOL
    assert abs(triple_height(1, 2, 3) - math.log(3)) < TOL
    assert abs(triple_height(1, 1, 1)) < TOL


def test_triple_height_projective_invariance():
    base = triple_height(3, 5, 7)
    assert abs(triple_height(6, 10, 14) - base) < TOL
    assert abs(triple_height(Fraction(3, 11), Fraction(5, 11), Fraction(7, 11))
               - base) < TOL
    a, b, c = as_element(3, K5), as_element(5, K5), as_element(7, K5)
    scaled = triple_height(a * PHI, b * PHI, c * PHI)
    assert abs(scaled - base) < 1e-10


def test_radical_examples():
    assert abs(radical(32, 1, 31) - math.log(2) - math.log(31)) < TOL
    assert abs(radical(4, 9, -13) - math.log(2 * 3 * 13)) < TOL
    assert radical(1, 1, 1) == 0.0
    assert abs(radical(2, 2, 2)) < TOL  # shared valuation does not count
    with pytest.raises(UsageError):
        radical(0, 1, 1)


def test_abc_quality_examples():
    assert abs(abc_quality(1, -2, 1) - 1.0) < TOL
    assert abs(abc_quality(2, 3, -5) - math.log(5) / math.log(30)) < TOL
    assert abs(abc_quality(1, 80, -81) - math.log(81) / math.log(30)) < TOL
    with pytest.raises(UsageError):
        abc_quality(1, 2, 3)  # sum is not zero
    with pytest.raises(UsageError):
        abc_quality(0, 1, -1)


def test_abc_quality_unit_triple_is_infinite():
    # phi + conj(phi) - 1 = 0 with every coordinate a unit: no finite support
    q = abc_quality(PHI, PHI.conjugate(), -1)
    assert q == math.inf


def test_abc_quality_torsion_triple_is_zero():
    zeta = qelem(KM3, 0, 1)  # primitive sixth root of unity
    assert abc_quality(zeta, zeta.conjugate(), -1) == 0.0


def test_log_norm_values():
    assert abs(log_norm(as_element(2)) - math.log(2)) < TOL
    assert log_norm(PHI) == 0.0
    P2 = prime_ideals_above(K5, 2)[0]
    assert abs(log_norm(P2) - math.log(2)) < TOL  # norm 4, degree 2
    P11 = prime_ideals_above(K5, 11)[0]
    assert abs(log_norm(P11) - math.log(11) / 2) < TOL
    P3 = prime_ideals_above(None, 3)[0]
    assert abs(log_norm(P3) - math.log(3)) < TOL


def test_phi_norm_ratio_values():
    assert phi_norm_ratio(2, 1).ratio == 0.0
    r = phi_norm_ratio(2, 6)
    assert abs(r.ratio - math.log(3) / 2) < TOL
    assert abs(r.target - math.log(2)) < TOL
    assert abs(phi_norm_ratio(2, 210).ratio - math.log(2)) < 0.05
    with pytest.raises(UsageError):
        phi_norm_ratio(-1, 2)  # Phi_2(-1) = 0


def test_phi_norm_ratio_quadratic_target():
    g = PHI * PHI
    r = phi_norm_ratio(g, 30)
    assert abs(r.target - math.log((1 + math.sqrt(5)) / 2)) < 1e-9
    assert abs(phi_norm_ratio(3, 60).ratio - math.log(3)) < 0.1


def test_phi_norm_lower_bound():
    for n in range(3, 61):
        assert phi_norm_ratio(2, n).ratio >= 0.3, n


def test_totient_density_small():
    count, bound = totient_density(1, 0.1)
    assert count == 1 and abs(bound - (6 / math.pi ** 2 - 0.1)) < TOL
    count, bound = totient_density(1000, 0.2)
    assert count >= bound and count >= 407


def test_totient_density_matches_direct_count():
    Y, delta = 3000, 0.5
    count, bound = totient_density(Y, delta)
    direct = sum(1 for n in range(1, Y + 1) if phi_brute(n) >= delta * n)
    assert count == direct
    assert count >= bound


def test_totient_density_validation():
    with pytest.raises(UsageError):
        totient_density(0, 0.2)
    with pytest.raises(UsageError):
        totient_density(10, 0.0)
    with pytest.raises(UsageError):
        totient_density(10, 0.99)


def test_zero_rejections():
    with pytest.raises(UsageError):
        element_height(0)
    with pytest.raises(UsageError):
        local_values(qelem(K5, 0, 0))
    with pytest.raises(UsageError):
        triple_height(0, 0, 0)
