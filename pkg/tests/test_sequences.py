import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kummer.errors import InputError, NotExactError, PurityError, UnsupportedError
from kummer.groups import (
    FgAbGroup,
    Homomorphism,
    direct_sum,
    element_order,
)
from kummer.matrices import IntMatrix
from kummer.sequences import (
    Section,
    character_pairing,
    check_exact,
    double_dual_inverse,
    double_dual_iso,
    dualize_sequence,
    is_pure,
    pontryagin_dual,
    pruefer_decompose,
    pure_witness,
    rank_m,
    retraction_from_section,
    section_exists,
    section_from_purity,
    section_from_retraction,
    split_sequence,
)

from kummer.fixtures import random_subgroup_sequence
from oracles import brute_same_order_lift, verify_section_on_all


def impure_sequence():
    z2, z4 = FgAbGroup.cyclic(2), FgAbGroup.cyclic(4)
    f = Homomorphism(z2, z4, IntMatrix.from_rows([[2]]))
    g = Homomorphism(z4, z2, IntMatrix.from_rows([[1]]))
    return check_exact(f, g)


def klein_sequence():
    ds = direct_sum(FgAbGroup.cyclic(2), FgAbGroup.cyclic(2))
    return check_exact(ds.injections[0], ds.projections[1])


def test_check_exact_names_every_violated_condition():
    z2, z4 = FgAbGroup.cyclic(2), FgAbGroup.cyclic(4)
    z8 = FgAbGroup.cyclic(8)
    with pytest.raises(NotExactError) as err:
        check_exact(Homomorphism.zero(z2, z4),
                    Homomorphism(z4, z2, IntMatrix.from_rows([[1]])))
    assert err.value.condition == "mono"
    assert err.value.witness is not None
    with pytest.raises(NotExactError) as err:
        check_exact(Homomorphism(z2, z4, IntMatrix.from_rows([[2]])),
                    Homomorphism.zero(z4, z2))
    assert err.value.condition == "epi"
    with pytest.raises(NotExactError) as err:
        check_exact(Homomorphism(z2, z4, IntMatrix.from_rows([[2]])),
                    Homomorphism(z4, z4, IntMatrix.identity(1)))
    assert err.value.condition == "complex"
    with pytest.raises(NotExactError) as err:
        check_exact(Homomorphism(z2, z8, IntMatrix.from_rows([[4]])),
                    Homomorphism(z8, z2, IntMatrix.from_rows([[1]])))
    assert err.value.condition == "middle"
    assert err.value.witness is not None


def test_impure_sequence_decided_with_witness():
    seq = impure_sequence()
    cert = is_pure(seq)
    assert not cert
    assert cert.failure is not None
    assert element_order(cert.failure) == 2
    assert not brute_same_order_lift(seq, cert.failure)
    assert section_exists(seq) is None
    with pytest.raises(PurityError) as err:
        pure_witness(seq, cert.failure)
    assert err.value.element == cert.failure


def test_klein_sequence_splits_three_ways():
    seq = klein_sequence()
    assert is_pure(seq)
    s1 = section_exists(seq)
    s2 = section_from_purity(seq)
    assert s1 is not None
    assert verify_section_on_all(seq, s1)
    assert verify_section_on_all(seq, s2)
    r = retraction_from_section(seq, s1)
    s3 = section_from_retraction(seq, r)
    assert verify_section_on_all(seq, s3)


def test_split_sequence_constructor():
    seq = split_sequence(FgAbGroup.cyclic(4), FgAbGroup.of_orders(2, 3))
    assert seq.B.order == 24
    assert section_exists(seq) is not None


@given(st.integers(0, 10_000))
def test_pure_iff_split_on_random_sequences(seed):
    import random

    seq = random_subgroup_sequence(random.Random(seed), 64)
    cert = is_pure(seq)
    section = section_exists(seq)
    assert bool(cert) == (section is not None)
    if section is not None:
        assert verify_section_on_all(seq, section)
    else:
        assert cert.failure is not None
        assert not brute_same_order_lift(seq, cert.failure)


def test_elementwise_purity_matches_brute_force(rng):
    seqs = [impure_sequence(), klein_sequence()]
    for _ in range(15):
        seqs.append(random_subgroup_sequence(rng, 48))
    for seq in seqs:
        for c in seq.C.elements():
            brute = brute_same_order_lift(seq, c)
            try:
                b = pure_witness(seq, c)
                found = True
                assert seq.g(b) == c
                assert element_order(b) == element_order(c)
            except PurityError:
                found = False
            assert found == brute


def test_pruefer_decompositions():
    g = FgAbGroup.of_orders(2, 12)
    dec = pruefer_decompose(g)
    assert dec.orders == (2, 12)
    fine = pruefer_decompose(g, primary=True)
    assert fine.orders == (2, 4, 3)
    assert (fine.inverse @ fine.iso).is_identity()
    h = FgAbGroup.cyclic(12)
    assert pruefer_decompose(h, primary=True).orders == (4, 3)


def test_pontryagin_double_dual_identity():
    g = FgAbGroup(2, IntMatrix.from_rows([[4, 2], [0, 6]]))
    dd = pontryagin_dual(pontryagin_dual(g))
    iso = double_dual_iso(g)
    inv = double_dual_inverse(g)
    assert (inv @ iso).is_identity()
    assert (iso @ inv).is_identity()
    assert pontryagin_dual(g).invariant_factors == g.invariant_factors


def test_pairing_bilinear_and_nondegenerate(rng):
    g = FgAbGroup(2, IntMatrix.from_rows([[4, 2], [0, 6]]))
    dual = pontryagin_dual(g)
    for _ in range(25):
        chi = dual.element((rng.randrange(12), rng.randrange(12)))
        x = g.element((rng.randrange(12), rng.randrange(12)))
        y = g.element((rng.randrange(12), rng.randrange(12)))
        lhs = character_pairing(chi, x + y)
        rhs = (character_pairing(chi, x) + character_pairing(chi, y)) % 1
        assert lhs == rhs
    for x in g.elements():
        if not x:
            continue
        assert any(character_pairing(chi, x) != Fraction(0)
                   for chi in dual.elements())


def test_dual_is_contravariant_on_maps():
    g = FgAbGroup.cyclic(4)
    h = FgAbGroup.cyclic(8)
    f = Homomorphism(g, h, IntMatrix.from_rows([[2]]))
    fd = pontryagin_dual(f)
    assert fd.source == pontryagin_dual(h)
    assert fd.target == pontryagin_dual(g)
    for chi in pontryagin_dual(h).elements():
        for x in g.elements():
            assert character_pairing(fd(chi), x) == character_pairing(
                chi, f(x))


def test_dualize_sequence_swaps_ends():
    seq = impure_sequence()
    dual = dualize_sequence(seq)
    assert dual.A.invariant_factors == seq.C.invariant_factors
    assert dual.C.invariant_factors == seq.A.invariant_factors
    assert not is_pure(dual)


def test_rank_identities():
    assert rank_m(FgAbGroup.of_orders(2, 3), 6) == 1
    assert rank_m(FgAbGroup.cyclic(2), 6) == 0
    assert rank_m(FgAbGroup.cyclic(3), 6) == 0
    assert rank_m(FgAbGroup.of_orders(4, 2, 8), 4) == 2
    assert rank_m(FgAbGroup.of_orders(12, 18), 6) == 2
    with pytest.raises(InputError):
        rank_m(FgAbGroup.cyclic(2), 1)
    with pytest.raises(UnsupportedError):
        rank_m(FgAbGroup.free(1), 2)


def test_rank_additivity_on_split_prime_power(rng):
    for _ in range(40):
        a = FgAbGroup.of_orders(*[rng.choice([2, 3, 4, 8, 9])
                                  for _ in range(rng.randint(1, 2))])
        c = FgAbGroup.of_orders(*[rng.choice([2, 3, 4, 8, 9])
                                  for _ in range(rng.randint(1, 2))])
        seq = split_sequence(a, c)
        p = rng.choice([2, 3])
        t = rng.randint(1, 3)
        m = p ** t
        assert rank_m(seq.B, m) == rank_m(a, m) + rank_m(c, m)


def test_purity_with_moduli_for_infinite_middle():
    z = FgAbGroup.free(1)
    z2 = FgAbGroup.cyclic(2)
    f = Homomorphism(z, z, IntMatrix.from_rows([[2]]))
    g = Homomorphism(z, z2, IntMatrix.from_rows([[1]]))
    seq = check_exact(f, g)
    with pytest.raises(UnsupportedError):
        is_pure(seq)
    cert = is_pure(seq, moduli=[2, 4])
    assert not cert
    assert "moduli" in cert.scope


def test_section_constructor_verifies():
    seq = impure_sequence()
    with pytest.raises(InputError):
        Section(seq, Homomorphism(seq.C, seq.B, IntMatrix.from_rows([[1]])))
