import json

import pytest

from padiccf.errors import HViolation, IrreducibilityUnknown, MixedField, Reducible
from padiccf.field import (
    FieldElement,
    MinPoly,
    VectorElement,
    coeff_matrix,
    denom_z,
    element_minpoly,
    height_z,
    independent_with_one,
    validate_minpoly,
)
from padiccf.rationals import Q
from oracles import relation_search


def rand_q(rng, span=9):
    return Q(rng.randint(-span, span), rng.randint(1, span))


def rand_elem(mp, rng, span=9):
    return mp.element([rand_q(rng, span) for _ in range(mp.degree)])


class TestValidate:
    def test_worked_quadratic(self):
        mp = validate_minpoly(2, [1, 2])
        assert mp.certificate_prime == 3

    def test_h_violation(self):
        with pytest.raises(HViolation):
            validate_minpoly(2, [2, 2])  # x^2+2x+2: subleading not a unit

    def test_reducible_rejected(self):
        with pytest.raises((HViolation, Reducible)):
            validate_minpoly(2, [0, -4])  # x^2-4
        with pytest.raises(Reducible):
            validate_minpoly(2, [3, 2])  # (x+1)(x+2)

    def test_unit_constant_rejected(self):
        with pytest.raises(HViolation):
            validate_minpoly(2, [1, 3])  # constant term a unit

    def test_non_integral_rejected(self):
        with pytest.raises(HViolation):
            validate_minpoly(2, [Q(1, 2), 2])

    def test_force_accepts_uncertified(self):
        # A4 quartic: irreducible but with no single-prime certificate
        with pytest.raises(IrreducibilityUnknown):
            validate_minpoly(3, [0, 0, 8, 12])
        mp = validate_minpoly(3, [0, 0, 8, 12], force=True)
        assert mp.certificate_prime is None

    def test_prime_validated(self):
        with pytest.raises(ValueError):
            validate_minpoly(6, [1, 6])


class TestRingArithmetic:
    def test_worked_products(self, ring_cubic):
        z = ring_cubic.gen()
        assert z * (z * z) == ring_cubic.element([-2, -1])  # z^3 = -z-2
        assert (z * z) * (z * z) == ring_cubic.element([0, -2, -1])
        a = ring_cubic.element([3, Q(1, 2), 5])
        assert a * ring_cubic.one() == a

    def test_invert_examples(self, ring_cubic, k2):
        z = ring_cubic.gen()
        assert z.inverse() == ring_cubic.element([Q(-1, 2), 0, Q(-1, 2)])
        # quadratic x^2+ux+vp^k: 1/z = -(z+u)/(vp^k); here u=1, vp^k=2
        w = k2.gen()
        assert w.inverse() == k2.element([Q(-1, 2), Q(-1, 2)])
        assert k2.one().inverse() == k2.one()

    def test_inverse_round_trip(self, k3, rng):
        for _ in range(50):
            a = rand_elem(k3, rng)
            if a.is_zero():
                continue
            assert (a * a.inverse()) == k3.one()
            assert a.inverse().inverse() == a

    def test_zero_inverse_raises(self, k2):
        with pytest.raises(ZeroDivisionError):
            k2.zero().inverse()

    def test_ring_axioms_sampled(self, k3, rng):
        one = k3.one()
        for _ in range(1000):
            a, b, c = (rand_elem(k3, rng, 5) for _ in range(3))
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a * one == a

    def test_scalar_coercion(self, k2):
        z = k2.gen()
        assert z + 1 == k2.element([1, 1])
        assert 2 * z == k2.element([0, 2])
        assert (2 / z) == z.inverse() * 2
        assert z - Q(1, 2) == k2.element([Q(-1, 2), 1])

    def test_mixed_field_rejected(self, k2, k3):
        with pytest.raises(MixedField):
            k2.gen() + k3.gen()


class TestElementMinpoly:
    def test_generator(self, k2):
        g = element_minpoly(k2.gen())
        assert g == k2.ascending()

    def test_rational(self, k2):
        assert element_minpoly(k2.rational(Q(5, 3))) == (Q(-5, 3), Q(1))

    def test_square_of_generator(self, ring_cubic):
        w = ring_cubic.gen() * ring_cubic.gen()
        g = element_minpoly(w)
        assert len(g) == 4  # degree 3
        acc = ring_cubic.zero()
        for i, c in enumerate(g):
            acc = acc + w**i * c
        assert acc.is_zero()


class TestCoefficientFunctionals:
    def test_denom_z(self, k2, k3):
        assert denom_z(k2.element([Q(1, 3), Q(1, 2)])) == 6
        assert denom_z(k2.element([4, 7])) == 1
        vec = k3.vector([[0, Q(1, 2)], [0, Q(1, 4)]])
        assert denom_z(vec) == 4

    def test_height_z(self, k2, k3):
        assert height_z(k2.element([Q(2, 3), 1])) == 5
        assert height_z(k2.zero()) == 1
        assert height_z(k3.vector([[-4], [0, Q(1, 7)]])) == 8

    def test_coeff_matrix_examples(self, k3):
        z = k3.gen()
        m, msq = coeff_matrix(k3.vector([z * z, z]))
        assert m.to_json() == [["1", "0", "0"], ["0", "1", "0"]]
        # nested-sum vector u1 = z^2+z, u2 = z
        m2, msq2 = coeff_matrix(k3.vector([z * z + z, z]))
        assert m2.to_json() == [["1", "1", "0"], ["0", "1", "0"]]
        assert msq2.to_json() == [["1", "1"], ["0", "1"]]

    def test_degree_two_matrix(self, k2):
        m, _ = coeff_matrix(k2.vector([k2.gen() + 1]))
        assert m.to_json() == [["1", "1"]]

    def test_coeff_matrix_reconstructs(self, k3, rng):
        for _ in range(25):
            vec = k3.vector([rand_elem(k3, rng) for _ in range(2)])
            m, _ = coeff_matrix(vec)
            s = k3.s
            basis = [k3.gen() ** (s - j) for j in range(s)] + [k3.one()]
            rebuilt = [
                sum((b * c for b, c in zip(basis, row)), k3.zero())
                for row in m.entries
            ]
            assert VectorElement(tuple(rebuilt)) == vec

    def test_denom_scaling_clears(self, k3, rng):
        for _ in range(25):
            a = rand_elem(k3, rng)
            assert denom_z(a * denom_z(a)) == 1


class TestIndependence:
    def test_examples(self, k3):
        z = k3.gen()
        assert independent_with_one([z, z * z])
        assert not independent_with_one([z, z + 1])

    def test_cross_checked_by_relation_search(self, k3, rng):
        hits = 0
        for _ in range(12):
            elems = [
                k3.element([rng.randint(-2, 2) for _ in range(3)]) for _ in range(2)
            ]
            got = independent_with_one(elems)
            rel = relation_search(elems, bound=6)
            assert got == (rel is None)
            hits += got
        assert 0 < hits  # sample contains both outcomes in practice


class TestSerialization:
    def test_field_element_json(self, k2):
        a = k2.element([Q(-5, 7), 3])
        blob = json.dumps(a.to_json())
        assert json.loads(blob) == {"coeffs": ["-5/7", "3"]}
        assert FieldElement.from_json(k2, json.loads(blob)) == a

    def test_minpoly_json(self, k2):
        data = k2.to_json()
        assert data == {"p": 2, "coeffs": ["1", "2"], "certificate_prime": 3}
        again = MinPoly.from_json(data)
        assert again == k2

    def test_vector_json(self, k3):
        vec = k3.vector([[1, 2], [0, 0, Q(1, 3)]])
        assert VectorElement.from_json(k3, vec.to_json()) == vec
