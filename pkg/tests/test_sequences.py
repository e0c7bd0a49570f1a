"""Sequence constructors: character polynomials, rotations, completion families."""

import io
import math
from fractions import Fraction

import numpy as np
import pytest

from littlewood.numbers import AdmissibilityError, factor_odd_squarefree, jacobi
from littlewood.sequences import (
    Rotation,
    TernarySequence,
    character_polynomial,
    complete,
    completion_all_ones,
    completion_constant,
    completion_jacobi_product,
    completion_random,
    completion_support,
    completion_two_prime,
    enumerate_completions,
    read_sequence,
    rotate,
    write_sequence,
)

MODULI = (3, 15, 21, 35, 105, 1155)


class TestTernarySequence:
    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError, match="-1,0"):
            TernarySequence(np.array([1, 2, 0]))

    def test_immutable(self):
        seq = TernarySequence(np.array([1, 0, -1]))
        with pytest.raises(ValueError):
            seq.coeffs[0] = 0

    def test_weight_and_support(self):
        seq = TernarySequence(np.array([1, 0, -1, 0, 1]))
        assert seq.weight() == 3
        assert seq.support().tolist() == [0, 2, 4]


class TestCharacterPolynomial:
    def test_n3(self):
        assert character_polynomial(factor_odd_squarefree(3)).coeffs.tolist() == [0, 1, -1]

    def test_n15_spot_values(self):
        j15 = character_polynomial(factor_odd_squarefree(15))
        assert j15.coeffs[0] == 0
        assert j15.coeffs[7] == -1

    @pytest.mark.parametrize("n", MODULI)
    def test_table_path_matches_scalar_jacobi(self, n):
        m = factor_odd_squarefree(n)
        coeffs = character_polynomial(m).coeffs
        assert all(coeffs[j] == jacobi(j, n) for j in range(n))

    @pytest.mark.parametrize("n", MODULI)
    def test_weight_counts(self, n):
        m = factor_odd_squarefree(n)
        seq = character_polynomial(m)
        assert seq.weight() == m.phi
        assert (seq.n - seq.weight()) == m.psi
        assert seq.kind == "character"


class TestRotation:
    def test_floor_shift(self):
        assert Rotation(Fraction(1, 4)).shift(15) == 3
        assert Rotation(Fraction(-1, 4)).shift(15) == -4
        assert Rotation(Fraction(1)).shift(15) == 15
        assert Rotation(Fraction(0)).shift(15) == 0

    def test_identity_rotations(self):
        seq = character_polynomial(factor_odd_squarefree(15))
        assert np.array_equal(rotate(seq, Rotation(Fraction(0))).coeffs, seq.coeffs)
        # z^{-n} = 1 mod (z^n - 1)
        assert np.array_equal(rotate(seq, Rotation(Fraction(1))).coeffs, seq.coeffs)

    def test_shift_by_three(self):
        seq = character_polynomial(factor_odd_squarefree(15))
        rotated = rotate(seq, Rotation(Fraction(1, 4)))
        assert np.array_equal(rotated.coeffs, np.roll(seq.coeffs, -3))

    def test_composition_of_shifts(self):
        seq = character_polynomial(factor_odd_squarefree(21))
        r1, r2 = Rotation(Fraction(1, 4)), Rotation(Fraction(2, 7))
        both = rotate(rotate(seq, r1), r2)
        combined = np.roll(seq.coeffs, -((r1.shift(21) + r2.shift(21)) % 21))
        assert np.array_equal(both.coeffs, combined)

    def test_multiset_preserved(self):
        seq = character_polynomial(factor_odd_squarefree(35))
        rotated = rotate(seq, Rotation(Fraction(3, 8)))
        assert sorted(rotated.coeffs.tolist()) == sorted(seq.coeffs.tolist())


class TestCompletions:
    def test_all_ones_support(self):
        m = factor_odd_squarefree(15)
        v = completion_all_ones(m)
        assert v.support().tolist() == [0, 3, 5, 6, 9, 10, 12]
        assert v.weight() == m.psi
        v3 = completion_all_ones(factor_odd_squarefree(3))
        assert v3.support().tolist() == [0]

    def test_jacobi_product_values(self):
        m = factor_odd_squarefree(15)
        v = completion_jacobi_product(m)
        assert v.coeffs[3] == -1  # (3|5)
        assert v.coeffs[5] == -1  # (5|3)
        assert v.coeffs[0] == 1   # empty symbol (0|1)
        assert v.support().tolist() == completion_support(m).tolist()

    def test_two_prime_pattern(self):
        v = completion_two_prime(5, 3)
        plus = np.flatnonzero(v.coeffs == 1).tolist()
        minus = np.flatnonzero(v.coeffs == -1).tolist()
        assert plus == [0, 3, 6, 9, 12]
        assert minus == [5, 10]
        assert v.weight() == 7  # psi(15)

    def test_two_prime_support_is_nonunit_set(self):
        v = completion_two_prime(7, 5)
        m = factor_odd_squarefree(35)
        assert v.support().tolist() == completion_support(m).tolist()

    def test_two_prime_rejects(self):
        with pytest.raises(AdmissibilityError):
            completion_two_prime(3, 3)
        with pytest.raises(AdmissibilityError):
            completion_two_prime(3, 5)
        with pytest.raises(AdmissibilityError):
            completion_two_prime(9, 5)

    def test_random_deterministic(self):
        m = factor_odd_squarefree(15)
        a = completion_random(m, 1234)
        b = completion_random(m, 1234)
        assert np.array_equal(a.coeffs, b.coeffs)
        assert a.support().tolist() == completion_support(m).tolist()

    def test_random_seed_pairs_mostly_differ(self):
        # P(two seeds agree) = 2^-7 for psi=7; over 1000 pairs expect ~8 collisions
        m = factor_odd_squarefree(15)
        differing = sum(
            not np.array_equal(
                completion_random(m, 2 * k).coeffs, completion_random(m, 2 * k + 1).coeffs
            )
            for k in range(1000)
        )
        assert differing > 950

    def test_constant_rejects_bad_sign(self):
        with pytest.raises(ValueError):
            completion_constant(factor_odd_squarefree(15), 2)


class TestEnumerate:
    def test_counts(self):
        assert sum(1 for _ in enumerate_completions(factor_odd_squarefree(15))) == 128
        seqs = list(enumerate_completions(factor_odd_squarefree(3)))
        assert len(seqs) == 2
        # prime n: exactly the +1 and -1 completions at index 0 (J+-1)
        assert seqs[0].coeffs.tolist() == [-1, 0, 0]
        assert seqs[1].coeffs.tolist() == [1, 0, 0]

    def test_lexicographic_order(self):
        m = factor_odd_squarefree(15)
        seqs = list(enumerate_completions(m))
        support = completion_support(m)
        vectors = [tuple(s.coeffs[support].tolist()) for s in seqs]
        assert vectors == sorted(vectors)
        assert len(set(vectors)) == len(vectors)

    def test_support_invariant_every_member(self):
        m = factor_odd_squarefree(21)
        support = completion_support(m).tolist()
        for seq in enumerate_completions(m):
            assert seq.support().tolist() == support

    def test_guard_on_large_psi(self):
        with pytest.raises(AdmissibilityError, match="2\\^"):
            next(enumerate_completions(factor_odd_squarefree(3 * 5 * 7 * 11)))


class TestComplete:
    def test_small_example(self):
        m = factor_odd_squarefree(3)
        j3 = character_polynomial(m)
        v = completion_constant(m, 1)
        assert complete(j3, v).coeffs.tolist() == [1, 1, -1]

    def test_all_families_give_littlewood(self):
        for n in (15, 35, 105):
            m = factor_odd_squarefree(n)
            j_poly = character_polynomial(m)
            completions = [
                completion_all_ones(m),
                completion_constant(m, -1),
                completion_jacobi_product(m),
                completion_random(m, 99),
            ]
            if m.omega == 2:
                q, p = m.prime_factors
                completions.append(completion_two_prime(p, q))
            for v in completions:
                jv = complete(j_poly, v)
                assert jv.kind == "littlewood"
                assert set(np.unique(jv.coeffs)) <= {-1, 1}
                assert jv.weight() == n

    def test_rejects_overlap_and_mismatch(self):
        m15, m21 = factor_odd_squarefree(15), factor_odd_squarefree(21)
        j15 = character_polynomial(m15)
        with pytest.raises(ValueError, match="length"):
            complete(j15, completion_all_ones(m21))
        bad = TernarySequence(np.roll(completion_all_ones(m15).coeffs, 1), kind="completion")
        with pytest.raises(ValueError):
            complete(j15, bad)

    def test_rejects_wrong_kinds(self):
        m = factor_odd_squarefree(15)
        j_poly = character_polynomial(m)
        with pytest.raises(ValueError, match="kind|character"):
            complete(j_poly, j_poly)


class TestTextFormat:
    def test_roundtrip(self):
        m = factor_odd_squarefree(15)
        seq = complete(character_polynomial(m), completion_jacobi_product(m))
        buf = io.StringIO()
        write_sequence(seq, buf)
        buf.seek(0)
        back = read_sequence(buf)
        assert back.kind == "littlewood"
        assert np.array_equal(back.coeffs, seq.coeffs)

    def test_header_format(self):
        buf = io.StringIO()
        write_sequence(character_polynomial(factor_odd_squarefree(3)), buf)
        assert buf.getvalue() == "3 character\n0 1 -1\n"

    def test_rejects_malformed(self):
        with pytest.raises(ValueError):
            read_sequence(io.StringIO("3\n0 1 -1\n"))
        with pytest.raises(ValueError):
            read_sequence(io.StringIO("4 other\n0 1 -1\n"))
