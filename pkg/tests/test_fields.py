import pickle

import pytest

from drinfeld import fq_context


def test_prime_field_tables(F3):
    assert F3.add[2][2] == 1
    assert F3.mul[2][2] == 1
    assert F3.inv[2] == 2
    assert F3.neg[1] == 2
    assert F3.sub[0][1] == 2


def test_f4_fixed_modulus(F4):
    # z^2 + z + 1 = 0, z encoded as 2, z+1 as 3
    assert F4.modulus == (1, 1, 1)
    assert F4.mul[2][2] == 3        # z^2 = z + 1
    assert F4.mul[2][3] == 1        # z * (z + 1) = 1
    assert F4.inv[2] == 3
    assert F4.add[2][3] == 1        # z + (z+1) = 1


def test_f9_default_modulus():
    F9 = fq_context(3, 2)
    assert F9.modulus == (1, 0, 1)  # z^2 + 1 is the first irreducible
    # z^3 = -z = 2z, encoded 6
    assert F9.frob(3) == 6
    assert F9.mul[3][3] == F9.neg[1]  # z^2 = -1


def test_field_axioms_sampled():
    for ctx in (fq_context(2), fq_context(5), fq_context(2, 2), fq_context(3, 2)):
        q = ctx.q
        for a in range(q):
            assert ctx.add[a][ctx.neg[a]] == 0
            if a:
                assert ctx.mul[a][ctx.inv[a]] == 1
                assert ctx.pow(a, q - 1) == 1
            for b in range(q):
                assert ctx.add[a][b] == ctx.add[b][a]
                assert ctx.mul[a][b] == ctx.mul[b][a]


def test_distributivity_f8():
    F8 = fq_context(2, 3)
    for a in range(8):
        for b in range(8):
            for c in range(8):
                lhs = F8.mul[a][F8.add[b][c]]
                rhs = F8.add[F8.mul[a][b]][F8.mul[a][c]]
                assert lhs == rhs


def test_context_identity_and_pickle(F4):
    assert fq_context(2, 2) is F4
    assert fq_context(2, 2, (1, 1, 1)) is F4
    assert pickle.loads(pickle.dumps(F4)) is F4


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        fq_context(4)
    with pytest.raises(ValueError):
        fq_context(2, 2, (1, 0, 1))  # z^2 + 1 = (z+1)^2 over F_2


def test_elem_str(F4):
    assert [F4.elem_str(a) for a in range(4)] == ["0", "1", "z", "z+1"]
