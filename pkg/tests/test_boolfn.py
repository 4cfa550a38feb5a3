import numpy as np
import pytest

from degreelab.boolfn import (STAR, InputError, PartialFn, ResourceError,
                              SymmetricSpec, build_named, compose,
                              input_bits, paturi_break, restrict_block)


def test_or2_table():
    assert list(build_named("OR", 2).table) == [0, 1, 1, 1]


def test_pror2_table():
    assert list(build_named("PrOR", 2).table) == [0, 1, 1, STAR]


def test_prth1_of_3():
    f = build_named("PrTH", 3, k=1)
    for i in range(8):
        w = sum(input_bits(i, 3))
        expect = {1: 0, 2: 1}.get(w, STAR)
        assert f.table[i] == expect


def test_prth_invalid_k():
    with pytest.raises(InputError):
        build_named("PrTH", 3, k=3)


def test_compose_identity_inner():
    ident = build_named("OR", 1)
    assert compose(build_named("OR", 2), [ident, ident]) == build_named("OR", 2)


def test_compose_parity_associativity():
    x2 = build_named("XOR", 2)
    assert compose(x2, [x2, x2]) == build_named("XOR", 4)


def test_compose_promise_propagation():
    f = compose(build_named("PrOR", 2), [build_named("AND", 2)] * 2)
    assert f.table[0b0000] == 0
    assert f.table[0b1111] == STAR
    assert f.table[0b1100] == 1  # first AND fires, second is 0


def test_compose_matches_pointwise_evaluation():
    g = build_named("MAJ", 3)
    fs = [build_named("OR", 2), build_named("AND", 2), build_named("XOR", 2)]
    F = compose(g, fs)
    for i in range(1 << 6):
        bits = input_bits(i, 6)
        inner = [f.value(bits[2 * j:2 * j + 2]) for j, f in enumerate(fs)]
        assert F.table[i] == g.value(inner)


def test_compose_or_associativity_flatten():
    f = build_named("AND", 2)
    nested = compose(build_named("OR", 2),
                     [compose(build_named("OR", 2), [f, f]),
                      compose(build_named("OR", 2), [f, f])])
    flat = compose(build_named("OR", 4), [f, f, f, f])
    assert nested == flat


def test_compose_arity_guard():
    with pytest.raises(ResourceError):
        compose(build_named("OR", 3), [build_named("AND", 7)] * 3)


def test_restrict_block_or_of_ands():
    F = compose(build_named("OR", 2), [build_named("AND", 2)] * 2)
    got = restrict_block(F, 1, (0, 0))
    assert got == build_named("AND", 2)


def test_restrict_block_parity_negates():
    f = build_named("AND", 2)
    F = compose(build_named("XOR", 2), [f, f])
    got = restrict_block(F, 1, (1, 1))  # AND(1,1) = 1 flips the parity
    assert got == f.negate()


def test_restrict_block_pror():
    F = compose(build_named("PrOR", 2), [build_named("AND", 2)] * 2)
    got = restrict_block(F, 1, (0, 0))
    assert got == build_named("AND", 2)  # domain unchanged: weight stays in {0,1}


def test_paturi_break_examples():
    maj5 = SymmetricSpec.from_partialfn(build_named("MAJ", 5))
    assert paturi_break(maj5) == 2
    or6 = SymmetricSpec.from_partialfn(build_named("OR", 6))
    assert paturi_break(or6) == 1
    xor4 = SymmetricSpec.from_partialfn(build_named("XOR", 4))
    assert paturi_break(xor4) == 2


def test_paturi_break_rejects_constant():
    with pytest.raises(InputError):
        paturi_break(SymmetricSpec(3, (1, 1, 1, 1)))


def test_everywhere_undefined_rejected():
    with pytest.raises(InputError):
        PartialFn(2, np.full(4, STAR, dtype=np.int8))
    with pytest.raises(InputError):
        SymmetricSpec(2, (STAR, STAR, STAR))


def test_text_roundtrip():
    for f in [build_named("PrOR", 3), build_named("XOR", 4), build_named("PrTH", 4, k=2)]:
        assert PartialFn.from_text(f.to_text()) == f


def test_dom_nonempty_and_table_size():
    for name, n in [("OR", 3), ("PrOR", 4), ("MAJ", 5), ("NAND", 2)]:
        f = build_named(name, n)
        assert f.table.size == 1 << n
        assert f.dom_mask.any()


def test_symmetric_detection():
    assert SymmetricSpec.from_partialfn(build_named("MAJ", 4)).levels == (0, 0, 0, 1, 1)
    asym = PartialFn.from_table_string("0100", name="x1-only")
    assert SymmetricSpec.from_partialfn(asym) is None
