import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hadsimplex.errors import CapacityError, InvalidParameterError, MalformedMatrixError, MatrixParseError
from hadsimplex.geometry import bareiss_determinant
from hadsimplex.hadamard import (
    OP_KINDS,
    EquivalenceOp,
    HadamardMatrix,
    apply_op,
    apply_ops,
    generate,
    normalize_last_column,
    paley_I,
    parse_matrix,
    serialize_matrix,
    sylvester,
    verify,
)
from oracles import is_hadamard_loops


def test_sylvester_base_cases():
    assert sylvester(0).rows == ((1,),)
    assert sylvester(1).rows == ((1, 1), (1, -1))


@pytest.mark.parametrize("k", range(0, 7))
def test_sylvester_verifies(k):
    H = sylvester(k)
    assert H.order == 2**k
    assert verify(H)
    if k <= 4:
        assert is_hadamard_loops(H.rows)


def test_sylvester_capacity():
    with pytest.raises(CapacityError):
        sylvester(25)
    with pytest.raises(InvalidParameterError):
        sylvester(-1)


@pytest.mark.parametrize("q", [3, 7, 11, 19, 23, 31, 43])
def test_paley_verifies(q):
    H = paley_I(q)
    assert H.order == q + 1
    assert verify(H)
    assert is_hadamard_loops(H.rows)


@pytest.mark.parametrize("q", [5, 9, 13, 15, 1, 2])
def test_paley_rejects(q):
    with pytest.raises(InvalidParameterError):
        paley_I(q)


def test_verify_examples():
    assert verify([[1]])
    assert not verify([[1, 1], [1, 1]])
    assert verify(sylvester(2))


def test_verify_malformed():
    with pytest.raises(MalformedMatrixError):
        verify([[1, 1, 1], [1, -1, 1]])
    with pytest.raises(MalformedMatrixError):
        verify([[1, 0], [1, -1]])
    with pytest.raises(MalformedMatrixError):
        HadamardMatrix(((1, 2), (1, 1)))


def test_swap_rows_example():
    H = apply_op(sylvester(1), EquivalenceOp("swap-rows", (1, 2)))
    assert H.rows == ((1, -1), (1, 1))
    assert verify(H)


def test_negate_row_is_involution():
    H = paley_I(11)
    op = EquivalenceOp("negate-row", (1,))
    assert apply_op(apply_op(H, op), op) == H


def test_op_validation():
    with pytest.raises(InvalidParameterError):
        EquivalenceOp("swap-cols", (2, 2))
    with pytest.raises(InvalidParameterError):
        EquivalenceOp("rotate", (1,))
    with pytest.raises(InvalidParameterError):
        apply_op(sylvester(1), EquivalenceOp("negate-col", (3,)))


@st.composite
def op_sequences(draw, m):
    ops = []
    for _ in range(draw(st.integers(0, 12))):
        kind = draw(st.sampled_from(OP_KINDS))
        if kind.startswith("swap"):
            i, j = draw(st.lists(st.integers(1, m), min_size=2, max_size=2, unique=True))
            ops.append(EquivalenceOp(kind, (i, j)))
        else:
            ops.append(EquivalenceOp(kind, (draw(st.integers(1, m)),)))
    return ops


@settings(max_examples=60, deadline=None)
@given(data=st.data(), m=st.sampled_from([2, 4, 8, 12, 16]))
def test_ops_preserve_hadamard(data, m):
    H = sylvester(m.bit_length() - 1) if m & (m - 1) == 0 else paley_I(m - 1)
    ops = data.draw(op_sequences(m))
    G = apply_ops(H, ops)
    assert verify(G)
    for op in ops[:3]:
        assert apply_op(apply_op(G, op), op) == G


def test_normalize_sylvester2():
    H = sylvester(2)
    assert H.last_column() == (1, -1, -1, 1)
    N = normalize_last_column(H)
    assert N.rows[0] == H.rows[0] and N.rows[3] == H.rows[3]
    assert N.rows[1] == tuple(-v for v in H.rows[1])
    assert N.rows[2] == tuple(-v for v in H.rows[2])
    assert set(N.last_column()) == {1}
    assert verify(N)


@pytest.mark.parametrize("m", [1, 2, 4, 8, 12, 16, 20, 24])
def test_normalize_fixed_point_and_idempotent(m):
    from conftest import hadamard_of_order

    N = normalize_last_column(hadamard_of_order(m))
    assert set(N.last_column()) == {1}
    assert verify(N)
    assert normalize_last_column(N) == N


def test_parse_examples():
    assert parse_matrix("+\n").rows == ((1,),)
    assert parse_matrix("++\n+-\n") == sylvester(1)
    assert parse_matrix("\n + + \n\n+ -\n") == sylvester(1)


@pytest.mark.parametrize("m", [2, 4, 12, 16, 24])
def test_round_trip(m):
    from conftest import hadamard_of_order

    H = hadamard_of_order(m)
    assert parse_matrix(serialize_matrix(H)) == H


def test_parse_errors_carry_line_numbers():
    with pytest.raises(MatrixParseError) as exc:
        parse_matrix("++\n+x\n")
    assert exc.value.line == 2
    with pytest.raises(MatrixParseError) as exc:
        parse_matrix("++\n\n+-+\n")
    assert exc.value.line == 3
    with pytest.raises(MatrixParseError):
        parse_matrix("++\n")
    with pytest.raises(MatrixParseError):
        parse_matrix("")


def test_parse_does_not_check_orthogonality():
    H = parse_matrix("++\n++\n")
    assert not verify(H)


@pytest.mark.parametrize("m", [1, 2, 4, 8, 12, 16])
def test_determinant_magnitude(m):
    from conftest import hadamard_of_order

    H = hadamard_of_order(m)
    assert abs(bareiss_determinant(H.rows)) == m ** (m // 2)


def test_generate_dispatch():
    assert generate(16, "sylvester") == sylvester(4)
    assert generate(24, "paley") == paley_I(23)
    with pytest.raises(InvalidParameterError):
        generate(12, "sylvester")
    with pytest.raises(InvalidParameterError):
        generate(16, "williamson")


def test_array_is_int64():
    a = sylvester(3).to_array()
    assert a.dtype == np.int64 and a.shape == (8, 8)
