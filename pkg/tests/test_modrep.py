import pytest

from bmcycles.arith import CyclotomicField, CyclotomicNumber, solve_linear_system
from bmcycles.errors import EqualCharacters, NotARepresentation, SingularMatrix, SizeLimit
from bmcycles.modrep import (
    BrauerCharacter, SerreWeightGL2, WeightMultiset, character_principal_series,
    character_steinberg, character_sym, character_trivial, character_weight,
    composition_factors_explicit, decompose, gl2_generators, p_regular_classes, sym_matrix,
    weight_characters, weights,
)


def W(p, *pairs):
    return WeightMultiset.from_mapping({SerreWeightGL2(m, n, p): 1 for m, n in pairs})


def one(N):
    return CyclotomicNumber.from_int(N, 1)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_class_inventory(p):
    classes = p_regular_classes(p)
    assert len(classes) == p * (p - 1)
    assert len(set(classes)) == len(classes)
    N = p * p - 1
    for c in classes:
        if c.kind == "nonsplit":
            j = c.params[0]
            assert j % (p + 1) and j == min(j, p * j % N)


def test_weight_ranges():
    with pytest.raises(ValueError):
        SerreWeightGL2(4, 0, 5)
    with pytest.raises(ValueError):
        SerreWeightGL2(0, 5, 5)
    assert SerreWeightGL2.normalized(-1, 2, 5) == SerreWeightGL2(3, 2, 5)
    assert SerreWeightGL2(1, 3, 5).label == "sigma[1,3]"


def test_sym_character_values():
    p = 5
    N = p * p - 1
    triv = character_sym(0, 0, p)
    assert all(v == one(N) for v in triv.values)
    std = character_sym(0, 1, p)
    for cls, v in zip(p_regular_classes(p), std.values):
        if cls.kind == "central":
            e = cls.eigen_exponents[0]
            assert v == 2 * CyclotomicNumber.zeta(N, e)
    assert character_weight(SerreWeightGL2(2, 3, p)).degree == 4


@pytest.mark.parametrize("p", [3, 5])
def test_eigenvalue_formula(p):
    # (ab)^a (a^(b+1) - b^(b+1)) / (a - b) on non-central classes
    N = p * p - 1
    for a, b in [(0, 2), (1, 3), (2, p)]:
        chi = character_sym(a, b, p)
        for cls, v in zip(p_regular_classes(p), chi.values):
            e1, e2 = cls.eigen_exponents
            al, be = CyclotomicNumber.zeta(N, e1), CyclotomicNumber.zeta(N, e2)
            if cls.kind == "central":
                assert v == (b + 1) * al ** (2 * a + b)
            else:
                assert v * (al - be) == (al * be) ** a * (al ** (b + 1) - be ** (b + 1))


@pytest.mark.parametrize("p", [3, 5])
def test_weight_matrix_invertible_exactly(p):
    # exact determinant test: the square system is solvable over Q(zeta)
    K = CyclotomicField(p * p - 1)
    chars = weight_characters(p)
    n = len(chars)
    A = [[chars[w].values[c] for w in range(n)] for c in range(n)]
    sol = solve_linear_system(A, [K(1)] * n, K)
    assert len(sol) == n


@pytest.mark.parametrize("p", [3, 5, 7])
def test_decompose_basis(p):
    for w in weights(p):
        assert decompose(character_weight(w)) == WeightMultiset.from_mapping({w: 1})


@pytest.mark.parametrize("p", [3, 5])
def test_exact_and_modular_agree(p):
    for chi in (character_steinberg(p), character_principal_series(1, 0, p),
                character_sym(1, 2 * p, p)):
        assert decompose(chi, method="exact") == decompose(chi)


def test_decompose_examples():
    assert decompose(character_sym(0, 3, 3)) == W(3, (0, 1), (1, 1))
    assert decompose(character_sym(0, 4, 5)) == W(5, (0, 4))
    assert decompose(character_principal_series(1, 0, 5)) == W(5, (0, 1), (1, 3))
    for p in (3, 5, 7):
        st = character_steinberg(p)
        assert st.degree == p
        assert decompose(st) == W(p, (0, p - 1))
        for m in range(p - 1):
            assert decompose(st.twist(m)) == W(p, (m, p - 1))
        assert character_principal_series(1, 0, p).degree == p + 1


@pytest.mark.parametrize("p", [5, 7])
def test_principal_series_pairs(p):
    for m in range(p - 1):
        for n in range(1, p - 1):
            got = decompose(character_principal_series(m + n, m, p))
            assert got == W(p, (m, n), ((m + n) % (p - 1), p - 1 - n))


@pytest.mark.parametrize("p", [3, 5])
def test_twist_equivariance(p):
    for b in range(2 * p + 1):
        base = decompose(character_sym(0, b, p))
        for m in range(1, p - 1):
            shifted = WeightMultiset.from_mapping(
                {SerreWeightGL2((w.m + m) % (p - 1), w.n, p): k for w, k in base.entries})
            assert decompose(character_sym(0, b, p).twist(m)) == shifted


def test_dimension_bookkeeping():
    for p in (3, 5):
        for b in range(2 * p + 1):
            assert decompose(character_sym(0, b, p)).dimension == b + 1


def test_errors():
    with pytest.raises(EqualCharacters):
        character_principal_series(2, 6, 5)
    with pytest.raises(NotARepresentation):
        decompose(character_steinberg(5) - character_trivial(5))
    with pytest.raises(SizeLimit):
        composition_factors_explicit(0, 3, 11)
    with pytest.raises(SizeLimit):
        composition_factors_explicit(0, 40, 5)
    with pytest.raises(ValueError):
        character_sym(0, 1, 2)


def test_oracle_examples():
    for p in (3, 5, 7):
        for b in range(p):
            assert composition_factors_explicit(0, b, p) == W(p, (0, b))
        assert composition_factors_explicit(1, 0, p) == W(p, (1, 0))
    assert composition_factors_explicit(0, 3, 3) == W(3, (0, 1), (1, 1))


def test_sym_matrices_are_representations():
    p = 5
    s1, s2 = gl2_generators(p)

    def mat2(g, h):
        return tuple(tuple(sum(g[i][k] * h[k][j] for k in range(2)) % p for j in range(2))
                     for i in range(2))

    def matmul(A, B):
        return [[sum(A[i][k] * B[k][j] for k in range(len(B))) % p for j in range(len(B[0]))]
                for i in range(len(A))]

    for a, b in [(0, 3), (1, 4), (2, 6)]:
        lhs = sym_matrix(mat2(s1, s2), a, b, p)
        rhs = matmul(sym_matrix(s1, a, b, p), sym_matrix(s2, a, b, p))
        assert lhs == rhs


def test_character_arithmetic():
    p = 5
    a = character_sym(0, 1, p)
    assert (a + a) - a == a
    assert (a * a) == character_sym(0, 2, p) + character_sym(1, 0, p)
    assert 2 * a == a + a
    with pytest.raises(ValueError):
        BrauerCharacter(p, [{}])


def test_multiset_json():
    m = W(5, (1, 3), (0, 1))
    assert list(m.to_json()) == ["sigma[0,1]", "sigma[1,3]"]
    assert m.dimension == 6
