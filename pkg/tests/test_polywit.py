import random
from fractions import Fraction

import pytest

from nilgo.linalg import RatMatrix, det
from nilgo.polywit import (
    MultiPoly,
    NV,
    PAIR_ORDER,
    SymbolicMatrix,
    Z_OF_CLASS,
    exhibited_extended_matrix,
    family_membership_check,
    left_kernel_identity,
    minor,
    negative_class_factors,
    null_class_factors,
    NEGATIVE_KERNEL,
    NULL_KERNEL,
    poly_from_pairs,
    symbolic_go_matrix,
    symbolic_vector,
    verify_n34_identities,
    verify_witness_family,
    witness_families,
)

from conftest import algebra, normalizer


def rand_poly(rng, nvars=3, terms=4, deg=3):
    out = MultiPoly.zero(nvars)
    for _ in range(terms):
        e = tuple(rng.randint(0, deg) for _ in range(nvars))
        out = out + MultiPoly(nvars, {e: Fraction(rng.randint(-9, 9), rng.randint(1, 9))})
    return out


# ---------------------------------------------------------------------------
# ring laws
# ---------------------------------------------------------------------------


def test_ring_laws_random_triples():
    rng = random.Random(41)
    for _ in range(40):
        p, q, r = (rand_poly(rng) for _ in range(3))
        assert (p + q) + r == p + (q + r)
        assert p * (q + r) == p * q + p * r
        assert (p * q) * r == p * (q * r)
        assert p * q == q * p
        assert p - p == MultiPoly.zero(3)


def test_no_zero_terms_stored():
    p = MultiPoly(2, {(1, 0): 1}) + MultiPoly(2, {(1, 0): -1})
    assert p.terms == {}
    q = MultiPoly(2, {(0, 1): 0})
    assert q.terms == {}


def test_eval_homomorphism():
    rng = random.Random(43)
    for _ in range(100):
        p, q = rand_poly(rng), rand_poly(rng)
        pt = [Fraction(rng.randint(-5, 5), rng.randint(1, 5)) for _ in range(3)]
        assert (p * q).eval_at(pt) == p.eval_at(pt) * q.eval_at(pt)
        assert (p + q).eval_at(pt) == p.eval_at(pt) + q.eval_at(pt)


def test_poly_str_graded_sorted():
    p = poly_from_pairs(3, [(1, [0]), (2, [1, 1]), (-1, [])])
    assert str(p) == "2 * y2^2 + 1 * y1 + -1"


# ---------------------------------------------------------------------------
# symbolic systems and minors
# ---------------------------------------------------------------------------


def test_symbolic_matrix_instantiates_to_go_system(n34, nd34):
    from nilgo.goprop import GoContext

    rng = random.Random(47)
    for label in ("positive", "negative", "null"):
        sm = symbolic_go_matrix(n34, nd34, label)
        assert (sm.rows, sm.cols) == (8, 16)
        ctx = GoContext(n34, nd34, list(Z_OF_CLASS[label]), restrict_to_vv=True)
        for _ in range(20):
            pt = [Fraction(rng.randint(-20, 20), rng.randint(1, 10)) for _ in range(8)]
            a, b = ctx.system(pt)
            ext = RatMatrix.from_columns([a.column(j) for j in range(a.cols)] + [b])
            assert sm.instantiate(pt) == ext


def test_negative_class_variable_order():
    assert PAIR_ORDER["negative"] == [
        (1, 2), (1, 3), (1, 5), (1, 6), (1, 7), (2, 3), (2, 5), (2, 6), (2, 7),
        (3, 5), (3, 6), (3, 7), (5, 6), (5, 7), (6, 7),
    ]


def test_minor_repeated_column_is_zero(n34, nd34):
    sm = exhibited_extended_matrix(n34, nd34, "negative")
    m = sm.drop_last_column()
    assert minor(m, [1, 2, 3], [1, 1, 2]).is_zero()


def test_minor_instantiation_commutes_with_det(n34, nd34):
    rng = random.Random(53)
    me = exhibited_extended_matrix(n34, nd34, "negative").drop_last_column()
    rows = [1, 2, 3, 4, 6, 7, 8]
    cols = [9, 10, 11, 12, 13, 14, 15]
    big = minor(me, rows, cols)
    for _ in range(20):
        pt = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(8)]
        inst = me.instantiate(pt)
        sub = RatMatrix.from_rows([[inst[i - 1, j - 1] for j in cols] for i in rows])
        assert big.eval_at(pt) == det(sub)


def test_left_kernel_identities(n34, nd34):
    me = exhibited_extended_matrix(n34, nd34, "negative")
    met = exhibited_extended_matrix(n34, nd34, "null")
    assert left_kernel_identity(me, NEGATIVE_KERNEL())
    assert left_kernel_identity(met, NULL_KERNEL())
    e1 = [MultiPoly.const(1, NV)] + [MultiPoly.zero(NV)] * 7
    assert not left_kernel_identity(me, e1)


def test_kernel_vector_is_eta_y_up_to_row_normalisation(n34, nd34):
    # on the untransformed system the left kernel is eta*Y: a skew map's
    # image is eta-orthogonal to Y
    sm = symbolic_go_matrix(n34, nd34, "negative")
    y = symbolic_vector()
    etay = [y[i].scale(n34.eta_v.signs[i]) for i in range(8)]
    assert left_kernel_identity(sm, etay)


def test_big_minor_factorization(n34, nd34):
    me = exhibited_extended_matrix(n34, nd34, "negative").drop_last_column()
    nf = negative_class_factors()
    y1 = symbolic_vector()[0]
    got = minor(me, [1, 2, 3, 4, 6, 7, 8], [9, 10, 11, 12, 13, 14, 15])
    assert got == y1 * nf["q7"] * nf["q0"]


def test_null_big_minor_factorization(n34, nd34):
    met = exhibited_extended_matrix(n34, nd34, "null").drop_last_column()
    wf = null_class_factors()
    y = symbolic_vector()
    a, b, c, d = y[0] + y[7], y[1] - y[4], y[2] - y[5], y[3] + y[6]
    got = minor(met, [1, 2, 3, 4, 5, 6, 7], [9, 10, 11, 12, 13, 14, 15])
    assert got == (y[2] * (a * d - b * c) * wf["qsum"] * wf["qsum"]).scale(2)


def test_full_identity_suite(n34, nd34):
    res = verify_n34_identities(n34, nd34)
    failures = [k for k, v in res.items() if not v]
    assert not failures, failures
    assert len(res) == 30


# ---------------------------------------------------------------------------
# witness families
# ---------------------------------------------------------------------------


def test_all_witness_families_verify(n34):
    for fam in witness_families():
        assert verify_witness_family(n34, fam), fam.name


def test_family_mutation_detected(n34):
    from dataclasses import replace

    fam = witness_families()[0]
    (pair0, num0), *rest = fam.numerators
    mutated = replace(fam, numerators=((pair0, -num0), *rest))
    assert not verify_witness_family(n34, mutated)


def test_family_membership_forward_check():
    assert family_membership_check()


def test_reflection_families_annihilate_factors():
    nf = negative_class_factors()
    y = symbolic_vector()
    fam1 = [y[0], y[1], y[2], y[3], y[0], y[3], y[2], y[1]]
    for name in ["q1", "q2", "q3", "q4", "q5", "q6", "q7", "q8", "norm", "cross"]:
        assert nf[name].substitute(fam1).is_zero(), name
