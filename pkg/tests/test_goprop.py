import random
from fractions import Fraction

import pytest

from nilgo.clifford import Signature, CliffordModule
from nilgo.htype import assemble, build_algebra
from nilgo.isometry import build_normalizer
from nilgo.linalg import DiagMetric, RatMatrix, commutator, is_metric_skew, solve_consistent
from nilgo.goprop import (
    GOCertificate,
    GoContext,
    N34_REPS,
    center_representatives,
    classify,
    counterexample_search,
    go_probe,
    go_system,
    naturally_reductive_check,
    probe_rank_gap_holds,
    replay,
    search_vectors,
    strong_condition_n34,
    witness_matrix_from_coeffs,
)

from conftest import algebra, normalizer


# ---------------------------------------------------------------------------
# center representatives
# ---------------------------------------------------------------------------


def test_center_representatives_norms():
    alg = algebra(3, 4)
    reps = center_representatives(alg)
    assert alg.eta_z.norm2(reps.positive) == 1
    assert alg.eta_z.norm2(reps.negative) == -1
    assert alg.eta_z.norm2(reps.null) == 0


def test_center_representatives_missing_classes():
    assert center_representatives(algebra(0, 2)).positive is None
    assert center_representatives(algebra(0, 2)).null is None


# ---------------------------------------------------------------------------
# naturally reductive criterion
# ---------------------------------------------------------------------------


def test_nr_verdicts():
    for (r, s), expect in [((0, 1), True), ((1, 2), True), ((1, 1), False),
                           ((0, 2), False), ((2, 1), False), ((0, 3), False), ((3, 4), False)]:
        assert naturally_reductive_check(algebra(r, s)).is_naturally_reductive == expect


def test_nr_one_two_tau_matrices():
    nr = naturally_reductive_check(algebra(1, 2))
    t1 = RatMatrix.from_rows([[0, 0, 0], [0, 0, -2], [0, 2, 0]])
    t2 = RatMatrix.from_rows([[0, 0, -2], [0, 0, 0], [-2, 0, 0]])
    t3 = RatMatrix.from_rows([[0, 2, 0], [2, 0, 0], [0, 0, 0]])
    assert nr.tau == [t1, t2, t3]
    # [J_1, J_2] = 2 J_3 specifically
    alg = algebra(1, 2)
    g = alg.module.generators
    assert commutator(g[0], g[1]) == g[2].scale(2)


def test_nr_zero_one_any_multiplicity():
    for mult in (1, 2, 5):
        nr = naturally_reductive_check(build_algebra(0, 1, mult))
        assert nr.is_naturally_reductive
        assert nr.tau[0].is_zero()


def test_nr_failure_reports_pair():
    nr = naturally_reductive_check(algebra(1, 1))
    assert not nr.is_naturally_reductive
    assert nr.violating_pair == (0, 1)


# ---------------------------------------------------------------------------
# probes
# ---------------------------------------------------------------------------


def test_go_system_shapes_n34(n34, nd34):
    a, b = go_system(n34, nd34, [0, 0, 0, 1, 0, 0, 0], [1, 0, 0, 0, 0, 0, 0, 0])
    assert (a.rows, a.cols) == (8, 15)  # 15 unknowns J_iJ_k, i,k != 4
    assert len(b) == 8


def test_go_system_null_constraints(n34, nd34):
    # [B, J_{Z_1}+J_{Z_4}] = 0 cuts the 21 products to 15 with the forced
    # J_1J_* components
    ctx = GoContext(n34, nd34, [1, 0, 0, 1, 0, 0, 0], restrict_to_vv=True)
    assert len(ctx.nz_basis) == 15
    jz = n34.j_of([1, 0, 0, 1, 0, 0, 0])
    for b in ctx.nz_basis:
        assert commutator(b, jz).is_zero()
    # the combination J_2J_4 - J_1J_2 is in the kernel span
    g = n34.module.generators
    combo = (g[1] @ g[3]) - (g[0] @ g[1])
    from nilgo.linalg import matrix_span_contains

    assert matrix_span_contains(ctx.nz_basis, combo)


def test_probe_zero_z_trivially_consistent(n34, nd34):
    res = go_probe(n34, nd34, [0] * 7, [1, 2, 3, 4, 5, 6, 7, 8])
    assert res.consistent and res.witness.is_zero()


def test_zero_two_probe_paper_point():
    alg, nd = algebra(0, 2), normalizer(0, 2)
    res = go_probe(alg, nd, [1, 0], [3, 4, 5, 0])
    assert not res.consistent
    assert (res.rank_a, res.rank_ab) == (2, 3)


def test_zero_three_probe_paper_point():
    alg, nd = algebra(0, 3), normalizer(0, 3)
    res = go_probe(alg, nd, [1, 0, 0], [3, 4, 0, 0, 5, 0, 0, 0])
    assert not res.consistent
    assert (res.rank_a, res.rank_ab) == (5, 6)


def test_zero_two_generic_witness_formula():
    # away from y1^2+y2^2 = y3^2+y4^2 the witness has the exhibited
    # centralizer coefficient b1 = 2(y1y2 - y3y4)/(y1^2+y2^2-y3^2-y4^2)
    alg, nd = algebra(0, 2), normalizer(0, 2)

    def paper_basis(a, b1, b2, b3):
        return RatMatrix.from_rows(
            [
                [0, -2 * a + b3, -b2, b1],
                [2 * a - b3, 0, b1, b2],
                [-b2, b1, 0, 2 * a + b3],
                [b1, b2, -2 * a - b3, 0],
            ]
        )

    rng = random.Random(17)
    checked = 0
    for _ in range(40):
        y = [Fraction(rng.randint(-9, 9)) for _ in range(4)]
        den = y[0] ** 2 + y[1] ** 2 - y[2] ** 2 - y[3] ** 2
        if den == 0:
            continue
        res = go_probe(alg, nd, [1, 0], y)
        assert res.consistent
        # express the witness in the exhibited (a,b1,b2,b3) coordinates
        cols = [paper_basis(1, 0, 0, 0), paper_basis(0, 1, 0, 0), paper_basis(0, 0, 1, 0), paper_basis(0, 0, 0, 1)]
        mat = RatMatrix.from_columns([c.entries for c in cols])
        sol = solve_consistent(mat, res.witness.entries)
        assert sol is not None
        a_coef, b1, b2, b3 = sol
        assert a_coef == 0
        assert b1 == 2 * (y[0] * y[1] - y[2] * y[3]) / den
        assert b2 == -(y[0] ** 2 - y[1] ** 2 - y[2] ** 2 + y[3] ** 2) / den
        assert b3 == -2 * (y[0] * y[3] - y[1] * y[2]) / den
        checked += 1
    assert checked >= 25


def test_one_one_paper_convention_fixture():
    # the exhibited matrices for n_{1,1} (which contradict the exhibited
    # brackets; see the ledger) are replayed here verbatim: the probe at
    # Y = X1+X2+X3+X4 is inconsistent in that convention
    gens = (
        RatMatrix.from_rows([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]),
        RatMatrix.from_rows([[0, 0, 1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, -1, 0, 0]]),
    )
    mod = CliffordModule(Signature(1, 1), 4, DiagMetric((1, 1, -1, -1)), gens, 1, None)
    alg = assemble(mod)
    nd = build_normalizer(alg)
    assert (nd.dim_vv, nd.dim_centralizer) == (1, 3)
    res = go_probe(alg, nd, [1, 0], [1, 1, 1, 1])
    assert not res.consistent
    assert res.rank_ab == res.rank_a + 1


def test_witness_replay_exactness(n34, nd34):
    rng = random.Random(23)
    for label, z in N34_REPS:
        for _ in range(5):
            x = [Fraction(rng.randint(-50, 50), rng.randint(1, 50)) for _ in range(8)]
            res = go_probe(n34, nd34, z, x, restrict_to_vv=True)
            assert res.consistent
            assert res.replay_ok(n34, z, x)
            b = res.witness
            assert is_metric_skew(b, n34.eta_v)
            assert commutator(b, n34.j_of(list(z))).is_zero()
            assert b.apply(x) == n34.j_of(list(z)).apply(x)


def test_nr_implies_probes_consistent():
    # NR => GO: every sampled probe must be consistent on (1,2) and (0,1)
    rng = random.Random(29)
    for (r, s, mult) in [(1, 2, 1), (0, 1, 3)]:
        alg = build_algebra(r, s, mult)
        nd = build_normalizer(alg)
        for _ in range(100):
            z = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(alg.z_dim)]
            x = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(alg.v_dim)]
            ctx = GoContext(alg, nd, z)
            assert ctx.consistent(x), (r, s, z, x)


def test_isotropy_equivalence_of_probes():
    # probe(Z, X) consistent iff probe(Z, QX) for rational Q = exp-like
    # rotations built from N^Z members with square -Id or +Id
    alg, nd = algebra(2, 1), normalizer(2, 1)
    z = [1, 0, 0]
    ctx = GoContext(alg, nd, z)
    rotations = []
    ident = RatMatrix.identity(alg.v_dim)
    for b in ctx.nz_basis:
        sq = b @ b
        if sq == ident.scale(-1):
            rotations.append(ident.scale(Fraction(3, 5)) + b.scale(Fraction(4, 5)))
        elif sq == ident:
            rotations.append(ident.scale(Fraction(5, 4)) + b.scale(Fraction(3, 4)))
    assert rotations
    rng = random.Random(31)
    jz = alg.j_of(z)
    tested = 0
    for _ in range(40):
        x = [Fraction(rng.randint(-3, 3)) for _ in range(alg.v_dim)]
        before = ctx.consistent(x)
        for q in rotations:
            assert commutator(q, jz).is_zero()
            assert ctx.consistent(q.apply(x)) == before
        tested += 1
    assert tested == 40


# ---------------------------------------------------------------------------
# counterexample search
# ---------------------------------------------------------------------------


def test_search_vector_order_deterministic():
    first = list(search_vectors(3, 2, 2))[:10]
    second = list(search_vectors(3, 2, 2))[:10]
    assert first == second
    assert first[0] == [1, 0, 0]


def test_search_finds_counterexamples_small_cases():
    for (r, s) in [(1, 1), (0, 2), (2, 1), (0, 3)]:
        ce = counterexample_search(algebra(r, s), normalizer(r, s), height=5)
        assert ce is not None
        assert ce.rank_ab == ce.rank_a + 1
        assert probe_rank_gap_holds(algebra(r, s), normalizer(r, s), list(ce.z), list(ce.x), ce.rank_a, ce.rank_ab)


def test_search_two_one_height_one():
    ce = counterexample_search(algebra(2, 1), normalizer(2, 1), height=1)
    assert ce is not None
    assert max(abs(c) for c in ce.x) == 1
    assert sum(1 for c in ce.x if c) == 2  # a V_i + V_j class vector


def test_search_finds_nothing_on_nr_case():
    assert counterexample_search(algebra(1, 2), normalizer(1, 2), height=2) is None


# ---------------------------------------------------------------------------
# the strong condition and classification
# ---------------------------------------------------------------------------


def test_strong_condition_smoke():
    cert = strong_condition_n34(seed=5, probes_per_class=150)
    assert cert.verdict == "GOWitnessed"
    assert cert.evidence["witness_space"] == "[V,V]"
    assert len(cert.evidence["classes"]) == 3
    assert replay(cert)


def test_strong_condition_witness_coeff_keys():
    cert = strong_condition_n34(seed=5, probes_per_class=20)
    seen = set()
    for cls in cert.evidence["classes"]:
        for sample in cls["sample_witnesses"]:
            seen.update(sample["coeffs"])
    assert seen and all(k.startswith("x") for k in seen)


def test_witness_matrix_from_coeffs_roundtrip(n34, nd34):
    cert = strong_condition_n34(seed=5, probes_per_class=10)
    cls = cert.evidence["classes"][0]
    sample = cls["sample_witnesses"][0]
    from nilgo.linalg import parse_rat

    x = [parse_rat(c) for c in sample["x"]]
    z = [parse_rat(c) for c in cls["z"]]
    b = witness_matrix_from_coeffs(n34, nd34, sample["coeffs"])
    assert b.apply(x) == n34.j_of(z).apply(x)


def test_classify_examples():
    assert classify(3, 4, probes=100).verdict == "GOWitnessed"
    assert classify(0, 1).verdict == "NaturallyReductive"
    assert classify(1, 1).verdict == "NotGO"
    assert classify(1, 2).verdict == "NaturallyReductive"
    assert classify(2, 1).verdict == "NotGO"


def test_classify_undecided_with_zero_height():
    cert = classify(1, 1, height=0)
    assert cert.verdict == "Undecided"
    assert replay(cert)


def test_certificate_json_roundtrip():
    cert = classify(1, 1)
    text = cert.to_json()
    back = GOCertificate.from_json(text)
    assert back.to_json() == text
    assert replay(back)


def test_certificate_determinism():
    a = classify(3, 4, probes=60, seed=9).to_json()
    b = classify(3, 4, probes=60, seed=9).to_json()
    assert a == b


def test_replay_rejects_tampered_certificate():
    cert = classify(1, 1)
    ev = dict(cert.evidence)
    ev["rank_a"] = ev["rank_a"] + 1
    assert not replay(GOCertificate(cert.signature, 1, "NotGO", ev))
