"""Executable non-GO obstructions: totally geodesic splittings, the volume
element eigenspace contradiction, involution contradictions, periodicity
embeddings, and reduction chains ending in a small refuted core.

A splitting (z1, v1) with J_{z1}(v1) in v1 and J_{z2}(v1) in the complement
generates a totally geodesic subgroup; non-GO propagates upward, so every
chain link only needs the two inclusion checks plus a refuted core.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .clifford import CliffordModule, PERIODS, Signature, build_minimal_module, dim_minimal, tensor_periodicity, volume_element
from .htype import HTypeAlgebra, assemble
from .isometry import build_normalizer
from .linalg import DiagMetric, RatMatrix, format_rat, kernel_basis, parse_rat, rank
from .goprop import (
    Counterexample,
    GoContext,
    counterexample_search,
    naturally_reductive_check,
)


class InapplicableObstruction(ValueError):
    """The obstruction's precondition does not hold for this signature."""


@dataclass(frozen=True)
class Splitting:
    """Index-set splitting: center indices z1 (complement z2) and module
    basis indices v1 (complement v2), all 0-based."""

    z1_idx: tuple[int, ...]
    v1_idx: tuple[int, ...]

    def z2_idx(self, n: int) -> tuple[int, ...]:
        inz = set(self.z1_idx)
        return tuple(k for k in range(n) if k not in inz)

    def v2_idx(self, m: int) -> tuple[int, ...]:
        inv = set(self.v1_idx)
        return tuple(k for k in range(m) if k not in inv)


def _maps_into(g: RatMatrix, src: Sequence[int], dst: set[int]) -> bool:
    for q in src:
        for i in range(g.rows):
            if g[i, q] and i not in dst:
                return False
    return True


def totally_geodesic_check(alg: HTypeAlgebra, sp: Splitting) -> HTypeAlgebra | None:
    """J_Z(v1) in v1 for Z in z1 and J_Z(v1) in v2 for Z in z2; on success
    the induced subalgebra on z1 (+) v1 (positives reordered first)."""
    n, m = alg.z_dim, alg.v_dim
    v1 = list(sp.v1_idx)
    v1set = set(v1)
    v2set = set(sp.v2_idx(m))
    gens = alg.module.generators
    for k in sp.z1_idx:
        if not _maps_into(gens[k], v1, v1set):
            return None
    for k in sp.z2_idx(n):
        if not _maps_into(gens[k], v1, v2set):
            return None
    return _sub_algebra(alg, sp)


def _sub_algebra(alg: HTypeAlgebra, sp: Splitting) -> HTypeAlgebra:
    pos = [k for k in sp.z1_idx if alg.eta_z.signs[k] == 1]
    neg = [k for k in sp.z1_idx if alg.eta_z.signs[k] == -1]
    order = pos + neg
    v1 = list(sp.v1_idx)
    pos_of = {q: t for t, q in enumerate(v1)}
    sub_gens = []
    for k in order:
        g = alg.module.generators[k]
        out = RatMatrix.zero(len(v1), len(v1))
        for t, q in enumerate(v1):
            for i in range(alg.v_dim):
                c = g[i, q]
                if c:
                    out.entries[pos_of[i] * len(v1) + t] = c
        sub_gens.append(out)
    sig = Signature(len(pos), len(neg))
    eta_v = DiagMetric(tuple(alg.eta_v.signs[q] for q in v1))
    mdim = dim_minimal(sig.r, sig.s)
    mult = max(1, len(v1) // mdim)
    mod = CliffordModule(sig, len(v1), eta_v, tuple(sub_gens), mult, None)
    # light invariant check: squares, anticommutation, skewness
    ident = RatMatrix.identity(len(v1))
    for i, g in enumerate(sub_gens):
        if g @ g != ident.scale(-sig.eps(i)):
            raise AssertionError("restricted generator square is wrong")
        from .linalg import is_metric_skew

        if not is_metric_skew(g, eta_v):
            raise AssertionError("restricted generator is not skew")
        for j in range(i + 1, len(sub_gens)):
            h = sub_gens[j]
            if not ((g @ h) + (h @ g)).is_zero():
                raise AssertionError("restricted generators do not anticommute")
    return assemble(mod)


# ---------------------------------------------------------------------------
# splitting discovery (signed-permutation orbit search)
# ---------------------------------------------------------------------------


def _orbit_partition(alg: HTypeAlgebra, dirs: Sequence[int]) -> list[tuple[int, ...]]:
    """Orbits of the module basis indices under the signed permutations of
    the given center directions (they partition the index set)."""
    m = alg.v_dim
    gens = alg.module.generators
    images: list[list[int]] = [[] for _ in range(m)]
    for k in dirs:
        g = gens[k]
        for q in range(m):
            for i in range(m):
                if g[i, q]:
                    images[q].append(i)
                    break
    seen = [False] * m
    out = []
    for start in range(m):
        if seen[start]:
            continue
        orbit = {start}
        frontier = [start]
        seen[start] = True
        while frontier:
            q = frontier.pop()
            for i in images[q]:
                if not seen[i]:
                    seen[i] = True
                    orbit.add(i)
                    frontier.append(i)
        out.append(tuple(sorted(orbit)))
    return out


def pair_splittings(alg: HTypeAlgebra) -> list[tuple[Splitting, HTypeAlgebra]]:
    """All valid two-direction splittings with v1 an orbit class of the pair."""
    out = []
    n = alg.z_dim
    for a in range(n):
        for b in range(a + 1, n):
            for v1 in _orbit_partition(alg, (a, b)):
                if len(v1) >= alg.v_dim:
                    continue
                sp = Splitting((a, b), v1)
                sub = totally_geodesic_check(alg, sp)
                if sub is not None:
                    out.append((sp, sub))
    return out


def drop_splittings(alg: HTypeAlgebra) -> list[tuple[Splitting, HTypeAlgebra]]:
    """Single-direction drops (r,s) -> (r,s-1) or (r-1,s) where some orbit
    class of the remaining directions is a proper invariant subspace."""
    out = []
    n = alg.z_dim
    candidates = [n - 1, alg.signature.r - 1] if alg.signature.r >= 1 else [n - 1]
    candidates += [d for d in range(n - 1, -1, -1) if d not in candidates]
    for d in candidates:
        if d < 0 or d >= n:
            continue
        keep = tuple(k for k in range(n) if k != d)
        if not keep:
            continue
        for v1 in _orbit_partition(alg, keep):
            if len(v1) >= alg.v_dim:
                continue
            sp = Splitting(keep, v1)
            sub = totally_geodesic_check(alg, sp)
            if sub is not None:
                out.append((sp, sub))
    return out


# ---------------------------------------------------------------------------
# the volume-element obstruction (r+s = 0 mod 4)
# ---------------------------------------------------------------------------


def _eigenspace_basis(j: RatMatrix, eigenvalue: int) -> list[list]:
    return kernel_basis(j - RatMatrix.identity(j.rows).scale(eigenvalue))


def volume_obstruction_evidence(alg: HTypeAlgebra, include_odd: bool = True) -> dict | None:
    """Inconsistent probe with X in the +1 eigenspace of the (truncated)
    volume element; None when the precondition fails.

    Even variant (s even): omega = J_1...J_n squares to +Id, every isotropy
    A commutes with J_omega but J_{Z_1} swaps the eigenspaces.  Odd variant
    (s odd): same with the volume element of the first n-1 directions and
    Z the last (negative) direction."""
    sig = alg.signature
    if sig.n % 4 != 0:
        return None
    if sig.s % 2 == 0:
        jw, w2 = volume_element(alg.module)
        if w2 != 1:
            raise AssertionError("volume element must square to +1 here")
        z = [1] + [0] * (sig.n - 1)
        variant = "even"
    else:
        if not include_odd:
            return None
        jw = RatMatrix.identity(alg.v_dim)
        for g in alg.module.generators[: sig.n - 1]:
            jw = jw @ g
        if (jw @ jw) != RatMatrix.identity(alg.v_dim):
            raise AssertionError("truncated volume element must square to +Id")
        z = [0] * (sig.n - 1) + [1]
        variant = "odd"
    plus = _eigenspace_basis(jw, 1)
    if not plus:
        raise AssertionError("volume +1 eigenspace is trivial")
    x = plus[0]
    jz = alg.j_of(z)
    jzx = jz.apply(x)
    if jw.apply(jzx) != [-t for t in jzx]:
        raise AssertionError("J_Z X should land in the -1 eigenspace")
    nd = build_normalizer(alg)
    ctx = GoContext(alg, nd, z)
    ra, rab = ctx.probe_ranks(x)
    if ra == rab:
        raise AssertionError("volume obstruction probe unexpectedly consistent")
    # the structural half of the contradiction: the admissible isotropy
    # directions commute with J_omega, so they preserve its eigenspaces
    # (the whole normalizer in the even case, the Z-commuting part in the
    # odd case, where J_i J_n members swap the truncated eigenspaces)
    from .linalg import commutator

    commuting = nd.n_basis if variant == "even" else ctx.nz_basis
    for b in commuting:
        if not commutator(b, jw).is_zero():
            raise AssertionError("isotropy member does not commute with the volume element")
    return {
        "kind": "volume-element",
        "variant": variant,
        "omega_square": 1,
        "z": [format_rat(c) for c in z],
        "x": [format_rat(c) for c in x],
        "rank_a": ra,
        "rank_ab": rab,
    }


def volume_obstruction(alg: HTypeAlgebra) -> dict:
    """Spec surface for the even case; raises when inapplicable."""
    sig = alg.signature
    if sig.n % 4 != 0 or sig.s % 2 != 0:
        raise InapplicableObstruction("needs r+s = 0 mod 4 and s even")
    ev = volume_obstruction_evidence(alg, include_odd=False)
    assert ev is not None
    return ev


# ---------------------------------------------------------------------------
# involution contradictions for (0, s>=4) and (r>=2, 1)
# ---------------------------------------------------------------------------


def involution_obstruction_evidence(alg: HTypeAlgebra) -> dict | None:
    sig = alg.signature
    if sig.r == 0 and sig.s >= 4:
        word = (0, 1, 2, 3)
        z = [1] + [0] * (sig.n - 1)
    elif sig.s == 1 and sig.r >= 3:
        word = (0, 1, 2)
        z = [0] * (sig.n - 1) + [1]
    elif sig.s == 1 and sig.r == 2:
        # no positive involution exists in Cl(R^{2,1}); the inconsistent
        # extension system at (Z_1, V_1 + V_5) plays the same role
        nd = build_normalizer(alg)
        z = [1, 0, 0]
        x = [1, 0, 0, 0, 1, 0, 0, 0]
        ctx = GoContext(alg, nd, z)
        ra, rab = ctx.probe_ranks(x)
        if ra == rab:
            raise AssertionError("the (2,1) extension system is unexpectedly consistent")
        return {
            "kind": "involution-contradiction",
            "involution": [],
            "z": [format_rat(c) for c in z],
            "x": [format_rat(c) for c in x],
            "rank_a": ra,
            "rank_ab": rab,
        }
    else:
        return None
    jp = RatMatrix.identity(alg.v_dim)
    for k in word:
        jp = jp @ alg.module.generators[k]
    fix = _eigenspace_basis(jp, 1)
    x = None
    for cand in fix:
        if alg.eta_v.norm2(cand) > 0:
            x = cand
            break
    if x is None:
        raise AssertionError("no positive-norm fixed vector for the involution")
    nd = build_normalizer(alg)
    ctx = GoContext(alg, nd, z)
    ra, rab = ctx.probe_ranks(x)
    if ra == rab:
        raise AssertionError("involution obstruction probe unexpectedly consistent")
    # norm bookkeeping of the contradiction: <J_Z X, J_Z X> < 0 is forced
    jzx = alg.j_of(z).apply(x)
    if not alg.eta_v.norm2(jzx) < 0:
        raise AssertionError("J_Z X should have negative norm")
    return {
        "kind": "involution-contradiction",
        "involution": [k + 1 for k in word],
        "z": [format_rat(c) for c in z],
        "x": [format_rat(c) for c in x],
        "rank_a": ra,
        "rank_ab": rab,
    }


def involution_obstruction(alg: HTypeAlgebra) -> dict:
    sig = alg.signature
    if not ((sig.r == 0 and sig.s >= 4) or (sig.s == 1 and sig.r >= 2)):
        raise InapplicableObstruction("needs (0, s>=4) or (r>=2, 1)")
    ev = involution_obstruction_evidence(alg)
    assert ev is not None
    return ev


# ---------------------------------------------------------------------------
# periodicity embeddings
# ---------------------------------------------------------------------------


def periodicity_embedding(a: CliffordModule, period: CliffordModule) -> tuple[HTypeAlgebra, Splitting, HTypeAlgebra]:
    """Tensor module for (r+mu, s+nu) with the totally geodesic copy of the
    first factor sitting over the period module's distinguished basis
    vector; returns (big algebra, splitting, induced subalgebra)."""
    if (period.signature.r, period.signature.s) not in PERIODS:
        raise ValueError("period factor must be one of the period signatures")
    big = assemble(tensor_periodicity(a, period))
    r, s = a.signature.r, a.signature.s
    mu = period.signature.r
    # center order in the tensor: a-positives, period-positives, a-negatives,
    # period-negatives
    z1 = tuple(range(r)) + tuple(range(r + mu, r + mu + s))
    v1 = tuple(i * period.module_dim for i in range(a.module_dim))
    sp = Splitting(z1, v1)
    sub = totally_geodesic_check(big, sp)
    if sub is None:
        raise AssertionError("periodicity splitting failed the inclusion checks")
    return big, sp, sub


def tensor_bracket_identities(a: HTypeAlgebra, period: HTypeAlgebra, big: HTypeAlgebra) -> bool:
    """The two product bracket identities, exhaustively over basis pairs:
    [u_i (x) v_k, u_j (x) v_k] = lambda_k ||v_k||^2 [u_i, u_j] on the first
    factor's center (lambda_k the volume eigenvalue of v_k), and
    [u_k (x) v_i, u_k (x) v_j] = ||u_k||^2 [v_i, v_j] on the period's."""
    da, dp = a.v_dim, period.v_dim
    jw, w2 = volume_element(period.module)
    if w2 != 1:
        return False
    lam = []
    for k in range(dp):
        col = jw.column(k)
        if col[k] not in (1, -1) or any(col[i] for i in range(dp) if i != k):
            return False  # volume element must act diagonally on this basis
        lam.append(col[k])
    r, s, mu = a.signature.r, a.signature.s, period.signature.r
    a_center = list(range(r)) + list(range(r + mu, r + mu + s))
    p_center = list(range(r, r + mu)) + list(range(r + mu + s, big.z_dim))
    pos_a = {t: u for u, t in enumerate(a_center)}
    pos_p = {t: u for u, t in enumerate(p_center)}
    for k in range(dp):
        nk = period.eta_v.signs[k]
        for i in range(da):
            for j in range(da):
                got = big.bracket_basis(i * dp + k, j * dp + k)
                want_a = a.bracket_basis(i, j)
                for t, c in enumerate(got):
                    want = lam[k] * nk * want_a[pos_a[t]] if t in pos_a else 0
                    if c != want:
                        return False
    for k in range(da):
        nk = a.eta_v.signs[k]
        for i in range(dp):
            for j in range(dp):
                got = big.bracket_basis(k * dp + i, k * dp + j)
                want_p = period.bracket_basis(i, j)
                for t, c in enumerate(got):
                    want = nk * want_p[pos_p[t]] if t in pos_p else 0
                    if c != want:
                        return False
    return True


# ---------------------------------------------------------------------------
# reduction chains
# ---------------------------------------------------------------------------


def _chain_refute(alg: HTypeAlgebra, height: int, budget: list[int]) -> dict | None:
    """Search for NotGO evidence by splitting and recursion; every link is
    re-verified by the totally geodesic inclusion checks at build time."""
    if budget[0] <= 0:
        return None
    budget[0] -= 1
    # leaf refutation on small cores
    if alg.z_dim <= 3 and alg.v_dim <= 8:
        nr = naturally_reductive_check(alg)
        if nr.is_naturally_reductive:
            return None
        nd = build_normalizer(alg)
        ce = counterexample_search(alg, nd, height=height)
        if ce is None:
            return None
        return {
            "kind": "counterexample",
            "z_class": ce.z_class,
            "z": [format_rat(c) for c in ce.z],
            "x": [format_rat(c) for c in ce.x],
            "rank_a": ce.rank_a,
            "rank_ab": ce.rank_ab,
            "search_height": height,
        }
    for sp, sub in pair_splittings(alg):
        core = _chain_refute(sub, height, budget)
        if core is not None:
            return _link(alg, sp, sub, core)
    for sp, sub in drop_splittings(alg):
        core = _chain_refute(sub, height, budget)
        if core is not None:
            return _link(alg, sp, sub, core)
    return None


def _link(alg: HTypeAlgebra, sp: Splitting, sub: HTypeAlgebra, core: dict) -> dict:
    return {
        "kind": "totally-geodesic-chain",
        "signature": [alg.signature.r, alg.signature.s],
        "z1_idx": list(sp.z1_idx),
        "v1_idx": list(sp.v1_idx),
        "sub_signature": [sub.signature.r, sub.signature.s],
        "core": core,
    }


def reduction_chain_evidence(alg: HTypeAlgebra, height: int = 5) -> dict | None:
    """NotGO evidence via a verified chain of totally geodesic splittings
    ending in a small inconsistent probe, or None."""
    if alg.z_dim <= 3:
        return None  # small cores are handled by the direct search
    ev = _chain_refute(alg, height, [400])
    if ev is not None and ev.get("kind") != "totally-geodesic-chain":
        return None
    return ev


def reduction_chain(r: int, s: int, height: int = 5) -> dict | None:
    from .htype import build_algebra

    return reduction_chain_evidence(build_algebra(r, s), height=height)


# ---------------------------------------------------------------------------
# replay
# ---------------------------------------------------------------------------


def replay_obstruction(alg: HTypeAlgebra, ev: dict) -> bool:
    kind = ev.get("kind")
    if kind == "volume-element":
        sig = alg.signature
        if sig.n % 4 != 0:
            return False
        if ev["variant"] == "even":
            jw, w2 = volume_element(alg.module)
            if w2 != 1:
                return False
        else:
            jw = RatMatrix.identity(alg.v_dim)
            for g in alg.module.generators[: sig.n - 1]:
                jw = jw @ g
        x = [parse_rat(c) for c in ev["x"]]
        z = [parse_rat(c) for c in ev["z"]]
        if jw.apply(x) != x:
            return False
        jzx = alg.j_of(z).apply(x)
        if jw.apply(jzx) != [-t for t in jzx]:
            return False
        nd = build_normalizer(alg)
        ra, rab = GoContext(alg, nd, z).probe_ranks(x)
        return (ra, rab) == (ev["rank_a"], ev["rank_ab"]) and rab == ra + 1
    if kind == "involution-contradiction":
        x = [parse_rat(c) for c in ev["x"]]
        z = [parse_rat(c) for c in ev["z"]]
        word = [k - 1 for k in ev["involution"]]
        if word:
            jp = RatMatrix.identity(alg.v_dim)
            for k in word:
                jp = jp @ alg.module.generators[k]
            if jp.apply(x) != x or not alg.eta_v.norm2(x) > 0:
                return False
        nd = build_normalizer(alg)
        ra, rab = GoContext(alg, nd, z).probe_ranks(x)
        return (ra, rab) == (ev["rank_a"], ev["rank_ab"]) and rab == ra + 1
    if kind == "totally-geodesic-chain":
        sp = Splitting(tuple(ev["z1_idx"]), tuple(ev["v1_idx"]))
        sub = totally_geodesic_check(alg, sp)
        if sub is None:
            return False
        if [sub.signature.r, sub.signature.s] != ev["sub_signature"]:
            return False
        return replay_obstruction(sub, ev["core"])
    if kind == "counterexample":
        from .goprop import probe_rank_gap_holds

        z = [parse_rat(c) for c in ev["z"]]
        x = [parse_rat(c) for c in ev["x"]]
        nd = build_normalizer(alg)
        return probe_rank_gap_holds(alg, nd, z, x, ev["rank_a"], ev["rank_ab"])
    return False
