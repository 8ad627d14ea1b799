"""Isotropy-relevant subalgebras of so(eta_v): V = J(z), [V,V], the
centralizer Z and normalizer N of V, and skew-symmetric derivations (C,A).

Convention note: the derivation pairs here satisfy [A, J_Z] = J_{C(Z)}
(the isotropy-algebra form).  The alternative form A J_Z - J_Z A =
J_{C^tau(Z)} that appears alongside it in the source material differs by
the sign of C (C is skew); the two are *not* silently reconciled -- the
Phi-derivation consistency test pins this module to the first form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .htype import HTypeAlgebra
from .linalg import (
    DiagMetric,
    Rat,
    RatMatrix,
    SpanTracker,
    as_fraction,
    commutator,
    is_metric_skew,
    ratnorm,
    solve_consistent,
    sparse_kernel,
)


class NotInNormalizer(ValueError):
    """[A, J_Z] left the span of V for some basis Z."""


@dataclass
class NormalizerData:
    """Bases inside so(eta_v): V, [V,V] (as products J_i J_j, i<j, so that
    [J_i, J_j] = 2 J_i J_j), the centralizer of V, and N = [V,V] + Z."""

    v_basis: list[RatMatrix]
    vv_basis: list[RatMatrix]
    vv_pairs: list[tuple[int, int]]
    centralizer_basis: list[RatMatrix]

    @property
    def n_basis(self) -> list[RatMatrix]:
        return self.vv_basis + self.centralizer_basis

    @property
    def dim_vv(self) -> int:
        return len(self.vv_basis)

    @property
    def dim_centralizer(self) -> int:
        return len(self.centralizer_basis)

    @property
    def dim_n(self) -> int:
        return len(self.vv_basis) + len(self.centralizer_basis)


@dataclass(frozen=True)
class SkewDerivation:
    """Pair (C, A) with C skew on z, A skew on v and [A, J_Z] = J_{C(Z)}."""

    c: RatMatrix
    a: RatMatrix

    def verify(self, alg: HTypeAlgebra) -> bool:
        if not is_metric_skew(self.c, alg.eta_z) or not is_metric_skew(self.a, alg.eta_v):
            return False
        for k in range(alg.z_dim):
            jk = alg.module.generators[k]
            jc = alg.module.j_of(self.c.column(k))
            if commutator(self.a, jk) != jc:
                return False
        return True

    def apply(self, z: list[Rat], x: list[Rat]) -> tuple[list[Rat], list[Rat]]:
        return self.c.apply(z), self.a.apply(x)


# ---------------------------------------------------------------------------
# skew coordinates: B skew w.r.t. eta  <=>  B_qp = -eta_p eta_q B_pq, B_pp = 0
# ---------------------------------------------------------------------------


def _skew_pairs(m: int) -> list[tuple[int, int]]:
    return [(p, q) for p in range(m) for q in range(p + 1, m)]


def skew_from_coords(coords: list[Rat], eta: DiagMetric) -> RatMatrix:
    m = eta.dim
    pairs = _skew_pairs(m)
    out = RatMatrix.zero(m, m)
    for (p, q), c in zip(pairs, coords):
        if c:
            out.entries[p * m + q] = c
            out.entries[q * m + p] = ratnorm(-eta.signs[p] * eta.signs[q] * c)
    return out


def _gen_entry_maps(gens: list[RatMatrix]) -> list[tuple[dict[int, list], dict[int, list]]]:
    """For each signed-permutation-sparse generator, the nonzero entries by
    row and by column: row -> [(col, val)], col -> [(row, val)]."""
    out = []
    for g in gens:
        by_row: dict[int, list] = {}
        by_col: dict[int, list] = {}
        m = g.rows
        for i in range(m):
            for j in range(m):
                v = g[i, j]
                if v:
                    by_row.setdefault(i, []).append((j, v))
                    by_col.setdefault(j, []).append((i, v))
        out.append((by_row, by_col))
    return out


def _commutation_rows(alg: HTypeAlgebra, var_of: dict[tuple[int, int], int]):
    """Sparse rows of [B, J_k]_{uv} as linear forms in the skew coordinates
    b_pq (p<q); yields (k, u, v, row_dict)."""
    m = alg.v_dim
    eta = alg.eta_v.signs
    gens = list(alg.module.generators)
    maps = _gen_entry_maps(gens)

    def coeff_add(row: dict[int, Rat], p: int, q: int, c):
        # entry B_pq expressed through the p<q coordinates
        if p == q or not c:
            return
        if p < q:
            idx = var_of[(p, q)]
            row[idx] = row.get(idx, 0) + c
        else:
            idx = var_of[(q, p)]
            row[idx] = row.get(idx, 0) - eta[p] * eta[q] * c

    for k in range(alg.z_dim):
        by_row, by_col = maps[k]
        for u in range(m):
            for v in range(m):
                row: dict[int, Rat] = {}
                # (B J_k)_{uv} = sum_t B_ut (J_k)_{tv}
                for (t, val) in by_col.get(v, []):
                    coeff_add(row, u, t, val)
                # -(J_k B)_{uv} = -sum_t (J_k)_{ut} B_tv
                for (t, val) in by_row.get(u, []):
                    coeff_add(row, t, v, -val)
                yield k, u, v, row


def centralizer_basis(alg: HTypeAlgebra) -> list[RatMatrix]:
    """Exact kernel of {B skew, [B, J_k] = 0 for all k}."""
    m = alg.v_dim
    pairs = _skew_pairs(m)
    var_of = {pq: i for i, pq in enumerate(pairs)}
    rows = [row for (_, _, _, row) in _commutation_rows(alg, var_of) if row]
    kern = sparse_kernel(rows, len(pairs))
    return [skew_from_coords(vec, alg.eta_v) for vec in kern]


def full_normalizer_basis(alg: HTypeAlgebra) -> list[RatMatrix]:
    """Exact kernel of {B skew, [B, J_k] in span(V) for all k}, via slack
    coefficients for the V-components."""
    m = alg.v_dim
    n = alg.z_dim
    pairs = _skew_pairs(m)
    var_of = {pq: i for i, pq in enumerate(pairs)}
    nb = len(pairs)
    gens = list(alg.module.generators)
    rows = []
    for k, u, v, row in _commutation_rows(alg, var_of):
        row = dict(row)
        for i in range(n):
            gv = gens[i][u, v]
            if gv:
                row[nb + k * n + i] = row.get(nb + k * n + i, 0) - gv
        if row:
            rows.append(row)
    kern = sparse_kernel(rows, nb + n * n)
    out = []
    seen = SpanTracker(m * m)
    for vec in kern:
        bmat = skew_from_coords(vec[:nb], alg.eta_v)
        if not bmat.is_zero() and seen.add(bmat.entries):
            out.append(bmat)
    return out


def build_normalizer(alg: HTypeAlgebra) -> NormalizerData:
    """V, [V,V], centralizer, and N = [V,V] (+) Z, with the direct-sum and
    normalizing properties asserted."""
    gens = list(alg.module.generators)
    n = alg.z_dim
    vv = []
    vv_pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            vv.append(gens[i] @ gens[j])
            vv_pairs.append((i, j))
    cent = centralizer_basis(alg)
    data = NormalizerData(gens, vv, vv_pairs, cent)

    tracker = SpanTracker(alg.v_dim**2)
    for b in vv:
        if not tracker.add(b.entries):
            raise AssertionError("[V,V] products are linearly dependent")
    for b in cent:
        if not tracker.add(b.entries):
            raise AssertionError("centralizer meets [V,V] nontrivially")
    vtr = SpanTracker(alg.v_dim**2)
    for g in gens:
        vtr.add(g.entries)
    for b in data.n_basis:
        if not is_metric_skew(b, alg.eta_v):
            raise AssertionError("normalizer member is not skew")
        for g in gens:
            if not vtr.contains(commutator(b, g).entries):
                raise AssertionError("normalizer member does not normalize V")
    if data.dim_n < n * (n - 1) // 2:
        raise AssertionError("dim N below (r+s)(r+s-1)/2")
    return data


# ---------------------------------------------------------------------------
# recovering C and the Phi derivations
# ---------------------------------------------------------------------------


def recover_c(a: RatMatrix, alg: HTypeAlgebra) -> RatMatrix:
    """C with [A, J_Z] = J_{C(Z)} for every basis Z; raises NotInNormalizer
    when some [A, J_k] leaves span(V)."""
    if not is_metric_skew(a, alg.eta_v):
        raise ValueError("A must be skew w.r.t. eta_v")
    n = alg.z_dim
    vmat = RatMatrix.from_columns([g.entries for g in alg.module.generators])
    cols = []
    for k in range(n):
        target = commutator(a, alg.module.generators[k])
        sol = solve_consistent(vmat, target.entries)
        if sol is None:
            raise NotInNormalizer(f"[A, J_{k + 1}] is not in span(V)")
        cols.append(sol)
    c = RatMatrix.from_columns(cols)
    if not is_metric_skew(c, alg.eta_z):
        raise AssertionError("recovered C is not skew w.r.t. eta_z")
    return c


def phi_derivation(alg: HTypeAlgebra, z1: list[Rat], z2: list[Rat]) -> SkewDerivation:
    """The derivation X+Z -> J_{Z1}J_{Z2} X + 2<Z1,Z>Z2 - 2<Z2,Z>Z1 for
    orthogonal center vectors."""
    if alg.eta_z.inner(z1, z2) != 0:
        raise ValueError("phi derivation needs orthogonal center vectors")
    a = alg.j_of(z1) @ alg.j_of(z2)
    n = alg.z_dim
    eps = alg.eta_z.signs
    cols = []
    for k in range(n):
        # C(Z_k) = 2(<Z1, Z_k> Z2 - <Z2, Z_k> Z1)
        ip1 = eps[k] * z1[k]
        ip2 = eps[k] * z2[k]
        cols.append([ratnorm(2 * (ip1 * z2[t] - ip2 * z1[t])) for t in range(n)])
    d = SkewDerivation(RatMatrix.from_columns(cols), a)
    if not d.verify(alg):
        raise AssertionError("phi derivation failed the (C,A) identity")
    return d


def derivation_property_holds(alg: HTypeAlgebra, d: SkewDerivation) -> bool:
    """D[X,Y] = [DX,Y] + [X,DY] on all v-basis pairs (z-part of the identity;
    the other components vanish for 2-step algebras)."""
    m = alg.v_dim
    for i in range(m):
        ei = [1 if t == i else 0 for t in range(m)]
        dei = d.a.apply(ei)
        for j in range(m):
            ej = [1 if t == j else 0 for t in range(m)]
            lhs = d.c.apply(list(alg.bracket_basis(i, j)))
            rhs1 = alg.bracket(dei, ej)
            rhs2 = alg.bracket(ei, d.a.apply(ej))
            if any(ratnorm(a) != ratnorm(b + c) for a, b, c in zip(lhs, rhs1, rhs2)):
                return False
    return True


def volume_commutation_check(alg: HTypeAlgebra, nd: NormalizerData | None = None) -> bool:
    """For r+s = 0 mod 4: every A in the isotropy algebra commutes with
    J_omega = J_1 ... J_n."""
    from .clifford import volume_element

    sig = alg.signature
    if sig.n % 4 != 0:
        raise ValueError("volume commutation check needs r+s = 0 mod 4")
    jw, _ = volume_element(alg.module)
    if nd is None:
        nd = build_normalizer(alg)
    return all(commutator(b, jw).is_zero() for b in nd.n_basis)
