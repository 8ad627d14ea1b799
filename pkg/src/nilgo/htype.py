"""Pseudo H-type Lie algebras n = z (+) v assembled from a Clifford module.

The bracket lives in the center and is recovered from the representation by
<J_Z X, Y> = <[X,Y], Z>; with an orthonormal center basis the structure
constants are a_k(i,j) = eps_k * <J_k V_i, V_j>_v.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .clifford import CliffordModule, Signature, build_minimal_module
from .linalg import DiagMetric, RatMatrix, Rat, format_rat, is_metric_skew, rank, ratnorm


@dataclass(frozen=True)
class HTypeAlgebra:
    """2-step nilpotent algebra with center z = R^{r,s} and module v."""

    module: CliffordModule
    eta_z: DiagMetric
    # structure[i][j] = z-coordinates of [V_i, V_j]
    structure: tuple[tuple[tuple[Rat, ...], ...], ...]

    @property
    def signature(self) -> Signature:
        return self.module.signature

    @property
    def z_dim(self) -> int:
        return self.signature.n

    @property
    def v_dim(self) -> int:
        return self.module.module_dim

    @property
    def eta_v(self) -> DiagMetric:
        return self.module.eta_v

    def bracket_basis(self, i: int, j: int) -> tuple[Rat, ...]:
        return self.structure[i][j]

    def bracket(self, x, y) -> list[Rat]:
        """[x, y] in z-coordinates for v-vectors x, y."""
        out = [0] * self.z_dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self.structure[i]
            for j, yj in enumerate(y):
                if yj:
                    for k, c in enumerate(row[j]):
                        if c:
                            out[k] += xi * yj * c
        return [ratnorm(t) for t in out]

    def j_of(self, z) -> RatMatrix:
        return self.module.j_of(list(z))


def assemble(mod: CliffordModule) -> HTypeAlgebra:
    """Structure constants from the module; the defining identity
    <J_Z X, Y> = <[X,Y], Z> is re-verified on all basis triples."""
    sig = mod.signature
    m = mod.module_dim
    eta_v = mod.eta_v.signs
    eta_z = sig.eta_z()
    struct = []
    for i in range(m):
        row = []
        for j in range(m):
            coords = []
            for k in range(sig.n):
                jk = mod.generators[k]
                # a_k(i,j) = eps_k <J_k V_i, V_j>
                coords.append(ratnorm(sig.eps(k) * eta_v[j] * jk[j, i]))
            row.append(tuple(coords))
        struct.append(tuple(row))
    alg = HTypeAlgebra(mod, eta_z, tuple(struct))
    for k in range(sig.n):
        jk = mod.generators[k]
        for i in range(m):
            for j in range(m):
                lhs = eta_v[j] * jk[j, i]  # <J_k V_i, V_j>
                rhs = sig.eps(k) * struct[i][j][k]  # <[V_i,V_j], Z_k>
                if lhs != rhs:
                    raise AssertionError(f"defining identity fails at (i,j,k)=({i},{j},{k})")
    return alg


def build_algebra(r: int, s: int, multiplicity: int = 1) -> HTypeAlgebra:
    return assemble(build_minimal_module(Signature(r, s), multiplicity))


# ---------------------------------------------------------------------------
# admissibility verification
# ---------------------------------------------------------------------------


@dataclass
class AdmissibilityReport:
    passed: bool
    failures: list[str]

    def __bool__(self) -> bool:
        return self.passed


def random_rational(rng: random.Random, bound: int = 100) -> Fraction:
    num = rng.randint(-bound, bound)
    den = rng.randint(1, bound)
    return Fraction(num, den)


def random_vector(rng: random.Random, dim: int, bound: int = 100) -> list[Fraction]:
    return [random_rational(rng, bound) for _ in range(dim)]


def verify_admissibility(alg: HTypeAlgebra, samples: int = 100, seed: int = 0) -> AdmissibilityReport:
    """Checks J_Z^2 = -<Z,Z> Id (exhaustive on generator pairs via the
    anticommutator, plus random rational Z), skewness of every generator,
    and nonsingularity of the bracket; failures carry the witnessing tuple."""
    mod = alg.module
    sig = alg.signature
    m = mod.module_dim
    ident = RatMatrix.identity(m)
    failures: list[str] = []
    for i, g in enumerate(mod.generators):
        if not is_metric_skew(g, mod.eta_v):
            failures.append(f"J_{i + 1} is not skew-symmetric w.r.t. eta_v")
        sq = g @ g
        if sq != ident.scale(-sig.eps(i)):
            failures.append(f"J_{i + 1}^2 != {-sig.eps(i)} Id")
        for j in range(i + 1, sig.n):
            h = mod.generators[j]
            anti = (g @ h) + (h @ g)
            if not anti.is_zero():
                failures.append(f"J_{i + 1} J_{j + 1} + J_{j + 1} J_{i + 1} != 0")
    rng = random.Random(seed)
    for t in range(samples):
        z = random_vector(rng, sig.n, 20)
        jz = mod.j_of(z)
        zz = alg.eta_z.norm2(z)
        if (jz @ jz) != ident.scale(-zz):
            failures.append(f"J_Z^2 != -<Z,Z> Id at random Z #{t}: Z={[format_rat(c) for c in z]}")
            break
    # nonsingularity: ad_X surjective onto z for basis and random X
    basis_vecs = [[1 if q == i else 0 for q in range(m)] for i in range(m)]
    rng2 = random.Random(seed + 1)
    for t, x in enumerate(basis_vecs + [random_vector(rng2, m, 20) for _ in range(samples)]):
        rows = [mod.generators[k].apply(x) for k in range(sig.n)]
        if rank(RatMatrix.from_rows(rows)) != sig.n:
            failures.append(f"ad_X not surjective onto z at sample #{t}")
            break
    return AdmissibilityReport(not failures, failures)


# ---------------------------------------------------------------------------
# bracket table dump (layout mirrors a commutator table: V_i rows/columns,
# entries are signed center labels)
# ---------------------------------------------------------------------------


def _entry_label(coords: tuple[Rat, ...]) -> str:
    parts = []
    for k, c in enumerate(coords):
        if not c:
            continue
        name = f"Z{k + 1}"
        if c == 1:
            parts.append(("+" if parts else "") + name)
        elif c == -1:
            parts.append("-" + name)
        else:
            parts.append(("+" if parts and c > 0 else "") + f"{format_rat(c)}*{name}")
    return "".join(parts) if parts else "0"


def bracket_table(alg: HTypeAlgebra) -> list[list[str]]:
    m = alg.v_dim
    header = [""] + [f"V{j + 1}" for j in range(m)]
    rows = [header]
    for i in range(m):
        row = [f"V{i + 1}"]
        for j in range(m):
            row.append(_entry_label(alg.structure[i][j]))
        rows.append(row)
    return rows


def bracket_table_text(alg: HTypeAlgebra) -> str:
    table = bracket_table(alg)
    widths = [max(len(r[c]) for r in table) for c in range(len(table[0]))]
    lines = []
    for r in table:
        lines.append("  ".join(x.rjust(w) for x, w in zip(r, widths)))
    return "\n".join(lines) + "\n"
