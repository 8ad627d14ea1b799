"""Floating-point cross-check: geodesics versus one-parameter isometry
orbits.

Advisory only: exact certificates never depend on anything here.  The
curves are integrated from their closed forms; matrix exponentials use
scipy's scaling-and-squaring Pade implementation, running products carry
exp(s J) across composite Gauss-Legendre panels, and only the bracket
integrals need quadrature (the integrands are entire, so the composite
3-point rule converges at order 6)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .htype import HTypeAlgebra
from .isometry import SkewDerivation, recover_c
from .linalg import RatMatrix

GL_NODES = (0.1127016653792583, 0.5, 0.8872983346207417)  # 3-point Gauss-Legendre on [0,1]
GL_WEIGHTS = (5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0)


@dataclass
class GeodesicState:
    t: float
    z: np.ndarray
    x: np.ndarray

    def as_row(self) -> list[float]:
        return [self.t, *self.z.tolist(), *self.x.tolist()]


def _np_matrix(a: RatMatrix) -> np.ndarray:
    return np.array([[float(a[i, j]) for j in range(a.cols)] for i in range(a.rows)], dtype=float)


def _bracket_tensor(alg: HTypeAlgebra) -> np.ndarray:
    n, m = alg.z_dim, alg.v_dim
    t = np.zeros((n, m, m))
    for i in range(m):
        for j in range(m):
            for k, c in enumerate(alg.structure[i][j]):
                if c:
                    t[k, i, j] = float(c)
    return t


def _augmented_flow(a: np.ndarray, v0: np.ndarray, h: float) -> tuple[np.ndarray, list[np.ndarray]]:
    """exp(h*[[A, v0],[0,0]]) and its values at the quadrature nodes; the
    top-right column of exp(s*aug) is integral_0^s exp(uA) v0 du."""
    m = a.shape[0]
    aug = np.zeros((m + 1, m + 1))
    aug[:m, :m] = a
    aug[:m, m] = v0
    step = expm(aug * h)
    nodes = [expm(aug * (h * c)) for c in GL_NODES]
    return step, nodes


def geodesic(alg: HTypeAlgebra, zdot0, xdot0, t: float, steps: int) -> GeodesicState:
    """State at parameter t: x(t) = int exp(s J_zdot0) xdot0 ds and
    z(t) = t zdot0 + 1/2 int [x(s), xdot(s)] ds."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    states = trace(alg, zdot0, xdot0, t, steps, samples=1)
    return states[-1]


def trace(alg: HTypeAlgebra, zdot0, xdot0, t: float, steps: int, samples: int = 32) -> list[GeodesicState]:
    """Geodesic states at `samples` evenly spaced parameter values."""
    m = alg.v_dim
    j = _np_matrix(alg.j_of(list(zdot0)))
    x0 = np.array([float(c) for c in xdot0])
    z0 = np.array([float(c) for c in zdot0])
    bt = _bracket_tensor(alg)
    h = t / steps
    step, nodes = _augmented_flow(j, x0, h)
    sample_at = {round(k * steps / samples) for k in range(1, samples + 1)} if t else set()
    cur = np.eye(m + 1)
    zacc = np.zeros(alg.z_dim)
    out = [GeodesicState(0.0, z0 * 0.0, x0 * 0.0)]
    for k in range(steps):
        for c, w, nd in zip(GL_NODES, GL_WEIGHTS, nodes):
            loc = cur @ nd
            xs = loc[:m, m]
            xdots = loc[:m, :m] @ x0
            zacc = zacc + (0.5 * w * h) * np.einsum("kij,i,j->k", bt, xs, xdots)
        cur = cur @ step
        if (k + 1) in sample_at or k == steps - 1:
            s = (k + 1) * h
            out.append(GeodesicState(s, s * z0 + zacc.copy(), cur[:m, m].copy()))
    return out


def orbit(alg: HTypeAlgebra, d: SkewDerivation, vdot0, wdot0, t: float, steps: int, samples: int = 1) -> list[GeodesicState]:
    """Orbit of the one-parameter isometry group generated by (C, A) plus
    the group part: w(t) = int exp(sA) wdot0 ds,
    v(t) = int exp(sC) vdot0 + 1/2 [w(s), wdot(s)] ds."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    m = alg.v_dim
    n = alg.z_dim
    a = _np_matrix(d.a)
    c = _np_matrix(d.c)
    w0 = np.array([float(q) for q in wdot0])
    v0 = np.array([float(q) for q in vdot0])
    bt = _bracket_tensor(alg)
    h = t / steps
    step_a, nodes_a = _augmented_flow(a, w0, h)
    step_c, nodes_c = _augmented_flow(c, v0, h)
    sample_at = {round(k * steps / samples) for k in range(1, samples + 1)} if t else set()
    cur_a = np.eye(m + 1)
    cur_c = np.eye(n + 1)
    vacc = np.zeros(n)
    out = [GeodesicState(0.0, np.zeros(n), np.zeros(m))]
    for k in range(steps):
        for wgt, nd_a, nd_c in zip(GL_WEIGHTS, nodes_a, nodes_c):
            loc_a = cur_a @ nd_a
            ws = loc_a[:m, m]
            wdots = loc_a[:m, :m] @ w0
            vacc = vacc + (wgt * h) * (0.5 * np.einsum("kij,i,j->k", bt, ws, wdots))
        cur_c = cur_c @ step_c
        cur_a = cur_a @ step_a
        if (k + 1) in sample_at or k == steps - 1:
            s = (k + 1) * h
            out.append(GeodesicState(s, cur_c[:n, n] + vacc.copy(), cur_a[:m, m].copy()))
    return out


def compare(
    alg: HTypeAlgebra,
    z,
    x,
    b_witness: RatMatrix,
    t_end: float = 1.0,
    steps: int = 10_000,
    samples: int = 16,
) -> float:
    """Max sup-norm deviation between the geodesic with initial velocity
    (z, x) and the orbit of the isometry generated by the witness."""
    c = recover_c(b_witness, alg)
    d = SkewDerivation(c, b_witness)
    geo = trace(alg, z, x, t_end, steps, samples=samples)
    orb = orbit(alg, d, z, x, t_end, steps, samples=samples)
    dev = 0.0
    for g, o in zip(geo, orb):
        dev = max(dev, float(np.max(np.abs(g.z - o.z))), float(np.max(np.abs(g.x - o.x))))
    return dev


def csv_trace(states: list[GeodesicState]) -> str:
    rows = ["t," + ",".join(f"z{i+1}" for i in range(len(states[0].z))) + "," + ",".join(f"x{i+1}" for i in range(len(states[0].x)))]
    for st in states:
        rows.append(",".join(f"{v:.12g}" for v in st.as_row()))
    return "\n".join(rows) + "\n"
