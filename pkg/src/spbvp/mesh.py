"""Layer-adapted mesh with a smooth generating function.

The mesh concentrates nodes in the two boundary layers.  Its left half is the
image of the uniform grid under a C^1 generating function phi: a straight
segment of slope lam/q up to t = q, blended into a cubic that reaches 1/2 at
t = 1/2 with matching slope at the join:

    phi(t) = (lam/q) t                    for t in [0, q]
    phi(t) = (lam/q) t + p (t - q)^3      for t in [q, 1/2]
    phi(t) = 1 - phi(1 - t)               for t in [1/2, 1]

with p = (1 - lam/q) / (2 (1/2 - q)^3) so that phi(1/2) = 1/2.  The transition
point lam = min{sigma eps ln N / sqrt(m), q} collapses to q for large eps; in
that degenerate case the mesh is uniform.

For the default q = 1/4 the derivative bounds ||phi'|| <= 6 and ||phi''|| <= 48
give the step bounds h_i <= 6/N and |h_{i+1} - h_i| <= 48/N^2.

Node symmetry x_i + x_{N-i} = 1 holds exactly (not merely to rounding) because
the right half is constructed by mirroring the left half.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

__all__ = [
    "MeshParams",
    "Mesh",
    "MeshDiagnostics",
    "transition_point",
    "generating_function",
    "generate_mesh",
    "mesh_diagnostics",
]


@dataclass(frozen=True)
class MeshParams:
    """Parameters of the layer-adapted mesh.

    N must be divisible by 4 and q*N must be an integer so that the transition
    point and the midpoint land exactly on mesh nodes.
    """

    N: int
    epsilon: float
    m: float = 1.0
    sigma: float = 2.0
    q: float = 0.25

    def __post_init__(self):
        if self.N < 4 or self.N % 4 != 0:
            raise ValueError(f"N must be a multiple of 4 and >= 4, got {self.N}")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.m <= 0.0:
            raise ValueError(f"m must be positive, got {self.m}")
        if self.sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not 0.0 < self.q < 0.5:
            raise ValueError(f"q must lie in (0, 1/2), got {self.q}")
        qN = self.q * self.N
        if abs(qN - round(qN)) > 1e-9:
            raise ValueError(f"q*N must be an integer, got q*N = {qN}")


def transition_point(params: MeshParams) -> Tuple[float, bool]:
    """Transition point lam and a degeneracy flag.

    lam = min{sigma * eps * ln N / sqrt(m), q}.  The mesh is degenerate
    (uniform) when the layer width estimate reaches q.
    """
    width = params.sigma * params.epsilon * math.log(params.N) / math.sqrt(params.m)
    if width >= params.q:
        return params.q, True
    return width, False


def _cubic_coefficient(lam: float, q: float) -> float:
    return 0.5 * (1.0 - lam / q) / (0.5 - q) ** 3


def generating_function(t: float, lam: float, q: float = 0.25) -> float:
    """Evaluate the mesh generating function phi at t in [0, 1].

    Requires 0 < lam < q (non-degenerate transition point).  phi is C^1:
    both branches have slope lam/q at t = q, and phi(1/2) = 1/2 makes the
    mirrored half join smoothly.
    """
    if not 0.0 < q < 0.5:
        raise ValueError(f"q must lie in (0, 1/2), got {q}")
    if not 0.0 < lam < q:
        raise ValueError(f"lam must lie in (0, q) = (0, {q}), got {lam}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")

    p = _cubic_coefficient(lam, q)

    def left_half(s: float) -> float:
        value = (lam / q) * s
        if s > q:
            value += p * (s - q) ** 3
        return value

    if t <= 0.5:
        return left_half(t)
    return 1.0 - left_half(1.0 - t)


@dataclass(frozen=True)
class Mesh:
    """Generated mesh: N+1 nodes on [0, 1] plus the N interval lengths."""

    nodes: np.ndarray
    lam: float
    degenerate: bool
    params: MeshParams
    h: np.ndarray

    @property
    def N(self) -> int:
        return self.params.N


def generate_mesh(params: MeshParams) -> Mesh:
    """Build the mesh for the given parameters.

    The left half comes from the generating function (or a uniform grid in the
    degenerate case); the right half mirrors it, which enforces the symmetry
    x_i + x_{N-i} = 1 exactly.  The midpoint is pinned to 1/2 (phi(1/2) = 1/2
    analytically; pinning removes the last rounding wobble).
    """
    N = params.N
    lam, degenerate = transition_point(params)
    nodes = np.empty(N + 1, dtype=float)
    half = N // 2
    if degenerate:
        for i in range(half + 1):
            nodes[i] = i / N
    else:
        for i in range(half + 1):
            nodes[i] = generating_function(i / N, lam, params.q)
    nodes[half] = 0.5
    nodes[0] = 0.0
    for i in range(half):
        nodes[N - i] = 1.0 - nodes[i]
    return Mesh(nodes=nodes, lam=lam, degenerate=degenerate, params=params,
                h=np.diff(nodes))


@dataclass(frozen=True)
class MeshDiagnostics:
    """Step-size statistics used by the property checks."""

    max_h: float
    max_step_change: float
    h_monotone: bool
    symmetry_defect: float


#: Relative slack used by the monotonicity diagnostic: the layer part of the
#: mesh has analytically constant steps whose floating-point images may wobble
#: by an ulp or two.
_MONOTONE_SLACK = 1e-12


def mesh_diagnostics(mesh: Mesh) -> MeshDiagnostics:
    """Measure step bounds, step monotonicity towards 1/2, and node symmetry."""
    h = mesh.h
    N = mesh.N
    half = N // 2
    max_h = float(h.max())
    max_step_change = float(np.abs(np.diff(h)).max()) if N > 1 else 0.0
    slack = _MONOTONE_SLACK * max_h
    left = h[:half]
    right = h[half:]
    monotone = bool(
        np.all(np.diff(left) >= -slack) and np.all(np.diff(right) <= slack)
    )
    symmetry_defect = float(
        np.abs(mesh.nodes + mesh.nodes[::-1] - 1.0).max()
    )
    return MeshDiagnostics(
        max_h=max_h,
        max_step_change=max_step_change,
        h_monotone=monotone,
        symmetry_defect=symmetry_defect,
    )
