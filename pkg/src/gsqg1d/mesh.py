"""Computational grids: power-graded, sinh-graded, and uniform meshes.

Nodes are indexed i = 0..n-1 with x_0 = 0; the nominal right endpoint is
not a node, so the truncation length of the grid is x_{n-1}.  Power meshes
x_i = L (i/n)^p concentrate nodes at the origin; sinh meshes
x_i = sinh(a i/n) resolve both the origin and an exponentially far field.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

MIN_NODES = 16


@dataclass(frozen=True)
class Mesh:
    nodes: np.ndarray        # strictly increasing, nodes[0] == 0
    kind: str                # "power", "sinh", or "uniform"
    kind_params: tuple       # constructor parameters, for provenance/refine

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < MIN_NODES:
            raise DomainError(f"mesh needs at least {MIN_NODES} nodes")
        if nodes[0] != 0.0 or not np.all(np.isfinite(nodes)):
            raise DomainError("mesh nodes must be finite with x_0 = 0")
        if np.any(np.diff(nodes) <= 0):
            raise DomainError("mesh nodes must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def length(self) -> float:
        return float(self.nodes[-1])

    def spacings(self) -> np.ndarray:
        return np.diff(self.nodes)


def power_mesh(length: float, n: int, p: float = 2.0) -> Mesh:
    """x_i = length * (i/n)^p for i = 0..n-1."""
    if not length > 0:
        raise DomainError("length must be positive")
    if not p >= 1:
        raise DomainError("power exponent must be >= 1")
    if n < MIN_NODES:
        raise DomainError(f"need n >= {MIN_NODES}")
    i = np.arange(n, dtype=float)
    return Mesh(length * (i / n) ** p, "power", (float(length), int(n), float(p)))


def sinh_mesh(a: float, n: int) -> Mesh:
    """x_i = sinh(a * i/n) for i = 0..n-1."""
    if not a > 0:
        raise DomainError("sinh parameter must be positive")
    if n < MIN_NODES:
        raise DomainError(f"need n >= {MIN_NODES}")
    i = np.arange(n, dtype=float)
    return Mesh(np.sinh(a * i / n), "sinh", (float(a), int(n)))


def uniform_mesh(length: float, n: int) -> Mesh:
    """x_i = length * i/n for i = 0..n-1."""
    return power_mesh(length, n, 1.0)


def mesh_from_nodes(nodes) -> Mesh:
    """Wrap externally supplied nodes (e.g. the x-column of a profile file)."""
    nodes = np.asarray(nodes, dtype=float)
    return Mesh(nodes, "custom", (int(nodes.size),))


def refine(mesh: Mesh, factor: int = 2) -> Mesh:
    """Same grading law with factor times as many nodes.

    Even-indexed nodes of refine(mesh, 2) coincide with the original nodes
    to machine precision, as required by refinement-stability checks.
    """
    if factor < 1 or int(factor) != factor:
        raise DomainError("refinement factor must be a positive integer")
    if mesh.kind == "power":
        length, n, p = mesh.kind_params
        return power_mesh(length, int(n) * factor, p)
    if mesh.kind == "sinh":
        a, n = mesh.kind_params
        return sinh_mesh(a, int(n) * factor)
    raise DomainError(f"cannot refine mesh of kind {mesh.kind!r}")
