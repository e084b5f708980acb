"""Parametrized ansatz construction.

Two variants:

* FULL_ZYZ — per layer, for qubit q = 0…n−1 in order: CNOT(p→q) for every
  p < q, then an Rz·Ry·Rz rotation block on q taking three fresh parameters
  (in circuit order).  Layers repeat the whole pattern with new parameters.
* REDUCED_2PARAM — single qubit only: |ψ(θ1, θ2)⟩ = Rz(θ1)·Ry(θ2)|0⟩, the
  two-parameter form used for the 2×2 landscape tables.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import InvalidVariant

FULL_ZYZ = "FULL_ZYZ"
REDUCED_2PARAM = "REDUCED_2PARAM"


@dataclass(frozen=True)
class GateOp:
    kind: str  # "RZ" | "RY" | "CNOT"
    target: int
    control: Optional[int] = None
    param_index: Optional[int] = None


@dataclass(frozen=True)
class AnsatzSpec:
    n_qubits: int
    layers: int
    variant: str
    gates: tuple[GateOp, ...]
    n_params: int


def default_layers(dim: int) -> int:
    """Smallest layer count observed to reach every eigenvector reliably.

    A single layer spans the 2×2 state space, but at 4×4 it cannot express
    all eigenvectors of a generic matrix (the reachable manifold is too
    thin), and at 8×8 two layers leave deep local minima that trap most
    restarts.  One extra layer at each size removes both failure modes.
    """
    if dim <= 2:
        return 1
    if dim <= 4:
        return 2
    return 3


def build_ansatz(n_qubits: int, layers: int = 1, variant: str = FULL_ZYZ) -> AnsatzSpec:
    if n_qubits < 1:
        raise InvalidVariant(f"n_qubits must be ≥ 1, got {n_qubits}")
    if layers < 1:
        raise InvalidVariant(f"layers must be ≥ 1, got {layers}")
    if variant == REDUCED_2PARAM:
        if n_qubits != 1:
            raise InvalidVariant("REDUCED_2PARAM is only defined for one qubit")
        gates = (
            GateOp("RY", target=0, param_index=1),
            GateOp("RZ", target=0, param_index=0),
        )
        return AnsatzSpec(1, 1, REDUCED_2PARAM, gates, 2)
    if variant != FULL_ZYZ:
        raise InvalidVariant(f"unknown variant {variant!r}")
    gates: list[GateOp] = []
    param = 0
    for _ in range(layers):
        for q in range(n_qubits):
            for p in range(q):
                gates.append(GateOp("CNOT", target=q, control=p))
            for kind in ("RZ", "RY", "RZ"):
                gates.append(GateOp(kind, target=q, param_index=param))
                param += 1
    return AnsatzSpec(n_qubits, layers, FULL_ZYZ, tuple(gates), param)
