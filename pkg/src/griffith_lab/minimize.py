"""Exact minimization of the discretized 1D energy by dynamic programming.

The discrete class: piecewise-affine functions on a uniform mesh with node
values on a finite grid and jumps permitted at interior nodes.  A jump at
node i sends the incoming value u(x_i-) to a post-jump value u(x_i+), paying
the surface cost, before the next affine element.  The DP alternates a
V x V jump layer with a V x V element layer, so the recursion is O(N V^2)
after the cost matrices are assembled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import InfeasibleGrid, SearchSpaceTooLarge
from .integrands import EnergyLedger, EnergySpec, eval_energy
from .piecewise import PiecewiseFn1D, jump_set
from .quadrature import QuadratureSpec, _panel_nodes, integrate_interval


@dataclass
class DiscreteModel:
    n_elements: int
    energy: EnergySpec
    v_min: float
    v_max: float
    n_values: int
    jump_permitted: Optional[Sequence[bool]] = None  # per interior node
    quad: QuadratureSpec = dc_field(default_factory=QuadratureSpec)

    def __post_init__(self):
        if self.n_elements < 1:
            raise ValueError("need at least one element")
        if self.n_values < 2:
            raise ValueError("need at least two value levels")
        if not self.v_min < self.v_max:
            raise ValueError("empty value range")
        n_interior = self.n_elements - 1
        if self.jump_permitted is None:
            self.jump_permitted = tuple(True for _ in range(n_interior))
        else:
            self.jump_permitted = tuple(bool(b) for b in self.jump_permitted)
            if len(self.jump_permitted) != n_interior:
                raise ValueError("jump_permitted must list every interior node")

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.v_min, self.v_max, self.n_values)

    @property
    def nodes(self) -> np.ndarray:
        lo, hi = self.energy.domain
        return np.linspace(lo, hi, self.n_elements + 1)

    def refined(self, factor: int = 2) -> "DiscreteModel":
        """Nested refinement: mesh doubled, value spacing halved."""
        return DiscreteModel(
            n_elements=self.n_elements * factor,
            energy=self.energy,
            v_min=self.v_min,
            v_max=self.v_max,
            n_values=(self.n_values - 1) * factor + 1,
            quad=self.quad,
        )


def _try_vectorized(fn, *args):
    try:
        out = np.asarray(fn(*args), dtype=float)
        if out.shape == np.broadcast(*[np.asarray(a) for a in args]).shape:
            return out
    except (TypeError, ValueError, IndexError):
        pass
    return None


def element_cost_matrix(model: DiscreteModel, i: int) -> np.ndarray:
    """E[c, b]: bulk plus confinement of the affine piece grid[c] -> grid[b]."""
    nodes = model.nodes
    a, b = float(nodes[i]), float(nodes[i + 1])
    xs, ws = _panel_nodes(a, b, model.quad)
    grid = model.grid
    start = grid[:, None]
    end = grid[None, :]
    slope = (end - start) / (b - a)
    V = model.n_values
    W = model.energy.W
    Psi = model.energy.Psi
    bulk = np.zeros((V, V))
    conf = np.zeros((V, V))
    for x, w in zip(xs, ws):
        wv = _try_vectorized(W, x, slope)
        if wv is None:
            wv = np.array([[float(W(x, slope[c, d])) for d in range(V)] for c in range(V)])
        bulk += w * wv
        uv = start + slope * (x - a)
        pv = _try_vectorized(Psi, np.abs(uv))
        if pv is None:
            pv = np.array([[float(Psi(abs(uv[c, d]))) for d in range(V)] for c in range(V)])
        conf += w * pv
    return bulk + conf


def jump_cost_matrix(model: DiscreteModel, node_index: int) -> np.ndarray:
    """J[a, c]: surface cost of jumping from grid[a] to grid[c] at the node.

    The diagonal is zero (no jump); forbidden nodes only keep the diagonal.
    """
    V = model.n_values
    x = float(model.nodes[node_index])
    J = np.full((V, V), np.inf)
    np.fill_diagonal(J, 0.0)
    if not model.jump_permitted[node_index - 1]:
        return J
    grid = model.grid
    pre = grid[:, None] * np.ones((1, V))
    post = np.ones((V, 1)) * grid[None, :]
    phi = model.energy.phi
    vals = _try_vectorized(lambda r, t: phi(x, r, t, 1.0), post, pre)
    if vals is None:
        vals = np.array(
            [[float(phi(x, grid[c], grid[a], 1.0)) for c in range(V)] for a in range(V)]
        )
    J = vals.copy()
    np.fill_diagonal(J, 0.0)
    return J


def _boundary_cost(model: DiscreteModel, which: str) -> np.ndarray:
    bc = model.energy.boundary
    if bc is None:
        return np.zeros(model.n_values)
    target = bc.value_lo if which == "lo" else bc.value_hi
    return bc.beta * (model.grid - target) ** 2


@dataclass
class MinimizerResult:
    total: float
    node_values: list  # (left_value, right_value) per node
    jump_nodes: list  # x-locations of the optimal jump set
    ledger: EnergyLedger
    reconstruction: PiecewiseFn1D
    griffith_bound: float
    bound_2_1: float
    degenerate_surface: bool

    def to_record(self) -> dict:
        return {
            "total": self.total,
            "jump_nodes": self.jump_nodes,
            "ledger": self.ledger.to_record(),
            "griffith_bound": self.griffith_bound,
            "bound_2_1": self.bound_2_1,
            "degenerate_surface": self.degenerate_surface,
        }


def minimize_dp(model: DiscreteModel) -> MinimizerResult:
    """Exact minimizer over the discrete class via the layered DP."""
    N, V = model.n_elements, model.n_values
    elements = [element_cost_matrix(model, i) for i in range(N)]
    jumps = {i: jump_cost_matrix(model, i) for i in range(1, N)}
    cost = _boundary_cost(model, "lo")
    jump_pred = {}
    elem_pred = []
    for i in range(N):
        if i > 0:
            M = cost[:, None] + jumps[i]
            # prefer staying (a == c) on ties, then the smaller predecessor
            pred = np.argmin(M, axis=0)
            best = M[pred, np.arange(V)]
            diag = np.diagonal(M)
            pred = np.where(diag == best, np.arange(V), pred)
            cost = best
            jump_pred[i] = pred
        M = cost[:, None] + elements[i]
        pred = np.argmin(M, axis=0)
        elem_pred.append(pred)
        cost = M[pred, np.arange(V)]
        if not np.any(np.isfinite(cost)):
            raise InfeasibleGrid(f"no finite transition across element {i}")
    cost = cost + _boundary_cost(model, "hi")
    final = int(np.argmin(cost))
    total = float(cost[final])
    if not math.isfinite(total):
        raise InfeasibleGrid("optimal energy is not finite")

    # backtrack: v[i] = u(x_i-) index, c[i] = u(x_i+) index
    left_idx = [0] * (N + 1)
    right_idx = [0] * (N + 1)
    left_idx[N] = right_idx[N] = final
    b = final
    for i in range(N - 1, -1, -1):
        c = int(elem_pred[i][b])
        right_idx[i] = c
        a = int(jump_pred[i][c]) if i > 0 else c
        left_idx[i] = a
        b = a
    grid = model.grid
    nodes = model.nodes
    node_values = [(float(grid[left_idx[i]]), float(grid[right_idx[i]])) for i in range(N + 1)]
    jump_nodes = [float(nodes[i]) for i in range(1, N) if left_idx[i] != right_idx[i]]

    pieces = []
    for i in range(N):
        v0 = grid[right_idx[i]]
        v1 = grid[left_idx[i + 1]]
        a, b2 = float(nodes[i]), float(nodes[i + 1])
        slope = (v1 - v0) / (b2 - a)
        pieces.append((np.array([v0 - slope * a, slope]),))
    reconstruction = PiecewiseFn1D(
        model.energy.domain, tuple(float(x) for x in nodes[1:-1]), tuple(pieces)
    )
    ledger = eval_energy(model.energy, reconstruction, model.quad)
    c_phi = model.energy.phi.strictly_positive_c or 0.0
    c_min = min(model.energy.c_W, c_phi)
    quantity = _bound_2_1(model, reconstruction)
    seminorm = quantity - _confinement_part(model, reconstruction)
    return MinimizerResult(
        total=total,
        node_values=node_values,
        jump_nodes=jump_nodes,
        ledger=ledger,
        reconstruction=reconstruction,
        griffith_bound=c_min * seminorm + _confinement_part(model, reconstruction),
        bound_2_1=quantity,
        degenerate_surface=not c_phi,
    )


def _confinement_part(model: DiscreteModel, u: PiecewiseFn1D) -> float:
    total = 0.0
    for k, (a, b) in enumerate(u.subintervals()):
        coeffs = u.pieces[k][0]
        total += integrate_interval(
            lambda x: model.energy.Psi(np.abs(P.polyval(x, coeffs))), a, b, model.quad
        )
    return total


def _bound_2_1(model: DiscreteModel, u: PiecewiseFn1D) -> float:
    """Compactness quantity: confinement + int |e(u)|^p + H^0(J_u)."""
    du = u.derivative()
    total = _confinement_part(model, u) + float(len(jump_set(u)))
    for k, (a, b) in enumerate(u.subintervals()):
        coeffs = du.pieces[k][0]
        total += integrate_interval(
            lambda x: np.abs(P.polyval(x, coeffs)) ** model.energy.p, a, b, model.quad
        )
    return total


def brute_force_oracle(model: DiscreteModel) -> dict:
    """Exhaustive enumeration over node values and jump indicator sets.

    Must match the DP energy bitwise: both accumulate boundary, jump and
    element costs left to right and minimize over the same candidate set.
    """
    N, V = model.n_elements, model.n_values
    space = V ** (N + 1) * 2**max(0, N - 1)
    if space > 10**7:
        raise SearchSpaceTooLarge(f"search space {space} exceeds 1e7")
    elements = [element_cost_matrix(model, i) for i in range(N)]
    jumps = {i: jump_cost_matrix(model, i) for i in range(1, N)}
    b_lo = _boundary_cost(model, "lo")
    b_hi = _boundary_cost(model, "hi")
    permitted = [i for i in range(1, N) if model.jump_permitted[i - 1]]

    configs = np.indices((V,) * (N + 1)).reshape(N + 1, -1)
    best_total = math.inf
    best = None
    for mask in range(2 ** len(permitted)):
        S = {node for k, node in enumerate(permitted) if (mask >> k) & 1}
        running = b_lo[configs[0]].copy()
        for i in range(N):
            if i > 0 and i in S:
                step = (running[:, None] + jumps[i][configs[i], :]) + elements[i][
                    :, configs[i + 1]
                ].T
                running = step.min(axis=1)
            else:
                running = running + elements[i][configs[i], configs[i + 1]]
        running = running + b_hi[configs[N]]
        k = int(np.argmin(running))
        if running[k] < best_total:
            best_total = float(running[k])
            best = (S, configs[:, k].copy())
    return {"total": best_total, "jump_set": sorted(best[0]), "values": best[1]}


@dataclass(frozen=True)
class RefinementRow:
    n_elements: int
    n_values: int
    ledger: EnergyLedger
    bound_2_1: float

    def to_tuple(self):
        rec = self.ledger
        return (
            self.n_elements,
            self.n_values,
            rec.bulk,
            rec.surface,
            rec.confinement,
            rec.boundary,
            rec.total,
            self.bound_2_1,
        )


def refinement_study(model: DiscreteModel, levels: int) -> list:
    """Totals along nested refinements plus the compactness-bound check.

    Energies must be non-increasing within 1e-9 (the discrete classes nest);
    every level's compactness quantity must stay below the computable bound
    M = total(level 0) / min(c_W, c_phi, 1) + 1.
    """
    if levels < 2:
        raise ValueError("need at least 2 levels")
    rows = []
    current = model
    for _ in range(levels):
        result = minimize_dp(current)
        rows.append(
            RefinementRow(
                current.n_elements, current.n_values, result.ledger, result.bound_2_1
            )
        )
        current = current.refined()
    totals = [r.ledger.total for r in rows]
    for t0, t1 in zip(totals[:-1], totals[1:]):
        if t1 > t0 + 1e-9:
            raise AssertionError(f"refinement increased the energy: {t0} -> {t1}")
    c_phi = model.energy.phi.strictly_positive_c or 0.0
    M = totals[0] / min(model.energy.c_W, c_phi if c_phi > 0 else 1.0, 1.0) + 1.0
    for row in rows:
        if row.bound_2_1 > M:
            raise AssertionError(
                f"compactness quantity {row.bound_2_1} exceeds the bound {M}"
            )
    return rows
