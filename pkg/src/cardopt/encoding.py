"""Penalized QUBO and Ising encodings of fixed-cardinality selection.

Objective: (gamma-1)/2 * mu.x + (gamma+1)/2 * x.C.x subject to sum(x) = K,
enforced by adding Lambda * (sum(x) - K)^2.  Lambda = 2 * max_i I_i with
I_i = |q_i| + sum_{j != i} |Q_ij| evaluated on the *unpenalized* coefficients,
after folding the quadratic diagonal into the linear term (x_i^2 = x_i), so
the penalty is independent of the diagonal convention.

Convention used throughout: ``q_matrix`` is symmetric with a zero diagonal;
all diagonal contributions live in ``q_linear``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class ProblemSpec:
    """Selection instance: expected returns, covariance, trade-off gamma in
    [-1, 1], and target cardinality.  ``index_map`` tracks the global asset
    index of each local variable (identity when None)."""

    mu: np.ndarray
    cov: np.ndarray
    gamma: float
    k_card: int
    index_map: np.ndarray | None = None

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float)
        cov = np.asarray(self.cov, dtype=float)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "cov", cov)
        n = len(mu)
        if cov.shape != (n, n):
            raise DataError("cov shape does not match mu")
        if not np.allclose(cov, cov.T, atol=1e-8):
            raise DataError("cov must be symmetric")
        if not -1.0 <= self.gamma <= 1.0:
            raise DataError("gamma must be in [-1, 1]")
        if not 0 <= self.k_card <= n:
            raise DataError(f"k_card must be in [0, {n}]")
        if self.index_map is not None:
            imap = np.asarray(self.index_map, dtype=int)
            if imap.shape != (n,):
                raise DataError("index_map length does not match mu")
            object.__setattr__(self, "index_map", imap)

    @property
    def n(self) -> int:
        return len(self.mu)


@dataclass(frozen=True)
class QuboInstance:
    """f(x) = x.Q.x + q.x + const with symmetric zero-diagonal Q."""

    q_matrix: np.ndarray
    q_linear: np.ndarray
    constant: float
    penalty_lambda: float
    index_map: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.q_linear)

    def energy(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ self.q_matrix @ x + self.q_linear @ x + self.constant)

    def energies(self, xs: np.ndarray) -> np.ndarray:
        """Row-wise f(x) for a (m, n) batch of bitstrings."""
        xs = np.asarray(xs, dtype=float)
        quad = np.einsum("ij,jk,ik->i", xs, self.q_matrix, xs)
        return quad + xs @ self.q_linear + self.constant

    def gradient(self, x: np.ndarray) -> np.ndarray:
        """Continuous gradient 2Qx + q of the quadratic form."""
        return 2.0 * (self.q_matrix @ np.asarray(x, dtype=float)) + self.q_linear


@dataclass(frozen=True)
class IsingInstance:
    """H(z) = h.z + sum_{i<j} J_ij z_i z_j + const on z in {-1, +1}^n.

    ``j_coupl`` is strictly upper triangular; ``index_map`` tracks global
    asset indices of the local spins.
    """

    h: np.ndarray
    j_coupl: np.ndarray
    constant: float
    index_map: np.ndarray | None = None
    _j_sym: np.ndarray = field(init=False, repr=False, default=None)

    def __post_init__(self):
        j = np.asarray(self.j_coupl, dtype=float)
        if not np.allclose(j, np.triu(j, 1)):
            raise DataError("j_coupl must be strictly upper triangular")
        object.__setattr__(self, "_j_sym", j + j.T)

    @property
    def n(self) -> int:
        return len(self.h)

    @property
    def j_sym(self) -> np.ndarray:
        """Symmetrized couplings J + J^T (zero diagonal)."""
        return self._j_sym

    def energy(self, z: np.ndarray) -> float:
        z = np.asarray(z, dtype=float)
        return float(self.h @ z + z @ self.j_coupl @ z + self.constant)

    def energy_bits(self, x: np.ndarray) -> float:
        return self.energy(1.0 - 2.0 * np.asarray(x, dtype=float))

    def energies(self, zs: np.ndarray) -> np.ndarray:
        """Row-wise H(z) for a (m, n) batch of spin vectors."""
        zs = np.asarray(zs, dtype=float)
        quad = ((zs @ self.j_coupl) * zs).sum(axis=1)
        return zs @ self.h + quad + self.constant

    def energies_bits(self, xs: np.ndarray) -> np.ndarray:
        return self.energies(1.0 - 2.0 * np.asarray(xs, dtype=float))

    def to_json_dict(self) -> dict:
        """Sparse-triplet export for interoperability with external samplers."""
        rows, cols = np.nonzero(self.j_coupl)
        imap = self.index_map
        return {
            "n": self.n,
            "h": [float(v) for v in self.h],
            "j": [[int(i), int(j), float(self.j_coupl[i, j])] for i, j in zip(rows, cols)],
            "constant": float(self.constant),
            "index_map": [int(i) for i in (imap if imap is not None else np.arange(self.n))],
        }


def build_qubo(spec: ProblemSpec) -> QuboInstance:
    """Penalized QUBO for a ProblemSpec, with the adaptive penalty above."""
    n = spec.n
    base_q = 0.5 * (1.0 + spec.gamma) * spec.cov
    base_lin = 0.5 * (spec.gamma - 1.0) * spec.mu

    lin = base_lin + np.diag(base_q)
    quad = base_q.copy()
    np.fill_diagonal(quad, 0.0)

    influence = np.abs(lin) + np.sum(np.abs(quad), axis=1)
    lam = 2.0 * float(np.max(influence)) if n else 0.0
    if lam <= 0.0:
        lam = 1.0  # degenerate all-zero objective still needs an active penalty

    k = spec.k_card
    pen_quad = quad + lam * (np.ones((n, n)) - np.eye(n))
    pen_lin = lin + lam * (1.0 - 2.0 * k) * np.ones(n)
    const = lam * float(k) ** 2
    return QuboInstance(pen_quad, pen_lin, const, lam, index_map=spec.index_map)


def qubo_to_ising(qubo: QuboInstance) -> IsingInstance:
    """Map x -> (1 - z)/2.  Exact energy identity on every bitstring."""
    q = 0.5 * (qubo.q_matrix + qubo.q_matrix.T)
    lin = qubo.q_linear
    row = q.sum(axis=1)
    h = -0.5 * (row + lin)
    j = 0.5 * np.triu(q, 1)
    const = (
        qubo.constant
        + 0.25 * float(q.sum())
        + 0.25 * float(np.trace(q))
        + 0.5 * float(lin.sum())
    )
    return IsingInstance(h, j, const, index_map=qubo.index_map)


def restrict(spec: ProblemSpec, cluster: list[int] | np.ndarray) -> ProblemSpec:
    """Sub-spec on a cluster with the K = floor(size / 2) cardinality rule."""
    idx = np.asarray(cluster, dtype=int)
    if idx.size == 0:
        raise DataError("cluster must be nonempty")
    if len(np.unique(idx)) != idx.size:
        raise DataError("cluster indices must be unique")
    if idx.min() < 0 or idx.max() >= spec.n:
        raise DataError("cluster index out of range")
    parent = spec.index_map if spec.index_map is not None else np.arange(spec.n)
    return ProblemSpec(
        mu=spec.mu[idx],
        cov=spec.cov[np.ix_(idx, idx)],
        gamma=spec.gamma,
        k_card=idx.size // 2,
        index_map=parent[idx],
    )
