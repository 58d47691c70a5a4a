"""Counterdiabatic circuit construction and dense state-vector simulation.

The optimizer evolves under the impulse-regime Hamiltonian H(t) =
lam_dot(t) * A_lam, where A_lam = i * alpha(lam) * [H_i, H_f] is the
first-order counterdiabatic term for the interpolation
H_ad = (1 - lam) H_i + lam H_f with the smooth schedule
lam(t) = sin^2[(pi/2) sin^2(pi t / 2T)].  The variational coefficient is
alpha(lam) = -|[H_i, H_f]|^2 / |[H_ad, [H_i, H_f]]|^2, with |.|^2 the
Pauli-coefficient 2-norm (the 2^n Hilbert-Schmidt factor cancels in the
ratio).

Each Pauli term of H(k dt) becomes one rotation gate exp(-i theta P) with
theta = dt * lam_dot * coeff; gates are ordered lexicographically by word
within a Trotter step.  Pruning drops gates with |theta| <= theta_cutoff,
either at a fixed threshold or at the empirical quantile matching a target
removed fraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .encoding import IsingInstance
from .errors import CapExceededError, DataError, TrivialInstanceError
from .pauli import PauliSum, pauli_commutator

DEFAULT_SIM_CAP = 24
_DENOM_TOL = 1e-24


@dataclass(frozen=True)
class Schedule:
    """Trotter grid: total_time = n_steps * dt."""

    n_steps: int = 2
    dt: float = 0.1

    def __post_init__(self):
        if self.n_steps < 1:
            raise DataError("n_steps must be >= 1")
        if not self.dt > 0:
            raise DataError("dt must be positive")

    @property
    def total_time(self) -> float:
        return self.n_steps * self.dt

    def lam(self, t: float) -> float:
        s = math.sin(math.pi * t / (2.0 * self.total_time))
        return math.sin(0.5 * math.pi * s * s) ** 2

    def lam_dot(self, t: float) -> float:
        big_t = self.total_time
        s = math.sin(math.pi * t / (2.0 * big_t))
        u = 0.5 * math.pi * s * s
        return math.sin(2.0 * u) * (math.pi**2 / (4.0 * big_t)) * math.sin(math.pi * t / big_t)


@dataclass(frozen=True)
class PruneSpec:
    """Gate pruning: 'threshold' keeps |theta| > value; 'fraction' removes
    the requested share of gates, smallest |theta| first."""

    mode: str = "fraction"
    value: float = 0.0

    def __post_init__(self):
        if self.mode not in ("threshold", "fraction"):
            raise DataError(f"prune mode must be 'threshold' or 'fraction', got {self.mode!r}")
        if self.mode == "fraction" and not 0.0 <= self.value < 1.0:
            raise DataError("prune fraction must be in [0, 1)")
        if self.mode == "threshold" and self.value < 0.0:
            raise DataError("prune threshold must be >= 0")


@dataclass(frozen=True)
class CdProgram:
    """Ordered rotation gates per Trotter step, plus pruning bookkeeping.

    ``bias`` fixes the initial product state (per-qubit ground state of
    -X + bias_j Z); ``ising`` is the target Hamiltonian used to score
    samples.
    """

    n_qubits: int
    bias: np.ndarray
    steps: list[list[tuple[str, float]]]
    gates_total_prepruning: int
    gates_after_pruning: int
    theta_cutoff: float
    ising: IsingInstance = field(repr=False, default=None)

    def gates(self):
        for step in self.steps:
            yield from step

    def to_json_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "bias": [float(b) for b in self.bias],
            "theta_cutoff": self.theta_cutoff,
            "gates_total_prepruning": self.gates_total_prepruning,
            "gates_after_pruning": self.gates_after_pruning,
            "steps": [[[w, float(a)] for w, a in step] for step in self.steps],
        }


@dataclass(frozen=True)
class SampleSet:
    """Measured bitstrings (unique basis states with multiplicities) and
    their energies under the program's Ising Hamiltonian."""

    n_qubits: int
    states: np.ndarray
    counts: np.ndarray
    energies: np.ndarray
    shots: int

    def __post_init__(self):
        if int(self.counts.sum()) != self.shots:
            raise DataError("sample multiplicities do not sum to shots")

    def bits(self, state: int) -> np.ndarray:
        return state_to_bits(int(state), self.n_qubits)

    def sorted_low_energy(self) -> np.ndarray:
        """Unique states ordered by (energy, bitstring lexicographic)."""
        rev = _bit_reverse(self.states, self.n_qubits)
        order = np.lexsort((rev, self.energies))
        return self.states[order]


def state_to_bits(state: int, n: int) -> np.ndarray:
    """Little-endian decode: bit j of the integer is variable j."""
    return (state >> np.arange(n)) & 1


def bits_to_state(bits: np.ndarray) -> int:
    return int(np.dot(np.asarray(bits, dtype=np.int64), 1 << np.arange(len(bits), dtype=np.int64)))


def _bit_reverse(states: np.ndarray, n: int) -> np.ndarray:
    # bitstring-lexicographic order == numeric order of the bit-reversed state
    out = np.zeros_like(states)
    for j in range(n):
        out |= ((states >> j) & 1) << (n - 1 - j)
    return out


def driver_hamiltonian(bias: np.ndarray) -> PauliSum:
    """Biased transverse-field driver sum_j (-X_j + bias_j Z_j)."""
    n = len(bias)
    terms: dict[str, complex] = {}
    for j in range(n):
        terms["".join("X" if q == j else "I" for q in range(n))] = -1.0
        if bias[j] != 0:
            terms["".join("Z" if q == j else "I" for q in range(n))] = float(bias[j])
    return PauliSum(n, terms)


def ising_hamiltonian(ising: IsingInstance) -> PauliSum:
    """Target Hamiltonian as a PauliSum (constant omitted: it has no
    effect on commutators or dynamics)."""
    n = ising.n
    terms: dict[str, complex] = {}
    for j in range(n):
        if ising.h[j] != 0:
            terms["".join("Z" if q == j else "I" for q in range(n))] = float(ising.h[j])
    rows, cols = np.nonzero(ising.j_coupl)
    for a, b in zip(rows, cols):
        word = "".join("Z" if q in (a, b) else "I" for q in range(n))
        terms[word] = float(ising.j_coupl[a, b])
    return PauliSum(n, terms)


class _CdGenerator:
    """Caches the lambda-independent commutators so per-step evaluation of
    the CD term is a cheap norm ratio."""

    def __init__(self, h_i: PauliSum, h_f: PauliSum):
        self.h_i = h_i
        self.h_f = h_f
        self.g = pauli_commutator(h_i, h_f)
        self.g_norm_sq = self.g.coeff_norm_sq()
        if self.g_norm_sq <= _DENOM_TOL:
            raise TrivialInstanceError("[H_i, H_f] vanishes: trivial instance")
        self.k_i = pauli_commutator(h_i, self.g)
        self.k_f = pauli_commutator(h_f, self.g)

    def alpha(self, lam: float) -> float:
        denom = ((1.0 - lam) * self.k_i + lam * self.k_f).coeff_norm_sq()
        if denom <= _DENOM_TOL:
            raise TrivialInstanceError("nested commutator vanishes: trivial instance")
        return -self.g_norm_sq / denom

    def cd_term(self, lam: float) -> PauliSum:
        a = 1j * self.alpha(lam) * self.g
        terms: dict[str, complex] = {}
        for w, c in a.terms.items():
            if abs(c.imag) > 1e-9 * max(1.0, abs(c)):
                raise DataError(f"CD term not Hermitian at word {w}: {c}")
            terms[w] = c.real
        out = PauliSum(a.n)
        out.terms = terms
        return out


def cd_term(h_i: PauliSum, h_f: PauliSum, lambda_val: float) -> PauliSum:
    """A_lam = i * alpha(lam) * [H_i, H_f] with real coefficients.

    Raises TrivialInstanceError when the (nested) commutator vanishes.
    """
    if not 0.0 <= lambda_val <= 1.0:
        raise DataError("lambda_val must be in [0, 1]")
    return _CdGenerator(h_i, h_f).cd_term(lambda_val)


def build_dcqo_circuit(
    ising: IsingInstance,
    bias: np.ndarray,
    sched: Schedule,
    prune: PruneSpec,
) -> CdProgram:
    """Trotterized impulse-regime program for one DCQO execution."""
    bias = np.asarray(bias, dtype=float)
    if bias.shape != (ising.n,):
        raise DataError("bias length does not match instance size")
    if np.any(np.abs(bias) > 1.0 + 1e-12):
        raise DataError("bias entries must lie in [-1, 1]")

    gen = _CdGenerator(driver_hamiltonian(bias), ising_hamiltonian(ising))
    raw_steps: list[list[tuple[str, float]]] = []
    for k in range(1, sched.n_steps + 1):
        t = k * sched.dt
        lam = sched.lam(t)
        ldot = sched.lam_dot(t)
        a_lam = gen.cd_term(lam)
        step = [(w, sched.dt * ldot * a_lam.terms[w]) for w in sorted(a_lam.terms)]
        raw_steps.append(step)

    total = sum(len(s) for s in raw_steps)
    if prune.mode == "threshold":
        cutoff = prune.value
    else:
        n_remove = int(round(prune.value * total))
        if n_remove == 0:
            cutoff = -1.0
        else:
            all_abs = np.sort(np.abs(np.array([a for s in raw_steps for _, a in s])))
            cutoff = float(all_abs[n_remove - 1])

    steps = [[(w, a) for w, a in step if abs(a) > cutoff] for step in raw_steps]
    kept = sum(len(s) for s in steps)
    return CdProgram(
        n_qubits=ising.n,
        bias=bias,
        steps=steps,
        gates_total_prepruning=total,
        gates_after_pruning=kept,
        theta_cutoff=cutoff,
        ising=ising,
    )


class StateVector:
    """Dense 2^n simulator applying exact Pauli rotations.

    exp(-i theta P) |psi> = cos(theta) |psi> - i sin(theta) P |psi>, with
    P applied through bit arithmetic on the basis indices.
    """

    def __init__(self, n_qubits: int, bias: np.ndarray | None = None):
        self.n = int(n_qubits)
        self._idx = np.arange(2**self.n, dtype=np.uint64)
        if bias is None:
            bias = np.zeros(self.n)
        psi = np.array([1.0 + 0j])
        for j in range(self.n):
            b = float(bias[j])
            v = np.array([1.0, b + math.sqrt(1.0 + b * b)], dtype=complex)
            v /= np.linalg.norm(v)
            psi = np.kron(v, psi)  # qubit j becomes bit j
        self.psi = psi

    def norm(self) -> float:
        return float(np.linalg.norm(self.psi))

    def _apply_word(self, word: str) -> np.ndarray:
        flip = np.uint64(0)
        phase_mask = np.uint64(0)
        n_y = 0
        for j, ch in enumerate(word):
            bit = np.uint64(1) << np.uint64(j)
            if ch == "X":
                flip |= bit
            elif ch == "Y":
                flip |= bit
                phase_mask |= bit
                n_y += 1
            elif ch == "Z":
                phase_mask |= bit
        src = self._idx ^ flip
        parity = (np.bitwise_count(src & phase_mask) & 1).astype(np.int8)
        out = self.psi[src] * (1 - 2 * parity)
        if n_y % 4:
            out = out * (1j**n_y)
        return out

    def apply_rotation(self, word: str, theta: float) -> None:
        pw = self._apply_word(word)
        self.psi = math.cos(theta) * self.psi - 1j * math.sin(theta) * pw

    def run_program(self, program: CdProgram) -> None:
        for word, theta in program.gates():
            self.apply_rotation(word, theta)

    def probabilities(self) -> np.ndarray:
        p = np.abs(self.psi) ** 2
        return p / p.sum()

    def expectation_ising(self, ising: IsingInstance) -> float:
        """<H_f> over the current state (diagonal observable)."""
        p = self.probabilities()
        energies = np.full(len(p), ising.constant)
        z = [1.0 - 2.0 * ((self._idx >> np.uint64(j)) & np.uint64(1)).astype(float) for j in range(self.n)]
        for j in range(self.n):
            if ising.h[j] != 0:
                energies += ising.h[j] * z[j]
        rows, cols = np.nonzero(ising.j_coupl)
        for a, b in zip(rows, cols):
            energies += ising.j_coupl[a, b] * z[a] * z[b]
        return float(p @ energies)


def simulate_and_sample(
    program: CdProgram,
    shots: int,
    seed,
    sim_cap: int = DEFAULT_SIM_CAP,
) -> SampleSet:
    """Run a program on the dense simulator and sample measurement outcomes.

    ``seed`` may be an int or a numpy SeedSequence.  Raises CapExceededError
    above ``sim_cap`` qubits (the cluster must then be solved classically or
    the cap raised).
    """
    if shots < 1:
        raise DataError("shots must be >= 1")
    if program.n_qubits > sim_cap:
        raise CapExceededError(
            f"{program.n_qubits} qubits exceeds simulator cap {sim_cap}; "
            "route this cluster to a classical solver or raise the cap"
        )
    sim = StateVector(program.n_qubits, program.bias)
    sim.run_program(program)
    if abs(sim.norm() - 1.0) > 1e-10:
        raise DataError(f"state norm drifted to {sim.norm()}")
    rng = np.random.default_rng(seed)
    drawn = rng.choice(len(sim.psi), size=shots, p=sim.probabilities())
    states, counts = np.unique(drawn, return_counts=True)
    states = states.astype(np.uint64)
    xs = np.array([state_to_bits(int(s), program.n_qubits) for s in states], dtype=float)
    energies = program.ising.energies_bits(xs) if len(states) else np.array([])
    return SampleSet(program.n_qubits, states, counts, energies, shots)
