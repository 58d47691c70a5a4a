"""Sparse symbolic Pauli-sum algebra.

Operators are dictionaries mapping Pauli words (strings over IXYZ, position
j = qubit j) to complex coefficients.  Exact zeros are never stored.  The
dense representation uses the little-endian convention: qubit j is bit j of
the basis index.
"""

from __future__ import annotations

import numpy as np

_CHARS = "IXYZ"
_IDX = {c: k for k, c in enumerate(_CHARS)}

# single-qubit products P_a @ P_b -> (phase, P_c), flattened on 4*a + b
_PROD_CHAR = [
    "I", "X", "Y", "Z",
    "X", "I", "Z", "Y",
    "Y", "Z", "I", "X",
    "Z", "Y", "X", "I",
]
_PROD_PHASE = [
    1, 1, 1, 1,
    1, 1, 1j, -1j,
    1, -1j, 1, 1j,
    1, 1j, -1j, 1,
]

_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _mul_words(w1: str, w2: str) -> tuple[complex, str]:
    phase = 1 + 0j
    out = []
    for a, b in zip(w1, w2):
        k = 4 * _IDX[a] + _IDX[b]
        phase *= _PROD_PHASE[k]
        out.append(_PROD_CHAR[k])
    return phase, "".join(out)


def _anticommute(w1: str, w2: str) -> bool:
    c = 0
    for a, b in zip(w1, w2):
        if a != "I" and b != "I" and a != b:
            c += 1
    return c % 2 == 1


class PauliSum:
    """Linear combination of Pauli words on a fixed qubit count."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[str, complex] | None = None):
        self.n = int(n)
        self.terms: dict[str, complex] = {}
        if terms:
            for w, c in terms.items():
                if len(w) != self.n or any(ch not in _IDX for ch in w):
                    raise ValueError(f"bad Pauli word {w!r} for n={self.n}")
                if c != 0:
                    self.terms[w] = complex(c)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str, coeff: complex = 1.0) -> "PauliSum":
        word = "".join(letter if j == qubit else "I" for j in range(n))
        return cls(n, {word: coeff})

    def copy(self) -> "PauliSum":
        out = PauliSum(self.n)
        out.terms = dict(self.terms)
        return out

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if self.n != other.n:
            raise ValueError("qubit counts differ")
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w, 0) + c
            if v == 0:
                out.pop(w, None)
            else:
                out[w] = v
        res = PauliSum(self.n)
        res.terms = out
        return res

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (other * -1)

    def __mul__(self, scalar: complex) -> "PauliSum":
        if scalar == 0:
            return PauliSum(self.n)
        out = PauliSum(self.n)
        out.terms = {w: c * scalar for w, c in self.terms.items()}
        return out

    __rmul__ = __mul__

    def __neg__(self) -> "PauliSum":
        return self * -1

    def coeff_norm_sq(self) -> float:
        """Sum of |coefficient|^2, i.e. Tr(A^dag A) / 2^n for Pauli sums."""
        return float(sum(abs(c) ** 2 for c in self.terms.values()))

    def max_locality(self) -> int:
        return max((sum(ch != "I" for ch in w) for w in self.terms), default=0)

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix (qubit j = bit j of the basis index)."""
        dim = 2**self.n
        out = np.zeros((dim, dim), dtype=complex)
        for w, c in self.terms.items():
            m = np.array([[1.0 + 0j]])
            for ch in w:  # qubit 0 innermost
                m = np.kron(_MATS[ch], m)
            out += c * m
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return f"PauliSum(n={self.n}, 0)"
        parts = [f"({c:.4g})*{w}" for w, c in sorted(self.terms.items())]
        return f"PauliSum(n={self.n}, " + " + ".join(parts) + ")"


def pauli_commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """Exact symbolic [A, B].

    Word pairs that commute contribute nothing; anticommuting pairs give
    2 * (product), since PQ = -QP there.  Cancellations are removed.
    """
    if a.n != b.n:
        raise ValueError("qubit counts differ")
    acc: dict[str, complex] = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            if not _anticommute(w1, w2):
                continue
            phase, w = _mul_words(w1, w2)
            v = acc.get(w, 0) + 2 * phase * c1 * c2
            if v == 0:
                acc.pop(w, None)
            else:
                acc[w] = v
    out = PauliSum(a.n)
    out.terms = acc
    return out
