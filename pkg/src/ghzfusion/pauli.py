"""Sign-tracking Pauli algebra over a binary-symplectic representation.

Operators are stored as X/Z bit vectors plus a sign in {+1, -1}; Y counts as
i*XZ so that every representable operator is Hermitian.  Products that would
leave the +/-1 sector (an odd number of i factors) indicate misuse of the
algebra here and raise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InconsistencyError, ValidationError

# i-exponent of the single-qubit product A*B = i^t C, indexed by the letter
# codes a and b with I=0, X=1, Z=2, Y=3 (code = x + 2z).
_PHASE_TABLE = np.zeros((4, 4), dtype=np.int64)
_PHASE_TABLE[1, 2] = 3  # X*Z = -iY
_PHASE_TABLE[2, 1] = 1  # Z*X = +iY
_PHASE_TABLE[1, 3] = 1  # X*Y = +iZ
_PHASE_TABLE[3, 1] = 3  # Y*X = -iZ
_PHASE_TABLE[3, 2] = 1  # Y*Z = +iX
_PHASE_TABLE[2, 3] = 3  # Z*Y = -iX

_LETTERS = "IXZY"


@dataclass(frozen=True, eq=False)
class PauliOperator:
    x: np.ndarray  # bool, one entry per qubit
    z: np.ndarray
    sign: int = +1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return (
            self.sign == other.sign
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __hash__(self) -> int:
        return hash((self.key(), self.sign))

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", np.asarray(self.x, dtype=bool))
        object.__setattr__(self, "z", np.asarray(self.z, dtype=bool))
        if self.x.shape != self.z.shape or self.x.ndim != 1:
            raise ValidationError("x and z must be equal-length 1-d bit vectors")
        if self.sign not in (+1, -1):
            raise ValidationError(f"sign must be +1 or -1, got {self.sign!r}")

    @property
    def n_qubits(self) -> int:
        return self.x.size

    @property
    def is_identity_pattern(self) -> bool:
        return not (self.x.any() or self.z.any())

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliOperator":
        return cls(np.zeros(n_qubits, bool), np.zeros(n_qubits, bool))

    @classmethod
    def from_label(cls, label: str, sign: int = +1) -> "PauliOperator":
        """Build from a string like ``"XIZY"`` (leftmost letter = qubit 0)."""
        x = np.array([c in "XY" for c in label], dtype=bool)
        z = np.array([c in "ZY" for c in label], dtype=bool)
        if any(c not in _LETTERS for c in label):
            raise ValidationError(f"invalid Pauli label {label!r}")
        return cls(x, z, sign)

    @classmethod
    def from_support(
        cls, n_qubits: int, terms: Iterable[tuple[str, int]], sign: int = +1
    ) -> "PauliOperator":
        """Build from sparse (letter, qubit) terms, e.g. ``[("X", 0), ("Z", 5)]``."""
        op = cls.identity(n_qubits)
        x, z = op.x.copy(), op.z.copy()
        for letter, q in terms:
            if letter not in "XZY":
                raise ValidationError(f"invalid Pauli letter {letter!r}")
            if x[q] or z[q]:
                raise ValidationError(f"qubit {q} assigned twice")
            x[q] = letter in "XY"
            z[q] = letter in "ZY"
        return cls(x, z, sign)

    def to_label(self) -> str:
        codes = self.x.astype(np.int64) + 2 * self.z.astype(np.int64)
        return "".join(_LETTERS[c] for c in codes)

    def commutes_with(self, other: "PauliOperator") -> bool:
        anti = int(np.count_nonzero(self.x & other.z)) + int(
            np.count_nonzero(self.z & other.x)
        )
        return anti % 2 == 0

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def negate(self) -> "PauliOperator":
        return PauliOperator(self.x, self.z, -self.sign)

    def key(self) -> tuple[bytes, bytes]:
        return (np.packbits(self.x).tobytes(), np.packbits(self.z).tobytes())

    def __str__(self) -> str:
        return ("+" if self.sign > 0 else "-") + self.to_label()


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Product a*b with sign tracking; raises if the result has phase +/-i."""
    if a.n_qubits != b.n_qubits:
        raise ValidationError(
            f"operator sizes differ: {a.n_qubits} vs {b.n_qubits} qubits"
        )
    la = a.x.astype(np.int64) + 2 * a.z.astype(np.int64)
    lb = b.x.astype(np.int64) + 2 * b.z.astype(np.int64)
    t = int(_PHASE_TABLE[la, lb].sum()) % 4
    if t % 2:
        raise InconsistencyError(
            f"product {a} * {b} carries phase (+/-)i; Hermitian sector left"
        )
    sign = a.sign * b.sign * (1 if t == 0 else -1)
    return PauliOperator(a.x ^ b.x, a.z ^ b.z, sign)


@dataclass(frozen=True)
class Membership:
    """Result of a group-membership query."""

    pattern_in_group: bool  # bit pattern is generated, sign ignored
    sign_matches: bool  # reconstructed sign equals the queried sign
    residual_sign: int  # sign of op * (reconstruction)^-1 when pattern matches

    @property
    def contained(self) -> bool:
        return self.pattern_in_group and self.sign_matches


class StabilizerGroup:
    """Abelian Pauli group given by generators; membership via GF(2) elimination.

    The generator list is kept as given; an echelonised basis (with the
    products tracked as actual operators, so signs ride along) is built once
    at construction.
    """

    def __init__(self, generators: Sequence[PauliOperator]):
        gens = list(generators)
        if not gens:
            raise ValidationError("a stabilizer group needs at least one generator")
        n = gens[0].n_qubits
        for g in gens:
            if g.n_qubits != n:
                raise ValidationError("generators act on differing qubit counts")
        for i, g in enumerate(gens):
            for h in gens[i + 1 :]:
                if not g.commutes_with(h):
                    raise ValidationError(
                        f"generators do not commute: {g} vs {h}"
                    )
        self.generators = gens
        self.n_qubits = n
        self._basis: dict[int, PauliOperator] = {}  # pivot bit -> reduced operator
        for g in gens:
            self._insert(g)

    @staticmethod
    def _first_bit(op: PauliOperator) -> int:
        bits = np.concatenate([op.x, op.z])
        nz = np.flatnonzero(bits)
        return int(nz[0]) if nz.size else -1

    def _insert(self, op: PauliOperator) -> None:
        cur = op
        while True:
            pivot = self._first_bit(cur)
            if pivot < 0:
                if cur.sign != +1:
                    raise ValidationError(
                        "generators are inconsistent: they generate -identity"
                    )
                return  # dependent generator
            if pivot in self._basis:
                cur = multiply(cur, self._basis[pivot])
            else:
                self._basis[pivot] = cur
                return

    @property
    def rank(self) -> int:
        return len(self._basis)

    def membership(self, op: PauliOperator) -> Membership:
        cur = op
        while True:
            pivot = self._first_bit(cur)
            if pivot < 0:
                return Membership(
                    pattern_in_group=True,
                    sign_matches=cur.sign == +1,
                    residual_sign=cur.sign,
                )
            if pivot not in self._basis:
                return Membership(False, False, 0)
            basis_op = self._basis[pivot]
            if not cur.commutes_with(basis_op):
                # an element of an abelian group commutes with every basis
                # element, so op cannot be generated
                return Membership(False, False, 0)
            cur = multiply(cur, basis_op)

    def contains(self, op: PauliOperator) -> bool:
        """True iff op, including its sign, is an element of the group."""
        return self.membership(op).contained


def group_contains(group: StabilizerGroup, op: PauliOperator) -> bool:
    return group.contains(op)
