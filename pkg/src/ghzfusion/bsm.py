"""Closed-form success probabilities of parity-code encoded Bell measurements.

An encoded Bell-state measurement fuses two qubits that are each encoded in a
quantum parity code with an outer repetition size ``n`` and an inner block
size ``m``.  It is realised transversally as ``n*m`` dual-rail Bell
measurements, each of which is corrupted (returns nothing) with probability
``gamma = 1 - (1 - eta)**2`` when every photon is lost independently at rate
``eta``.  Two hardware flavours are modelled: a *static* scheme made of fixed
linear optics and an *active* scheme that spends up to ``j`` feed-forward
steps per block to boost the joint recovery rate.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import InconsistencyError, ValidationError


class Protocol(Enum):
    STATIC = "static"
    ACTIVE = "active"


class Convention(Enum):
    """Which logical operator the outer repetition protects.

    The two parity-code layouts are each other's transversal-Hadamard image:
    swapping them exchanges the recovery probabilities of logical XX and ZZ
    while leaving the joint recovery probability unchanged.
    """

    HADAMARD = "hadamard"
    SHOR = "shor"


def _check_prob(name: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"{name} must lie in [0, 1], got {value!r}")
    return float(value)


@dataclass(frozen=True)
class BsmModel:
    """Full parameterisation of one encoded Bell-state measurement.

    ``j`` is meaningful only for the active protocol and must satisfy
    ``0 <= j < m``; ``j = 0`` reduces the active scheme exactly to the static
    one and is admitted so that the reduction is testable.  Storing a nonzero
    ``j`` on a static model is rejected.
    """

    protocol: Protocol
    n: int
    m: int
    eta: float
    j: int = 0
    convention: Convention = Convention.HADAMARD

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"n must be a positive integer, got {self.n}")
        if self.m < 1:
            raise ValidationError(f"m must be a positive integer, got {self.m}")
        _check_prob("eta", self.eta)
        if self.protocol is Protocol.STATIC:
            if self.j != 0:
                raise ValidationError(
                    f"j is a feed-forward depth of the active protocol; "
                    f"got j={self.j} with protocol=static"
                )
        else:
            if not 0 <= self.j < self.m:
                raise ValidationError(
                    f"j must satisfy 0 <= j < m, got j={self.j} with m={self.m}"
                )


@dataclass(frozen=True)
class BlockProbs:
    """Recovery rates of a single inner block of ``m`` dual-rail fusions."""

    p_zz_block: float
    p_joint_block: float
    p_none_block: float


@dataclass(frozen=True)
class BsmOutcomeProbs:
    """Marginal and joint recovery probabilities of one encoded measurement."""

    p_xx: float
    p_zz: float
    p_joint: float


def gamma_from_loss(eta: float) -> float:
    """Per-fusion corruption probability: both input photons must survive."""
    _check_prob("eta", eta)
    return 1.0 - (1.0 - eta) ** 2


def static_block_probs(m: int, gamma: float) -> BlockProbs:
    """Block-level rates of the static scheme.

    The block reveals its ZZ eigenvalue unless every one of its m fusions is
    corrupted; it reveals both eigenvalues only for the half of the Bell-state
    expansion where the guaranteed basis matches, and then only if no fusion
    is corrupted.  XX is never recovered without ZZ.
    """
    if m < 1:
        raise ValidationError(f"m must be a positive integer, got {m}")
    _check_prob("gamma", gamma)
    p_none = gamma ** m
    return BlockProbs(
        p_zz_block=1.0 - p_none,
        p_joint_block=0.5 * (1.0 - gamma) ** m,
        p_none_block=p_none,
    )


def active_block_probs(m: int, j: int, gamma: float) -> BlockProbs:
    """Block-level rates of the active scheme with feed-forward depth ``j``.

    The block returns nothing when ``l <= j`` consecutive basis-probing
    fusions fail and the remaining ``m - l`` fusions are all corrupted; it
    returns both eigenvalues with probability ``(1 - 2**-(j+1)) (1-gamma)**m``.
    At ``j = 0`` both expressions coincide with the static ones exactly.
    """
    if m < 1:
        raise ValidationError(f"m must be a positive integer, got {m}")
    if not 0 <= j < m:
        raise ValidationError(f"j must satisfy 0 <= j < m, got j={j} with m={m}")
    _check_prob("gamma", gamma)
    p_none = sum(((1.0 - gamma) / 2.0) ** l * gamma ** (m - l) for l in range(j + 1))
    return BlockProbs(
        p_zz_block=1.0 - p_none,
        p_joint_block=(1.0 - 0.5 ** (j + 1)) * (1.0 - gamma) ** m,
        p_none_block=p_none,
    )


def _clamp01(x: float) -> float:
    # powers of quantities within one ulp of 1 can overshoot [0, 1]
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else x


def block_probs(model: BsmModel) -> BlockProbs:
    gamma = gamma_from_loss(model.eta)
    if model.protocol is Protocol.STATIC:
        return static_block_probs(model.m, gamma)
    return active_block_probs(model.m, model.j, gamma)


def qpc_probs(model: BsmModel) -> BsmOutcomeProbs:
    """Encoded-measurement recovery probabilities for a full (n, m) code.

    ZZ needs every block to report zz; XX needs at least one block to report
    both.  Under the ``SHOR`` convention the two marginals swap roles while
    the joint recovery is convention independent.
    """
    blocks = block_probs(model)
    pz, pj = blocks.p_zz_block, blocks.p_joint_block
    p_zz = pz ** model.n
    p_xx = 1.0 - (1.0 - pj) ** model.n
    p_joint = pz ** model.n - (pz - pj) ** model.n
    if model.convention is Convention.SHOR:
        p_xx, p_zz = p_zz, p_xx
    return BsmOutcomeProbs(
        p_xx=_clamp01(p_xx), p_zz=_clamp01(p_zz), p_joint=_clamp01(p_joint)
    )


_ATOL = 1e-12


def joint_distribution(p: BsmOutcomeProbs) -> tuple[float, float, float, float]:
    """Four-way outcome distribution (both, zz only, xx only, neither).

    Raises :class:`InconsistencyError` if the three input probabilities are
    not a consistent pair-marginal/joint triple.
    """
    both = p.p_joint
    zz_only = p.p_zz - p.p_joint
    xx_only = p.p_xx - p.p_joint
    neither = 1.0 - p.p_zz - p.p_xx + p.p_joint
    dist = (both, zz_only, xx_only, neither)
    if min(dist) < -_ATOL:
        raise InconsistencyError(
            f"joint/marginal probabilities are inconsistent: {p} -> {dist}"
        )
    total = sum(dist)
    if abs(total - 1.0) > _ATOL:
        raise InconsistencyError(f"four-way distribution sums to {total}, not 1")
    return tuple(max(0.0, q) for q in dist)  # type: ignore[return-value]
