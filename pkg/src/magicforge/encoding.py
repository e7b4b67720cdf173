"""Qubit encodings and interaction topology shaping.

Each spin can be housed in one of three two-level encodings of the ground
hyperfine manifold, labelled by the magnetic character of its bright level:
sigma- (m_F = -1), sigma+ (m_F = +1) and pi (m_F = 0). The gradient couples
only to the magnetic levels, so the effective Ising coupling between qubits i
and j is

    J_eff[i, j] = m_i * m_j * |J[i, j]|

with m in {-1, +1, 0}. Moving a qubit to the pi encoding therefore switches
off every coupling that involves it; flipping sigma- to sigma+ inverts the
sign of its couplings. Transfers between encodings are composite microwave
pulse blocks that permute level populations; at the logical two-level model
used here a transfer is an identity with metadata (dephasing rate, coupling
sensitivity) attached.
"""

from dataclasses import dataclass

import numpy as np

from .program import (
    BASES,
    BASIS_PI,
    BASIS_SIGMA_MINUS,
    BASIS_SIGMA_PLUS,
    MF,
    Echo,
    FreeEvolve,
    ProgramError,
    PulseProgram,
    TransferBasis,
)


class EncodingError(ValueError):
    pass


@dataclass
class TopologyAssignment:
    bases: tuple
    label: str = ""

    def __post_init__(self):
        for b in self.bases:
            if b not in BASES:
                raise EncodingError(f"unknown basis {b!r}")
        self.bases = tuple(self.bases)

    @property
    def mf(self):
        return np.array([MF[b] for b in self.bases])

    def __str__(self):
        sym = {BASIS_SIGMA_MINUS: "-", BASIS_SIGMA_PLUS: "+", BASIS_PI: "0"}
        return ",".join(sym[b] for b in self.bases)


def parse_topology(text):
    """Parse a compact assignment string like '-,+,0' into a TopologyAssignment."""
    mapping = {"-": BASIS_SIGMA_MINUS, "+": BASIS_SIGMA_PLUS, "0": BASIS_PI}
    bases = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok not in mapping:
            raise EncodingError(f"bad topology token {tok!r}; use -, + or 0")
        bases.append(mapping[tok])
    return TopologyAssignment(tuple(bases), label=text)


def topology_preset(label, n_qubits=3, flipped=None):
    """Named interaction patterns for a three-spin chain.

    A: uniform sigma- (all couplings antiferromagnetic-sign),
    B: one ion flipped to sigma+ (default the middle ion) -> mixed signs,
    C: one edge ion flipped to sigma+ (default ion 0),
    D: middle ion moved to pi -> only the edge-edge coupling survives,
    E: all ions in pi -> fully decoupled memory configuration.

    `flipped` overrides which ion is flipped/moved for B, C and D.
    """
    label = label.upper()
    if n_qubits != 3 and label in ("B", "C", "D"):
        raise EncodingError(f"preset {label} is defined for 3 qubits")
    if label == "A":
        bases = [BASIS_SIGMA_MINUS] * n_qubits
    elif label == "B":
        k = 1 if flipped is None else flipped
        bases = [BASIS_SIGMA_MINUS] * n_qubits
        bases[k] = BASIS_SIGMA_PLUS
    elif label == "C":
        k = 0 if flipped is None else flipped
        bases = [BASIS_SIGMA_MINUS] * n_qubits
        bases[k] = BASIS_SIGMA_PLUS
    elif label == "D":
        k = 1 if flipped is None else flipped
        bases = [BASIS_SIGMA_MINUS] * n_qubits
        bases[k] = BASIS_PI
    elif label == "E":
        bases = [BASIS_PI] * n_qubits
    else:
        raise EncodingError(f"unknown topology preset {label!r}")
    return TopologyAssignment(tuple(bases), label=label)


def effective_couplings(j, assignment):
    """Sign-shaped coupling matrix m_i m_j |J_ij| for an encoding assignment."""
    j = np.asarray(j, dtype=float)
    m = assignment.mf
    if len(m) != j.shape[0]:
        raise EncodingError("assignment length does not match coupling matrix")
    return np.abs(j) * np.outer(m, m)


def transfer_sequence(qubit, source, target, n_qubits=3):
    """Pulse fragment re-housing `qubit` (or 'all') from `source` to `target` basis.

    Physically a sigma<->pi transfer is the composite block
    pi(pi-transition) pi(sigma-transition) pi(pi-transition) per qubit, all
    pulse phases 0 (the all-qubit variant interleaves the per-qubit sigma
    pulses inside one pair of pi-transition pulses). A direct sigma- <-> sigma+
    transfer is not a native block; route it through pi.
    """
    if source not in BASES or target not in BASES:
        raise EncodingError(f"unknown basis in transfer {source!r} -> {target!r}")
    if source == target:
        raise EncodingError("transfer source and target are the same basis")
    sigma = (BASIS_SIGMA_MINUS, BASIS_SIGMA_PLUS)
    if source in sigma and target in sigma:
        raise EncodingError(
            "direct sigma- <-> sigma+ transfer is not supported; "
            "compose two transfers through the pi basis"
        )
    return PulseProgram(
        n_qubits=n_qubits,
        instructions=[TransferBasis(qubit, target)],
        name=f"transfer {qubit} -> {target}",
    )


def decoupled_memory_fragment(qubit, total_duration, echo_phase=np.pi / 2, n_qubits=3,
                              source=BASIS_SIGMA_MINUS):
    """Storage protocol: park a qubit in the pi encoding with a mid-time echo.

    Two storage windows of total_duration/2 each; the qubit is brought back to
    its working basis halfway for a single echo pulse on the perpendicular
    axis (phase pi/2 by default), then parked again. Four transfer blocks and
    one echo in total.
    """
    if total_duration < 0:
        raise ProgramError("storage duration must be >= 0")
    half = total_duration / 2.0
    frag = PulseProgram(n_qubits=n_qubits, name=f"decoupled memory q{qubit}")
    frag.extend(transfer_sequence(qubit, source, BASIS_PI, n_qubits))
    frag.instructions.append(FreeEvolve(half))
    frag.extend(transfer_sequence(qubit, BASIS_PI, source, n_qubits))
    frag.instructions.append(Echo(qubit, echo_phase))
    frag.extend(transfer_sequence(qubit, source, BASIS_PI, n_qubits))
    frag.instructions.append(FreeEvolve(half))
    frag.extend(transfer_sequence(qubit, BASIS_PI, source, n_qubits))
    return frag
