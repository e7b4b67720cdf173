"""Exact density-matrix execution of pulse programs with a dephasing noise model.

The register state is an explicit 2^n x 2^n density matrix. Pulses are
instantaneous by default; free-evolution windows apply the diagonal Ising
propagator exp(+i T/2 sum J_ij sz_i sz_j) together with single-qubit phase
damping at a per-encoding rate (magnetic sigma levels dephase fast, the
field-insensitive pi level slowly). Per-qubit dephasing over a window of
length T multiplies coherence element (a, b) by exp(-gamma_k T) for every
qubit k whose bit differs between a and b; that is exactly a phase-flip
channel per qubit and window, so windows compose correctly.

Basis transfers are identities on the logical state but change which
couplings and which dephasing rate a qubit sees from then on: the coupling
window scales by s_i s_j where s_k is the qubit's magnetic moment relative to
the encoding it held when the supplied coupling matrix was calibrated (a
qubit parked in pi has s = 0 and is fully decoupled; a round trip restores
the original signs).

A depolarizing fraction zeta is folded in once at the end of a run,
rho -> zeta I/2^n + (1 - zeta) rho, modelling accumulated pulse error over a
whole sequence rather than per-gate noise. Readout error is classical and is
applied to outcome distributions only, never to the state.
"""

from dataclasses import dataclass, field

import numpy as np

from .gates import (
    bit_table,
    embed,
    free_phases,
    ket,
    permutation_matrix,
    phase_2x2,
    rotation_2x2,
)
from .program import (
    BASIS_PI,
    BASIS_SIGMA_MINUS,
    BASES,
    DD_SCHEMES,
    MF,
    Echo,
    FreeEvolve,
    Measure,
    PhaseShift,
    ProgramError,
    PulseProgram,
    Rotate,
    TransferBasis,
)


class EngineError(RuntimeError):
    pass


@dataclass
class NoiseModel:
    """Window dephasing rates (1/s), end-of-run depolarization and readout error."""

    sigma_dephasing_rate: float = 62.5
    pi_dephasing_rate: float = 20.0
    white_noise_fraction: float = 0.25
    readout_fidelity: float = 0.96
    dephasing: bool = True
    white_noise: bool = True
    readout: bool = True

    def __post_init__(self):
        if self.sigma_dephasing_rate < 0 or self.pi_dephasing_rate < 0:
            raise ValueError("dephasing rates must be >= 0")
        if not 0.0 <= self.white_noise_fraction <= 1.0:
            raise ValueError("white_noise_fraction must lie in [0, 1]")
        if not 0.5 <= self.readout_fidelity <= 1.0:
            raise ValueError("readout_fidelity must lie in [0.5, 1]")

    @classmethod
    def off(cls):
        return cls(dephasing=False, white_noise=False, readout=False)

    def rate_for(self, basis):
        return self.pi_dephasing_rate if basis == BASIS_PI else self.sigma_dephasing_rate


@dataclass
class QuantumState:
    n_qubits: int
    rho: np.ndarray
    bases: tuple
    reference_mf: tuple
    time: float = 0.0
    # accumulated free-evolution time spent in (sigma, pi) encodings, per qubit
    exposure: np.ndarray = None

    def __post_init__(self):
        dim = 2**self.n_qubits
        self.rho = np.asarray(self.rho, dtype=complex)
        if self.rho.shape != (dim, dim):
            raise EngineError(f"density matrix shape {self.rho.shape} != {(dim, dim)}")
        if len(self.bases) != self.n_qubits:
            raise EngineError("one encoding basis per qubit required")
        for b in self.bases:
            if b not in BASES:
                raise EngineError(f"unknown encoding basis {b!r}")
        self.bases = tuple(self.bases)
        self.reference_mf = tuple(self.reference_mf)
        if self.exposure is None:
            self.exposure = np.zeros((self.n_qubits, 2))

    def copy(self):
        return QuantumState(self.n_qubits, self.rho.copy(), self.bases,
                            self.reference_mf, self.time, self.exposure.copy())

    def populations(self):
        return np.clip(np.diag(self.rho).real, 0.0, None)

    def purity(self):
        return float(np.real(np.trace(self.rho @ self.rho)))

    def reduced_density(self, keep):
        """Partial trace keeping the listed qubits, in the order given."""
        keep = list(keep)
        n = self.n_qubits
        t = self.rho.reshape([2] * (2 * n))
        drop = [q for q in range(n) if q not in keep]
        for count, q in enumerate(sorted(drop)):
            axis = q - count  # earlier traces shrink the index space
            t = np.trace(t, axis1=axis, axis2=axis + (n - count))
        remaining = [q for q in range(n) if q not in drop]
        m = len(keep)
        order = [remaining.index(q) for q in keep]
        t = t.reshape([2] * (2 * m)).transpose(order + [o + m for o in order])
        return t.reshape(2**m, 2**m)

    def probability_one(self, qubit):
        bits = bit_table(self.n_qubits)[:, qubit]
        return float(self.populations()[bits == 1].sum())


def prepare_state(n_qubits, spec=None, assignment=None):
    """Fresh register state: |0...0>, a bitstring, a ket vector, or a density matrix."""
    dim = 2**n_qubits
    if spec is None:
        rho = np.zeros((dim, dim), dtype=complex)
        rho[0, 0] = 1.0
    elif isinstance(spec, str):
        v = ket(spec)
        if v.size != dim:
            raise EngineError(f"bitstring {spec!r} does not match {n_qubits} qubits")
        rho = np.outer(v, v.conj())
    else:
        arr = np.asarray(spec, dtype=complex)
        if arr.ndim == 1:
            if arr.size != dim:
                raise EngineError("state vector has wrong dimension")
            arr = arr / np.linalg.norm(arr)
            rho = np.outer(arr, arr.conj())
        else:
            rho = arr
    bases = getattr(assignment, "bases", assignment)
    if bases is None:
        bases = (BASIS_SIGMA_MINUS,) * n_qubits
    # reference moment for coupling sign bookkeeping; a qubit calibrated while
    # parked in pi is assigned the sigma- reference for later re-housing
    reference = tuple(MF[b] if MF[b] != 0 else -1 for b in bases)
    return QuantumState(n_qubits, rho, tuple(bases), reference)


def _check_couplings(j, n_qubits):
    j = np.asarray(j, dtype=float)
    if j.shape != (n_qubits, n_qubits):
        raise EngineError(f"coupling matrix shape {j.shape} != {(n_qubits, n_qubits)}")
    if not np.allclose(j, j.T):
        raise EngineError("coupling matrix must be symmetric")
    return j


def apply_unitary(state, u):
    state.rho = u @ state.rho @ u.conj().T


def apply_rotation(state, qubit, theta, phi=0.0):
    apply_unitary(state, embed(rotation_2x2(theta, phi), qubit, state.n_qubits))


def apply_phase_shift(state, qubit, phi):
    apply_unitary(state, embed(phase_2x2(phi), qubit, state.n_qubits))


def sensitivity(state):
    """Per-qubit coupling sign factor relative to the calibration encoding."""
    return np.array([MF[b] * r for b, r in zip(state.bases, state.reference_mf)], dtype=float)


def window_couplings(j, state):
    s = sensitivity(state)
    return j * np.outer(s, s)


def _dephase(state, duration, noise):
    if not (noise.dephasing and duration > 0):
        return
    rates = np.array([noise.rate_for(b) for b in state.bases])
    bits = bit_table(state.n_qubits)
    differs = bits[:, None, :] != bits[None, :, :]
    damp = np.exp(-duration * (differs * rates).sum(axis=-1))
    state.rho = state.rho * damp


def free_evolution(state, duration, j, noise=None):
    """One window: Ising phases under the current encoding pattern, then dephasing."""
    if duration < 0:
        raise EngineError("window duration must be >= 0")
    noise = noise or NoiseModel.off()
    j = _check_couplings(j, state.n_qubits)
    phases = free_phases(window_couplings(j, state), duration, state.n_qubits)
    u = np.exp(1j * phases)
    state.rho = state.rho * np.outer(u, u.conj())
    _dephase(state, duration, noise)
    state.time += duration
    in_pi = np.array([b == BASIS_PI for b in state.bases])
    state.exposure[~in_pi, 0] += duration
    state.exposure[in_pi, 1] += duration


def transfer_basis(state, qubit, target):
    if target not in BASES:
        raise EngineError(f"unknown encoding basis {target!r}")
    qubits = range(state.n_qubits) if qubit == "all" else [qubit]
    bases = list(state.bases)
    for q in qubits:
        bases[q] = target
    state.bases = tuple(bases)


def dd_phase_sequence(n_pulses, scheme="cpmg"):
    """Pulse phases for a decoupling train of n_pulses pi rotations.

    cpmg: all pulses along the y axis (phase pi/2); even counts only so the
    train closes to the identity.
    kdd: five-pulse composite blocks (pi/6, 0, pi/2, 0, pi/6) with every other
    block advanced by pi/2; counts must be a multiple of ten, and the train is
    the identity up to global phase at multiples of twenty.
    """
    if scheme not in DD_SCHEMES:
        raise ProgramError(f"unknown decoupling scheme {scheme!r}")
    if scheme == "cpmg":
        if n_pulses % 2:
            raise ProgramError("cpmg pulse count must be even")
        return [np.pi / 2] * n_pulses
    if n_pulses % 10:
        raise ProgramError("kdd pulse count must be a multiple of 10")
    block = (np.pi / 6, 0.0, np.pi / 2, 0.0, np.pi / 6)
    phases = []
    for b in range(n_pulses // 5):
        shift = (np.pi / 2) * (b % 2)
        phases.extend(p + shift for p in block)
    return phases


def dd_fragment(duration, n_pulses, scheme="cpmg", n_qubits=3, qubits=None):
    """Expand one window into [tau/2, pi, tau, pi, ..., pi, tau/2] instructions."""
    phases = dd_phase_sequence(n_pulses, scheme)
    targets = list(range(n_qubits)) if qubits is None else list(qubits)
    tau = duration / n_pulses
    instructions = [FreeEvolve(tau / 2)]
    for k, ph in enumerate(phases):
        for q in targets:
            instructions.append(Rotate(q, np.pi, ph))
        instructions.append(FreeEvolve(tau if k < n_pulses - 1 else tau / 2))
    return PulseProgram(n_qubits=n_qubits, instructions=instructions,
                        name=f"dd {scheme} n={n_pulses}")


def selective_recoupling_wrap(duration, echo_qubit, n_qubits=3):
    """Free evolution with a mid-window echo that cancels every coupling to one spin.

    [T/2, pi on k, T/2, pi on k]: the pi pair flips the sign of each zz term
    involving qubit k for the second half, so those phases cancel while the
    rest accumulate the full duration. The trailing pi restores k's frame.
    """
    if duration <= 0:
        raise EngineError("recoupling window must have positive duration")
    instructions = [
        FreeEvolve(duration / 2),
        Rotate(echo_qubit, np.pi, 0.0),
        FreeEvolve(duration / 2),
        Rotate(echo_qubit, np.pi, 0.0),
    ]
    return PulseProgram(n_qubits=n_qubits, instructions=instructions,
                        name=f"recouple echo q{echo_qubit}")


def _expand(program):
    for ins in program.instructions:
        if isinstance(ins, FreeEvolve) and ins.dd_pulses:
            frag = dd_fragment(ins.duration, ins.dd_pulses, ins.dd_scheme, program.n_qubits)
            yield from frag.instructions
        else:
            yield ins


@dataclass
class RunResult:
    state: QuantumState
    log: list = field(default_factory=list)
    measured: bool = False

    @property
    def duration(self):
        return self.state.time


def _relabel(state, perm):
    p = permutation_matrix(perm)
    state.rho = p @ state.rho @ p.T
    state.bases = tuple(state.bases[q] for q in perm)
    state.reference_mf = tuple(state.reference_mf[q] for q in perm)
    state.exposure = state.exposure[list(perm)]


def run_program(program, j, noise=None, initial=None, assignment=None,
                pulse_duration=0.0, keep_log=False):
    """Execute a pulse program and return the final (noisy) register state.

    `j` is the coupling matrix calibrated for the starting encodings. With
    pulse_duration > 0 each pulse contributes that much dephasing exposure
    while the Ising evolution stays frozen (driven qubits are spin-locked).
    """
    noise = noise or NoiseModel()
    j = _check_couplings(j, program.n_qubits)
    if isinstance(initial, QuantumState):
        state = initial.copy()
    else:
        state = prepare_state(program.n_qubits, initial, assignment)
    log = []

    def note(text):
        if keep_log:
            log.append((state.time, text))

    measured = False
    for ins in _expand(program):
        if measured:
            raise ProgramError("MEAS must be the last instruction")
        if isinstance(ins, Rotate):
            apply_rotation(state, ins.qubit, ins.theta, ins.phi)
            note(f"R q{ins.qubit} theta={ins.theta:.6g} phi={ins.phi:.6g}")
            if pulse_duration > 0:
                _dephase(state, pulse_duration, noise)
                state.time += pulse_duration
        elif isinstance(ins, Echo):
            apply_rotation(state, ins.qubit, np.pi, ins.phi)
            note(f"ECHO q{ins.qubit} phi={ins.phi:.6g}")
            if pulse_duration > 0:
                _dephase(state, pulse_duration, noise)
                state.time += pulse_duration
        elif isinstance(ins, PhaseShift):
            apply_phase_shift(state, ins.qubit, ins.phi)
            note(f"PH q{ins.qubit} phi={ins.phi:.6g}")
        elif isinstance(ins, FreeEvolve):
            free_evolution(state, ins.duration, j, noise)
            note(f"EV {ins.duration:.6g}s")
        elif isinstance(ins, TransferBasis):
            transfer_basis(state, ins.qubit, ins.target)
            note(f"XFER {ins.qubit} -> {ins.target}")
        elif isinstance(ins, Measure):
            measured = True
            note("MEAS")
        else:
            raise ProgramError(f"cannot execute instruction {ins!r}")
    if program.relabel is not None:
        _relabel(state, program.relabel)
        note(f"RELABEL {program.relabel}")
    if noise.white_noise and noise.white_noise_fraction > 0:
        dim = 2**state.n_qubits
        zeta = noise.white_noise_fraction
        state.rho = zeta * np.eye(dim) / dim + (1 - zeta) * state.rho
        note(f"white noise zeta={zeta:.4g}")
    return RunResult(state=state, log=log, measured=measured)


def program_unitary(program, j, assignment=None):
    """Ideal unitary of a program (relabeling included), tracking encoding windows."""
    n = program.n_qubits
    j = _check_couplings(j, n)
    dim = 2**n
    bases = getattr(assignment, "bases", assignment) or (BASIS_SIGMA_MINUS,) * n
    reference = [MF[b] if MF[b] != 0 else -1 for b in bases]
    bases = list(bases)
    u = np.eye(dim, dtype=complex)
    seen_meas = False
    for ins in _expand(program):
        if seen_meas:
            raise ProgramError("MEAS must be the last instruction")
        if isinstance(ins, Rotate):
            u = embed(rotation_2x2(ins.theta, ins.phi), ins.qubit, n) @ u
        elif isinstance(ins, Echo):
            u = embed(rotation_2x2(np.pi, ins.phi), ins.qubit, n) @ u
        elif isinstance(ins, PhaseShift):
            u = embed(phase_2x2(ins.phi), ins.qubit, n) @ u
        elif isinstance(ins, FreeEvolve):
            s = np.array([MF[b] * r for b, r in zip(bases, reference)], dtype=float)
            phases = free_phases(j * np.outer(s, s), ins.duration, n)
            u = np.diag(np.exp(1j * phases)) @ u
        elif isinstance(ins, TransferBasis):
            targets = range(n) if ins.qubit == "all" else [ins.qubit]
            for q in targets:
                bases[q] = ins.target
        elif isinstance(ins, Measure):
            seen_meas = True
        else:
            raise ProgramError(f"cannot build a unitary for {ins!r}")
    if program.relabel is not None:
        u = permutation_matrix(program.relabel).astype(complex) @ u
    return u


def apply_readout_confusion(p, fidelity, n_qubits):
    """Symmetric per-qubit classical bit-flip channel on an outcome distribution."""
    p = np.asarray(p, dtype=float)
    bits = bit_table(n_qubits)
    flips = (bits[:, None, :] != bits[None, :, :]).sum(axis=-1)
    c = fidelity ** (n_qubits - flips) * (1 - fidelity) ** flips
    return c @ p


def measurement_probabilities(state, noise=None):
    """Outcome distribution over basis states, with readout error if enabled."""
    noise = noise or NoiseModel.off()
    p = state.populations()
    p = p / p.sum()
    if noise.readout and noise.readout_fidelity < 1.0:
        p = apply_readout_confusion(p, noise.readout_fidelity, state.n_qubits)
    return p


def sample_counts(p, shots, rng):
    """Multinomial shot counts for a distribution; rng must be a numpy Generator."""
    if shots <= 0:
        raise EngineError("shots must be positive")
    if rng is None:
        raise EngineError("finite-shot sampling needs an explicit rng")
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    return rng.multinomial(shots, p / p.sum())


def ramsey_program(qubit, duration, analysis_phase, n_qubits=3, spectator_bits=None,
                   dd_pulses=0, dd_scheme="cpmg"):
    """Conditional-precession probe: pi/2 - wait - pi/2(phase) on one qubit.

    Spectators listed in `spectator_bits` (qubit -> 0/1) are flipped into the
    requested basis state before the probe pulse.
    """
    ins = []
    for q, bit in sorted((spectator_bits or {}).items()):
        if q == qubit:
            raise ProgramError("probe qubit cannot be its own spectator")
        if bit:
            ins.append(Rotate(q, np.pi, 0.0))
    ins.append(Rotate(qubit, np.pi / 2, 0.0))
    ins.append(FreeEvolve(duration, dd_pulses, dd_scheme))
    ins.append(Rotate(qubit, np.pi / 2, analysis_phase))
    return PulseProgram(n_qubits=n_qubits, instructions=ins,
                        name=f"ramsey q{qubit} T={duration:.6g}")


def ramsey_scan(qubit, duration, phases, j, noise=None, n_qubits=3,
                spectator_bits=None, dd_pulses=0, dd_scheme="cpmg"):
    """Bright-state probability of the probe qubit versus analysis phase."""
    out = np.empty(len(phases))
    for k, phi in enumerate(phases):
        prog = ramsey_program(qubit, duration, phi, n_qubits, spectator_bits,
                              dd_pulses, dd_scheme)
        res = run_program(prog, j, noise=noise)
        out[k] = res.state.probability_one(qubit)
    return out


def fringe_scan(state, qubit, phases):
    """Analysis-pulse scan on a finished state: P(bright) after R(pi/2, phi)."""
    out = np.empty(len(phases))
    for k, phi in enumerate(phases):
        probe = state.copy()
        apply_rotation(probe, qubit, np.pi / 2, phi)
        out[k] = probe.probability_one(qubit)
    return out
