"""Dense statevectors over a bipartite register.

Qubits are ordered big-endian; the first `alice_qubits` belong to Alice and
the rest to Bob. An amplitude vector reshapes to a 2^a x 2^b matrix M with
psi = sum_ij M[i, j] |i>_A |j>_B, which is the form every routine works in.
"""

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from ..errors import NotSameReduction

logger = logging.getLogger(__name__)

MAX_QUBITS = 12
NORM_TOL = 1e-12
MATRIX_TOL = 1e-10
SAME_REDUCTION_TOL = 1e-10

H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


class Side(str, Enum):
    ALICE = "alice"
    BOB = "bob"


@dataclass(frozen=True, eq=False)
class QuantumState:
    amplitudes: np.ndarray
    alice_qubits: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        q = int(np.log2(len(amps))) if len(amps) else 0
        if len(amps) != 1 << q:
            raise ValueError(f"amplitude vector length {len(amps)} is not a power of two")
        if q > MAX_QUBITS:
            raise ValueError(f"{q} qubits exceed the dense limit of {MAX_QUBITS}")
        if not 0 <= self.alice_qubits <= q:
            raise ValueError(f"Alice's partition of {self.alice_qubits} qubits does not fit {q} qubits")
        if abs(np.linalg.norm(amps) - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm {np.linalg.norm(amps):.15f})")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def qubits(self) -> int:
        return int(np.log2(len(self.amplitudes)))

    @property
    def bob_qubits(self) -> int:
        return self.qubits - self.alice_qubits

    def matrix(self) -> np.ndarray:
        return self.amplitudes.reshape(1 << self.alice_qubits, 1 << self.bob_qubits)

    def repartition(self, alice_qubits: int) -> "QuantumState":
        return QuantumState(self.amplitudes, alice_qubits)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {rho.shape}")
        if not np.allclose(rho, rho.conj().T, atol=MATRIX_TOL):
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > MATRIX_TOL:
            raise ValueError(f"density matrix has trace {np.trace(rho).real}")
        if scipy.linalg.eigvalsh(rho).min() < -MATRIX_TOL:
            raise ValueError("density matrix is not positive semidefinite")
        object.__setattr__(self, "entries", rho)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class LocalUnitary:
    """A unitary acting on Alice's partition only."""

    matrix: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.matrix, dtype=complex)
        if not np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=MATRIX_TOL):
            raise ValueError("matrix is not unitary")
        object.__setattr__(self, "matrix", u)

    def inverse(self) -> "LocalUnitary":
        return LocalUnitary(self.matrix.conj().T)


def basis_state(bits: str, alice_qubits: int) -> QuantumState:
    amps = np.zeros(1 << len(bits), dtype=complex)
    amps[int(bits, 2)] = 1.0
    return QuantumState(amps, alice_qubits)


def from_terms(terms: dict[str, complex], alice_qubits: int) -> QuantumState:
    """Build a state from {bitstring: amplitude}; normalizes the result."""
    width = len(next(iter(terms)))
    amps = np.zeros(1 << width, dtype=complex)
    for bits, amp in terms.items():
        amps[int(bits, 2)] += amp
    return QuantumState(amps / np.linalg.norm(amps), alice_qubits)


def apply_gate(state: QuantumState, gate: np.ndarray, qubit: int) -> QuantumState:
    """Apply a single-qubit gate to one qubit of the register."""
    q = state.qubits
    tensor = state.amplitudes.reshape([2] * q)
    tensor = np.moveaxis(np.tensordot(gate, tensor, axes=([1], [qubit])), 0, qubit)
    return QuantumState(tensor.reshape(-1), state.alice_qubits)


def apply_local(state: QuantumState, u: LocalUnitary) -> QuantumState:
    """(U tensor I) psi."""
    return QuantumState((u.matrix @ state.matrix()).reshape(-1), state.alice_qubits)


def project(state: QuantumState, qubit: int, outcome: int) -> tuple[float, QuantumState | None]:
    """Probability of measuring `outcome` on `qubit` and the normalized post-measurement state."""
    tensor = state.amplitudes.reshape([2] * state.qubits).copy()
    index = [slice(None)] * state.qubits
    index[qubit] = 1 - outcome
    tensor[tuple(index)] = 0
    prob = float(np.vdot(tensor, tensor).real)
    if prob < NORM_TOL:
        return 0.0, None
    return prob, QuantumState(tensor.reshape(-1) / np.sqrt(prob), state.alice_qubits)


def measure(state: QuantumState, qubit: int, rng: np.random.Generator) -> tuple[int, QuantumState]:
    p1, post1 = project(state, qubit, 1)
    if rng.random() < p1:
        return 1, post1
    return 0, project(state, qubit, 0)[1]


def partial_trace(state: QuantumState, keep: Side) -> DensityMatrix:
    m = state.matrix()
    if keep is Side.BOB:
        return DensityMatrix(m.T @ m.conj())
    return DensityMatrix(m @ m.conj().T)


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    eig = scipy.linalg.eigvalsh(rho.entries - sigma.entries)
    return float(min(1.0, 0.5 * np.abs(eig).sum()))


def fidelity(psi: QuantumState, phi: QuantumState) -> float:
    """|<psi|phi>|^2; global phase drops out."""
    return float(abs(np.vdot(psi.amplitudes, phi.amplitudes)) ** 2)


def schmidt_decompose(state: QuantumState) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coefficients (descending), Alice vectors as columns, Bob vectors as rows.

    Zero coefficients are dropped.
    """
    u, s, vh = scipy.linalg.svd(state.matrix(), full_matrices=False)
    rank = int(np.sum(s > 1e-12))
    return s[:rank], u[:, :rank], vh[:rank, :]


def hjw_unitary(psi: QuantumState, phi: QuantumState) -> LocalUnitary:
    """Alice-side unitary U with (U tensor I) psi = phi.

    Both states must reduce to the same state on Bob's side. Writing both in
    Bob's eigenbasis, U is the unitary least-squares alignment of psi's
    Alice-side matrix onto phi's, which is exact under that precondition and
    handles degenerate spectra without choosing Schmidt bases.
    """
    if psi.alice_qubits != phi.alice_qubits or psi.qubits != phi.qubits:
        raise ValueError("states must share the same partition")
    d = trace_distance(partial_trace(psi, Side.BOB), partial_trace(phi, Side.BOB))
    if d >= SAME_REDUCTION_TOL:
        raise NotSameReduction(f"Bob's reduced states differ (trace distance {d:.3g})", distance=d)
    m, n = psi.matrix(), phi.matrix()
    w, _, vh = scipy.linalg.svd(n @ m.conj().T)
    u = LocalUnitary(w @ vh)
    residual = np.linalg.norm(u.matrix @ m - n)
    logger.debug(f"hjw alignment residual {residual:.3g}")
    return u
