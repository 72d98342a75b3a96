"""Desk-scale oracles: dense Fock-space Hamiltonians, factorization
equivalence checks, exact walk operators, and a small phase-estimation
simulator.

Everything here works on the full occupation-number space of dimension
4^n_orb, so it is deliberately capped at small orbital counts. These
routines certify the factorization and cost-model formulas; they are not
simulators of the production circuits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .dfact import DFDecomposition
from .errors import ResourceLimitError, ValidationError
from .ingest import IntegralSet

FOCK_MAX_ORBITALS = 6
QPE_MAX_DIM = 64
QPE_MAX_BITS = 20


@dataclass(frozen=True)
class FockMatrix:
    """Dense Hamiltonian on the occupation-number basis.

    Bit p of a basis index is the occupancy of spin-orbital p, with the
    spin-up block in the low bits: spin-orbital (i, up) = i and
    (i, down) = i + n_orb.
    """

    n_orb: int
    matrix: np.ndarray

    @property
    def n_spin_orb(self) -> int:
        return 2 * self.n_orb

    @property
    def dim(self) -> int:
        return 1 << self.n_spin_orb

    def number_operator(self) -> np.ndarray:
        states = np.arange(self.dim)
        return np.array([bin(s).count("1") for s in states], dtype=float)


def _annihilation_operators(n_spin_orb: int) -> list[sp.csr_matrix]:
    """Sparse a_p for every spin-orbital, with Jordan-Wigner parity signs."""
    dim = 1 << n_spin_orb
    states = np.arange(dim, dtype=np.int64)
    bits = (states[:, None] >> np.arange(n_spin_orb)) & 1
    parity_below = np.concatenate(
        [np.zeros((dim, 1), dtype=np.int64), np.cumsum(bits, axis=1)[:, :-1]],
        axis=1)
    ops = []
    for p in range(n_spin_orb):
        occupied = bits[:, p] == 1
        src = states[occupied]
        dst = src ^ (1 << p)
        sign = 1.0 - 2.0 * (parity_below[occupied, p] % 2)
        ops.append(sp.csr_matrix((sign, (dst, src)), shape=(dim, dim)))
    return ops


def build_fock_matrix(integrals: IntegralSet) -> FockMatrix:
    """Assemble the second-quantized Hamiltonian on the full Fock space.

    The two-body term is built with the operators in their written order
    (a+ a+ a a), so this matrix is independent of any normal-ordering
    identity used elsewhere and can certify those identities.
    """
    n = integrals.n_orb
    if n > FOCK_MAX_ORBITALS:
        raise ResourceLimitError(
            f"n_orb={n} exceeds the dense Fock-space cap of {FOCK_MAX_ORBITALS}")
    nso = 2 * n
    dim = 1 << nso
    lower = _annihilation_operators(nso)
    raise_ = [op.T.tocsr() for op in lower]

    def so(i: int, sigma: int) -> int:
        return i + sigma * n

    ham = sp.identity(dim, format="csr") * integrals.core_energy
    for i in range(n):
        for j in range(n):
            hij = integrals.h1[i, j]
            if hij == 0.0:
                continue
            for sigma in (0, 1):
                ham = ham + hij * (raise_[so(i, sigma)] @ lower[so(j, sigma)])

    # right factors a_l a_j reused across the (i, k) loop
    right: dict[tuple[int, int], sp.csr_matrix] = {}
    for a in range(nso):
        for b in range(nso):
            right[(a, b)] = (lower[a] @ lower[b]).tocsr()
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    coeff = 0.5 * integrals.h2[i, j, k, l]
                    if coeff == 0.0:
                        continue
                    for sigma in (0, 1):
                        for rho in (0, 1):
                            term = raise_[so(i, sigma)] @ (
                                raise_[so(k, rho)] @ right[(so(l, rho), so(j, sigma))])
                            ham = ham + coeff * term
    matrix = np.asarray(ham.todense(), dtype=float)
    return FockMatrix(n_orb=n, matrix=matrix)


def _spin_summed_excitations(n: int) -> list[list[np.ndarray]]:
    """Dense E_ij = sum_sigma a+_{i,sigma} a_{j,sigma} for small n."""
    nso = 2 * n
    lower = _annihilation_operators(nso)
    raise_ = [op.T.tocsr() for op in lower]
    ops = []
    for i in range(n):
        row = []
        for j in range(n):
            e_ij = (raise_[i] @ lower[j] + raise_[i + n] @ lower[j + n])
            row.append(np.asarray(e_ij.todense(), dtype=float))
        ops.append(row)
    return ops


def fock_matrix_of_decomposition(df: DFDecomposition) -> FockMatrix:
    """Fock-space matrix of the factorized Hamiltonian, assembled from
    hbar and the squared one-body leaf operators as written."""
    n = df.n_orb
    if n > 3:
        raise ResourceLimitError("factorized Fock assembly capped at n_orb=3")
    dim = 1 << (2 * n)
    exc = _spin_summed_excitations(n)
    ham = df.core_energy * np.eye(dim)
    for i in range(n):
        for j in range(n):
            if df.h_bar[i, j] != 0.0:
                ham += df.h_bar[i, j] * exc[i][j]
    for leaf in df.leaves:
        mat = leaf.matrix()
        one_body = np.zeros((dim, dim))
        for i in range(n):
            for j in range(n):
                if mat[i, j] != 0.0:
                    one_body += mat[i, j] * exc[i][j]
        ham += 0.5 * leaf.weight * (one_body @ one_body)
    return FockMatrix(n_orb=n, matrix=ham)


def check_df_equivalence(integrals: IntegralSet, df: DFDecomposition) -> float:
    """Spectral-norm deviation between the raw and factorized Hamiltonians.

    For an untruncated decomposition this certifies both the hbar
    correction formula and the spin handling; values above ~1e-9 indicate
    a broken identity (or a truncated input).
    """
    if integrals.n_orb != df.n_orb:
        raise ValidationError("orbital count mismatch between inputs")
    if integrals.n_orb > 3:
        raise ResourceLimitError("equivalence oracle capped at n_orb=3")
    reference = build_fock_matrix(integrals).matrix
    assembled = fock_matrix_of_decomposition(df).matrix
    return float(np.abs(np.linalg.eigvalsh(reference - assembled)).max())


# ---------------------------------------------------------------------------
# Walk operator and phase estimation


def build_walk_operator(hamiltonian: np.ndarray, lam: float) -> np.ndarray:
    """Exact qubitization walk for H/lam via a one-ancilla dilation.

    Returns the unitary W = exp(arcsin(H/lam) (x) [[0,-1],[1,0]]); on the
    two-dimensional invariant subspace of each eigenvalue E of H it is the
    rotation with eigenphases +-arcsin(E/lam), i.e. sin(theta) = E/lam.
    """
    mat = np.asarray(hamiltonian, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValidationError("hamiltonian must be a square matrix")
    scale = max(np.abs(mat).max(initial=0.0), 1.0)
    if np.abs(mat - mat.conj().T).max(initial=0.0) > 1e-10 * scale:
        raise ValidationError("hamiltonian is not Hermitian")
    if not (lam > 0 and math.isfinite(lam)):
        raise ValidationError("lam must be positive and finite")
    evals, evecs = np.linalg.eigh(mat)
    if np.abs(evals).max(initial=0.0) > lam * (1.0 + 1e-12):
        raise ValidationError("lam is smaller than the spectral norm of H")
    scaled = np.clip(evals / lam, -1.0, 1.0)
    cosines = np.sqrt(1.0 - scaled**2)
    block_a = (evecs * scaled) @ evecs.conj().T
    block_c = (evecs * cosines) @ evecs.conj().T
    walk = np.block([[block_c, -block_a], [block_a, block_c]])
    if np.abs(mat.imag).max(initial=0.0) == 0.0:
        walk = walk.real.astype(float)
    return walk


@dataclass(frozen=True)
class WalkSpectrumReport:
    lam: float
    pairs: tuple[tuple[float, float], ...]  # (energy, matched walk phase)
    max_residual: float


def walk_spectrum_report(hamiltonian: np.ndarray, lam: float
                         ) -> WalkSpectrumReport:
    """Match walk eigenphases against arcsin of the spectrum of H/lam.

    Phases are reported in (-pi, pi]; each energy may match either branch
    (theta or pi - theta), both of which satisfy sin(theta) = E/lam.
    """
    walk = build_walk_operator(hamiltonian, lam)
    phases = np.angle(np.linalg.eigvals(walk))
    phases = np.where(phases <= -np.pi + 1e-15, np.pi, phases)
    energies = np.linalg.eigvalsh(np.asarray(hamiltonian))
    pairs = []
    max_residual = 0.0
    for energy in energies:
        residuals = np.abs(np.sin(phases) - energy / lam)
        best = int(np.argmin(residuals))
        pairs.append((float(energy), float(phases[best])))
        max_residual = max(max_residual, float(residuals[best]))
    return WalkSpectrumReport(lam=float(lam), pairs=tuple(pairs),
                              max_residual=max_residual)


@dataclass(frozen=True)
class PhaseSamples:
    """Measured m-bit phase frequencies from a QPE run."""

    m: int
    counts: np.ndarray
    shots: int

    @property
    def phases(self) -> np.ndarray:
        """Phase value (in turns, [0, 1)) of each outcome bin."""
        return np.arange(1 << self.m) / (1 << self.m)

    def mode_phase(self) -> float:
        return float(np.argmax(self.counts)) / (1 << self.m)

    def mass_within(self, phase: float, tol: float) -> float:
        """Fraction of shots within ``tol`` turns of ``phase`` (mod 1)."""
        delta = np.abs((self.phases - phase + 0.5) % 1.0 - 0.5)
        return float(self.counts[delta <= tol + 1e-15].sum()) / self.shots


def run_qpe(unitary: np.ndarray, state: np.ndarray, m: int, shots: int,
            seed: int = 0) -> PhaseSamples:
    """Textbook phase estimation of an eigenvector's phase.

    Controlled powers U^(2^k) are evaluated by repeated dense squaring and
    the inverse Fourier transform is applied to the resulting kickback
    amplitudes; outcomes are sampled from the exact distribution.
    """
    mat = np.asarray(unitary, dtype=complex)
    dim = mat.shape[0]
    if mat.ndim != 2 or mat.shape[1] != dim:
        raise ValidationError("unitary must be a square matrix")
    if dim > QPE_MAX_DIM:
        raise ResourceLimitError(f"dimension {dim} exceeds {QPE_MAX_DIM}")
    if not 1 <= m <= QPE_MAX_BITS:
        raise ValidationError(f"phase bits must lie in [1, {QPE_MAX_BITS}]")
    if shots < 1:
        raise ValidationError("shots must be positive")
    defect = np.abs(mat.conj().T @ mat - np.eye(dim)).max()
    if defect > 1e-10:
        raise ValidationError(f"matrix is not unitary (defect {defect:.2e})")

    vec = np.asarray(state, dtype=complex).reshape(dim)
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise ValidationError("state must be nonzero")
    vec = vec / norm
    eigval = vec.conj() @ (mat @ vec)
    if np.linalg.norm(mat @ vec - eigval * vec) > 1e-9:
        raise ValidationError("state is not an eigenvector of the unitary")

    # kickback phase of each controlled power, from the actual matrix powers
    phase_factors = np.empty(m, dtype=complex)
    power = mat
    for k in range(m):
        mu = vec.conj() @ (power @ vec)
        phase_factors[k] = mu / abs(mu)
        power = power @ power

    amplitudes = np.ones(1, dtype=complex)
    for k in range(m - 1, -1, -1):  # bit k of the ancilla index weights U^(2^k)
        amplitudes = np.kron(amplitudes, [1.0, phase_factors[k]])
    amplitudes = amplitudes / math.sqrt(1 << m)

    transformed = np.fft.fft(amplitudes) / math.sqrt(1 << m)
    probs = np.abs(transformed) ** 2
    probs = np.clip(probs, 0.0, None)
    probs /= probs.sum()
    rng = np.random.Generator(np.random.PCG64(seed))
    counts = rng.multinomial(shots, probs)
    return PhaseSamples(m=m, counts=counts, shots=shots)


def signed_phase(phase_turns: float) -> float:
    """Map a phase in turns ([0,1)) to radians in (-pi, pi]."""
    theta = 2.0 * math.pi * (phase_turns % 1.0)
    if theta > math.pi:
        theta -= 2.0 * math.pi
    return theta
