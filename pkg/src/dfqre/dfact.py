"""Two-step (double) factorization of the two-electron tensor.

Stage 1 eigendecomposes the symmetric pair matrix V[(ij),(kl)] = (ij|kl)
in its packed n(n+1)/2-dimensional form; stage 2 eigendecomposes each
kept leaf matrix. The result rewrites the Hamiltonian as a corrected
one-body part plus a weighted sum of squared one-body operators:

    H = core + sum_ij hbar_ij E_ij + 1/2 sum_r c_r (sum_ij L^r_ij E_ij)^2

with E_ij the spin-summed excitation operator, hbar the reordering
correction of the bare h1, and L^r = sum_m lambda^r_m R^r_m (R^r_m)^T the
stage-2 eigendecomposition of leaf r.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .ingest import IntegralSet

# Relative cutoff below which an eigenvalue counts as numerically zero.
# Zero-drops do not consume the truncation budget; they express rank.
ZERO_EIG_RTOL = 1e-12

# Spin multiplicity factor entering lambda_V. Each squared one-body factor
# sums over both spin sectors (2 per factor, 4 for the square) and the 1/2
# prefactor of the two-body term leaves 8/4 = 2; the factor is pinned by
# the Fock-space bound oracle in the verification module, which it makes
# tight on one-orbital inputs.
SPIN_SQUARE_FACTOR = 8.0


@dataclass(frozen=True)
class DFLeaf:
    """One first-stage eigenpair with its own spectral decomposition.

    ``vecs[m]`` is the unit eigenvector belonging to ``eigvals[m]``; the
    leaf matrix is reassembled as vecs.T @ diag(eigvals) @ vecs.
    """

    index: int
    weight: float
    eigvals: np.ndarray
    vecs: np.ndarray

    def __post_init__(self):
        eigvals = np.asarray(self.eigvals, dtype=float)
        vecs = np.asarray(self.vecs, dtype=float)
        object.__setattr__(self, "eigvals", eigvals)
        object.__setattr__(self, "vecs", vecs)
        if vecs.shape[0] != eigvals.shape[0]:
            raise ValidationError("leaf eigval/vector count mismatch")
        gram = vecs @ vecs.T
        if np.abs(gram - np.eye(len(eigvals))).max(initial=0.0) > 1e-10:
            raise ValidationError("leaf eigenvectors are not orthonormal")
        if np.any(np.diff(np.abs(eigvals)) > 1e-15):
            raise ValidationError("leaf eigenvalues not sorted by magnitude")

    @property
    def n_eigs(self) -> int:
        return len(self.eigvals)

    def matrix(self) -> np.ndarray:
        """The n x n symmetric leaf matrix, exactly symmetric entrywise."""
        return np.einsum("m,mi,mj->ij", self.eigvals, self.vecs, self.vecs)


@dataclass(frozen=True)
class DFDecomposition:
    n_orb: int
    core_energy: float
    h_bar: np.ndarray
    leaves: tuple[DFLeaf, ...]
    tol_first: float
    tol_second: float
    # Rigorous bound on the packed-pair-matrix 2-norm of the reconstruction
    # error, accumulated from the actually discarded eigenvalue mass.
    truncation_bound: float = 0.0

    def __post_init__(self):
        h_bar = np.asarray(self.h_bar, dtype=float)
        object.__setattr__(self, "h_bar", h_bar)
        object.__setattr__(self, "leaves", tuple(self.leaves))
        if h_bar.shape != (self.n_orb, self.n_orb):
            raise ValidationError("h_bar shape mismatch")
        if np.abs(h_bar - h_bar.T).max(initial=0.0) > 1e-12:
            raise ValidationError("h_bar is not symmetric within 1e-12")
        if len(self.leaves) > self.n_orb * (self.n_orb + 1) // 2:
            raise ValidationError("more leaves than pair-matrix dimension")

    @property
    def n_leaves(self) -> int:
        return len(self.leaves)

    @property
    def total_leaf_eigs(self) -> int:
        return sum(leaf.n_eigs for leaf in self.leaves)

    def dims(self) -> "tuple[int, int, int]":
        """(n_orb, leaf count R, total stage-2 eigenpair count)."""
        return (self.n_orb, self.n_leaves, self.total_leaf_eigs)

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "n_orb": self.n_orb,
            "core_energy": self.core_energy,
            "h_bar": self.h_bar.tolist(),
            "tol_first": self.tol_first,
            "tol_second": self.tol_second,
            "truncation_bound": self.truncation_bound,
            "leaves": [
                {
                    "index": leaf.index,
                    "weight": leaf.weight,
                    "eigvals": leaf.eigvals.tolist(),
                    "vecs": leaf.vecs.tolist(),
                }
                for leaf in self.leaves
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), indent=1)

    @classmethod
    def from_json_dict(cls, data: dict) -> "DFDecomposition":
        leaves = tuple(
            DFLeaf(index=entry["index"], weight=entry["weight"],
                   eigvals=np.array(entry["eigvals"], dtype=float),
                   vecs=np.array(entry["vecs"], dtype=float))
            for entry in data["leaves"]
        )
        return cls(n_orb=data["n_orb"], core_energy=data["core_energy"],
                   h_bar=np.array(data["h_bar"], dtype=float), leaves=leaves,
                   tol_first=data["tol_first"], tol_second=data["tol_second"],
                   truncation_bound=data.get("truncation_bound", 0.0))

    @classmethod
    def loads(cls, text: str) -> "DFDecomposition":
        return cls.from_json_dict(json.loads(text))


# ---------------------------------------------------------------------------
# Packed pair-matrix helpers

def _pair_indices(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Upper-triangle pair list (i <= j) with isometry weights.

    Off-diagonal pairs carry sqrt(2) so that packed vectors inherit the
    Frobenius inner product of the symmetric matrices they represent.
    """
    iu, ju = np.triu_indices(n)
    w = np.where(iu == ju, 1.0, math.sqrt(2.0))
    return iu, ju, w


def pack_pair_matrix(h2: np.ndarray) -> np.ndarray:
    """The packed symmetric matrix V[(ij),(kl)] = w_ij w_kl (ij|kl)."""
    n = h2.shape[0]
    iu, ju, w = _pair_indices(n)
    v = h2[iu[:, None], ju[:, None], iu[None, :], ju[None, :]]
    return v * w[:, None] * w[None, :]


def unpack_pair_vector(vec: np.ndarray, n: int) -> np.ndarray:
    """Invert pack_pair_matrix's vector isometry to a symmetric matrix."""
    iu, ju, w = _pair_indices(n)
    mat = np.zeros((n, n))
    vals = vec / w
    mat[iu, ju] = vals
    mat[ju, iu] = vals
    return mat


def _fix_sign(vec: np.ndarray) -> np.ndarray:
    """Make the first significant component positive (tie-break rule)."""
    scale = np.abs(vec).max()
    if scale == 0.0:
        return vec
    significant = np.nonzero(np.abs(vec) > 1e-8 * scale)[0]
    lead = significant[0] if len(significant) else int(np.argmax(np.abs(vec)))
    return -vec if vec[lead] < 0 else vec


def _truncate_by_magnitude(eigvals: np.ndarray, tol: float
                           ) -> tuple[np.ndarray, float]:
    """Indices to keep under the discarded-|eigenvalue| budget ``tol``.

    Numerically zero eigenvalues (relative to the largest) are always
    dropped and do not consume the budget. Returns (kept order, discarded
    absolute mass) with kept indices sorted by |eigenvalue| descending.
    """
    magnitudes = np.abs(eigvals)
    top = magnitudes.max(initial=0.0)
    order = np.argsort(-magnitudes, kind="stable")
    live = order[magnitudes[order] > ZERO_EIG_RTOL * top] if top > 0 else order[:0]
    discarded = float(magnitudes.sum() - magnitudes[live].sum())

    if tol > 0 and len(live):
        tail = magnitudes[live][::-1]
        budget_used = np.cumsum(tail)
        n_drop = int(np.searchsorted(budget_used, tol, side="right"))
        if n_drop:
            discarded += float(budget_used[n_drop - 1])
            live = live[: len(live) - n_drop]
    return live, discarded


def factorize(integrals: IntegralSet, tol_first: float = 0.0,
              tol_second: float = 0.0) -> DFDecomposition:
    """Double-factorize an IntegralSet.

    Leaves are kept while the total discarded first-stage |eigenvalue| mass
    stays within ``tol_first``; each leaf's spectrum is truncated under the
    analogous per-leaf ``tol_second`` rule. Output ordering (leaves by
    |weight| descending, eigenvectors with leading component positive)
    makes the result deterministic.
    """
    if not (tol_first >= 0 and tol_second >= 0):
        raise ValidationError("tolerances must be non-negative")
    n = integrals.n_orb

    pair_matrix = pack_pair_matrix(integrals.h2)
    weights, pair_vecs = np.linalg.eigh(pair_matrix)
    if not np.isfinite(weights).all():
        raise NumericalError("non-finite stage-1 eigenvalues")

    kept, discarded_mass = _truncate_by_magnitude(weights, tol_first)
    bound = discarded_mass

    leaf_mats = np.stack(
        [unpack_pair_vector(pair_vecs[:, idx], n) for idx in kept]
    ) if len(kept) else np.zeros((0, n, n))
    if len(kept):
        eigvals_all, vecs_all = np.linalg.eigh(leaf_mats)
        if not np.isfinite(eigvals_all).all():
            raise NumericalError("non-finite stage-2 eigenvalues")

    leaves = []
    for rank_pos, idx in enumerate(kept):
        c_r = float(weights[idx])
        eigvals, vecs = eigvals_all[rank_pos], vecs_all[rank_pos]
        keep_m, dropped = _truncate_by_magnitude(eigvals, tol_second)
        # rank-1 update bound: || vLv^T - v'L'v'^T ||_2 <= 2 |c_r| ||dL||_F
        bound += 2.0 * abs(c_r) * dropped
        rows = np.stack([_fix_sign(vecs[:, m]) for m in keep_m]) \
            if len(keep_m) else np.zeros((0, n))
        leaves.append(DFLeaf(index=rank_pos, weight=c_r,
                             eigvals=eigvals[keep_m], vecs=rows))

    h_bar = integrals.h1 - 0.5 * np.einsum("illj->ij", integrals.h2)
    h_bar = (h_bar + h_bar.T) / 2.0
    return DFDecomposition(n_orb=n, core_energy=integrals.core_energy,
                           h_bar=h_bar, leaves=tuple(leaves),
                           tol_first=float(tol_first),
                           tol_second=float(tol_second),
                           truncation_bound=float(bound))


def reconstruct(df: DFDecomposition) -> np.ndarray:
    """Reassemble the two-electron tensor sum_r c_r L^r_ij L^r_kl.

    The result is exactly 8-fold symmetric entrywise because every leaf
    matrix is assembled symmetrically before the outer product.
    """
    n = df.n_orb
    h2 = np.zeros((n, n, n, n))
    for leaf in df.leaves:
        mat = leaf.matrix()
        h2 += leaf.weight * np.einsum("ij,kl->ijkl", mat, mat)
    return h2


def lambda_norms(df: DFDecomposition) -> tuple[float, float, float]:
    """Block-encoding one-norms (lambda_T, lambda_V, lambda).

    lambda_T sums |eigenvalues| of hbar; lambda_V applies the spin-square
    factor to the weighted squared leaf one-norms. Their sum upper-bounds
    the Fock-space spectral norm of the Hamiltonian shifted by
    ``qpe_energy_offset``.
    """
    lam_t = float(np.abs(np.linalg.eigvalsh(df.h_bar)).sum())
    lam_v = 0.25 * SPIN_SQUARE_FACTOR * sum(
        abs(leaf.weight) * float(np.abs(leaf.eigvals).sum()) ** 2
        for leaf in df.leaves
    )
    return lam_t, lam_v, lam_t + lam_v


def qpe_energy_offset(df: DFDecomposition) -> float:
    """Energy shift folded out of the walk operator's block encoding.

    Phase estimation reads eigenvalues of H - offset, scaled by lambda;
    the offset collects the core energy and the one-body trace term that
    the symmetric (+-1/2 occupation) encoding removes.
    """
    return df.core_energy + float(np.trace(df.h_bar))


def choose_tolerances(integrals: IntegralSet, eps_target: float
                      ) -> tuple[float, float]:
    """Equal-split truncation tolerances meeting ``eps_target``.

    Returns tol_first = tol_second = t such that the rigorous deviation
    bound t*(1 + 2*S) stays below eps_target/2, where S is the total
    first-stage |eigenvalue| mass. The other half of eps_target is left
    for phase estimation.
    """
    if not eps_target > 0:
        raise ValidationError("eps_target must be positive")
    if math.isinf(eps_target):
        return (math.inf, math.inf)
    weights = np.linalg.eigvalsh(pack_pair_matrix(integrals.h2))
    total_mass = float(np.abs(weights).sum())
    t = (eps_target / 2.0) / (1.0 + 2.0 * total_mass)
    return (t, t)
