"""Parsers for molecular geometries and electron-integral files, plus a
deterministic generator of synthetic integral sets for oracle testing.

File formats
------------
XYZ geometry::

    [count]            optional first line, a bare integer
    [comment/label]    present only when the count line is
    Sym  x  y  z       one atom per line, coordinates in Angstrom

Integral file::

    NORB <n>
    # comment lines start with '#'
    <value> i j k l    two-electron integral (ij|kl), 1-based indices
    <value> i j 0 0    one-electron integral h_ij
    <value> 0 0 0 0    core energy

Only one canonical representative per 8-fold symmetry class is required;
all permutational images are filled in on read.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyInputError, ParseError, ValidationError

# Recognized element symbols, H through Zn. Heavier species are rejected.
ELEMENTS = (
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne",
    "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar", "K", "Ca",
    "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn",
)
_ELEMENT_LOOKUP = {sym.lower(): sym for sym in ELEMENTS}

DUPLICATE_TOL = 1e-10


def normalize_element(symbol: str) -> str:
    """Return the canonical capitalization of ``symbol``.

    Raises ValidationError for anything outside H..Zn.
    """
    try:
        return _ELEMENT_LOOKUP[symbol.lower()]
    except KeyError:
        raise ValidationError(f"unknown element symbol {symbol!r}") from None


@dataclass(frozen=True)
class Atom:
    element: str
    position: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "element", normalize_element(self.element))
        pos = tuple(float(c) for c in self.position)
        if len(pos) != 3 or not all(math.isfinite(c) for c in pos):
            raise ValidationError(f"bad coordinates {self.position!r}")
        object.__setattr__(self, "position", pos)


@dataclass(frozen=True)
class Geometry:
    label: str
    atoms: tuple[Atom, ...]

    def __post_init__(self):
        if not self.atoms:
            raise ValidationError("geometry has no atoms")
        object.__setattr__(self, "atoms", tuple(self.atoms))

    def __len__(self) -> int:
        return len(self.atoms)


def parse_xyz(text: str, label: str = "") -> Geometry:
    """Parse XYZ-format text into a Geometry.

    A leading bare-integer count line (with the following line taken as a
    comment/label) is tolerated but not required. Atom order is preserved.
    """
    lines = text.splitlines()
    numbered = [(i + 1, ln.strip()) for i, ln in enumerate(lines)]
    rows = [(no, ln) for no, ln in numbered if ln]
    if not rows:
        raise EmptyInputError("no data lines in XYZ input")

    first_no, first = rows[0]
    if len(first.split()) == 1 and _is_int(first):
        rows = rows[1:]  # count line; the value itself is not enforced
        if rows and not _looks_like_atom_row(rows[0][1]):
            label = rows[0][1] if not label else label
            rows = rows[1:]
    if not rows:
        raise EmptyInputError("no data lines in XYZ input")

    atoms = []
    for no, ln in rows:
        parts = ln.split()
        if len(parts) != 4:
            raise ParseError(f"expected 'Sym x y z', got {ln!r}", line=no)
        sym, *coords = parts
        if sym.lower() not in _ELEMENT_LOOKUP:
            raise ParseError(f"unknown element symbol {sym!r}", line=no)
        try:
            xyz = tuple(float(c) for c in coords)
        except ValueError:
            raise ParseError(f"non-numeric coordinate in {ln!r}", line=no) from None
        if not all(math.isfinite(c) for c in xyz):
            raise ParseError(f"non-finite coordinate in {ln!r}", line=no)
        atoms.append(Atom(sym, xyz))
    return Geometry(label=label, atoms=tuple(atoms))


def serialize_xyz(geom: Geometry) -> str:
    """Render a Geometry back to XYZ text (count line, label, atom rows).

    Floats use shortest round-trip formatting, so serialize -> parse ->
    serialize is byte-stable.
    """
    out = [str(len(geom.atoms)), geom.label]
    for atom in geom.atoms:
        x, y, z = atom.position
        out.append(f"{atom.element} {x!r} {y!r} {z!r}")
    return "\n".join(out) + "\n"


def _is_int(token: str) -> bool:
    try:
        int(token)
        return True
    except ValueError:
        return False


def _looks_like_atom_row(line: str) -> bool:
    parts = line.split()
    if len(parts) != 4 or parts[0].lower() not in _ELEMENT_LOOKUP:
        return False
    try:
        [float(p) for p in parts[1:]]
        return True
    except ValueError:
        return False


# ---------------------------------------------------------------------------
# Electron integrals


@dataclass(frozen=True)
class IntegralSet:
    """One- and two-electron integrals over spatial orbitals, in Hartree.

    ``h2`` stores the chemists'-notation tensor (ij|kl) in a dense array
    whose entries are exactly equal across all 8 permutational images.
    """

    n_orb: int
    core_energy: float
    h1: np.ndarray
    h2: np.ndarray

    def __post_init__(self):
        n = self.n_orb
        if n < 1:
            raise ValidationError("n_orb must be positive")
        h1 = np.asarray(self.h1, dtype=float)
        h2 = np.asarray(self.h2, dtype=float)
        object.__setattr__(self, "h1", h1)
        object.__setattr__(self, "h2", h2)
        object.__setattr__(self, "core_energy", float(self.core_energy))
        if h1.shape != (n, n) or h2.shape != (n, n, n, n):
            raise ValidationError("integral array shapes do not match n_orb")
        if not (np.isfinite(h1).all() and np.isfinite(h2).all()
                and math.isfinite(self.core_energy)):
            raise ValidationError("non-finite integral values")
        if np.abs(h1 - h1.T).max(initial=0.0) > 1e-12:
            raise ValidationError("h1 is not symmetric within 1e-12")
        for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
            if not np.array_equal(h2, h2.transpose(perm)):
                raise ValidationError("h2 violates 8-fold index symmetry")


def canonical_pair_index(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i >= j else (j, i)


def canonical_h2_index(i: int, j: int, k: int, l: int) -> tuple[int, int, int, int]:
    """Canonical representative of the 8-fold class of (ij|kl)."""
    ij = canonical_pair_index(i, j)
    kl = canonical_pair_index(k, l)
    return ij + kl if ij >= kl else kl + ij


def parse_integrals(text: str) -> IntegralSet:
    """Parse an integral file into a fully symmetry-expanded IntegralSet."""
    n_orb = None
    core: tuple[float, int] | None = None  # (value, line)
    h1_entries: dict[tuple[int, int], tuple[float, int]] = {}
    h2_entries: dict[tuple[int, int, int, int], tuple[float, int]] = {}

    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n_orb is None:
            parts = line.split()
            if len(parts) != 2 or parts[0].upper() != "NORB":
                raise ParseError("missing 'NORB <n>' header", line=no)
            try:
                n_orb = int(parts[1])
            except ValueError:
                raise ParseError(f"bad orbital count {parts[1]!r}", line=no) from None
            if n_orb < 1:
                raise ParseError("orbital count must be positive", line=no)
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ParseError(f"expected 'value i j k l', got {line!r}", line=no)
        try:
            value = float(parts[0])
            i, j, k, l = (int(p) for p in parts[1:])
        except ValueError:
            raise ParseError(f"malformed record {line!r}", line=no) from None
        if not math.isfinite(value):
            raise ParseError("non-finite integral value", line=no)

        if (i, j, k, l) == (0, 0, 0, 0):
            if core is not None and abs(core[0] - value) > DUPLICATE_TOL:
                raise ParseError(
                    f"conflicting core energy (previous at line {core[1]})", line=no)
            core = (value, no)
        elif k == 0 and l == 0:
            _check_bounds((i, j), n_orb, no)
            key = canonical_pair_index(i, j)
            prev = h1_entries.get(key)
            if prev is not None and abs(prev[0] - value) > DUPLICATE_TOL:
                raise ParseError(
                    f"conflicting h1 record for {key} (previous at line {prev[1]})",
                    line=no)
            h1_entries.setdefault(key, (value, no))
        elif 0 in (i, j, k, l):
            raise ParseError(f"mixed zero/nonzero indices in {line!r}", line=no)
        else:
            _check_bounds((i, j, k, l), n_orb, no)
            key = canonical_h2_index(i, j, k, l)
            prev = h2_entries.get(key)
            if prev is not None and abs(prev[0] - value) > DUPLICATE_TOL:
                raise ParseError(
                    f"conflicting h2 record for {key} (previous at line {prev[1]})",
                    line=no)
            h2_entries.setdefault(key, (value, no))

    if n_orb is None:
        raise ParseError("missing 'NORB <n>' header", line=1)

    h1 = np.zeros((n_orb, n_orb))
    for (i, j), (value, _) in h1_entries.items():
        h1[i - 1, j - 1] = value
        h1[j - 1, i - 1] = value
    h2 = np.zeros((n_orb, n_orb, n_orb, n_orb))
    for (i, j, k, l), (value, _) in h2_entries.items():
        a, b, c, d = i - 1, j - 1, k - 1, l - 1
        for p, q, r, s in ((a, b, c, d), (b, a, c, d), (a, b, d, c), (b, a, d, c),
                           (c, d, a, b), (d, c, a, b), (c, d, b, a), (d, c, b, a)):
            h2[p, q, r, s] = value
    return IntegralSet(n_orb=n_orb, core_energy=core[0] if core else 0.0,
                       h1=h1, h2=h2)


def _check_bounds(indices, n_orb: int, line: int):
    for idx in indices:
        if not 1 <= idx <= n_orb:
            raise ParseError(f"orbital index {idx} outside [1, {n_orb}]", line=line)


def serialize_integrals(integrals: IntegralSet) -> str:
    """Write canonical-representative records for an IntegralSet."""
    n = integrals.n_orb
    out = [f"NORB {n}"]
    if integrals.core_energy != 0.0:
        out.append(f"{integrals.core_energy!r} 0 0 0 0")
    for i in range(n):
        for j in range(i + 1):
            v = float(integrals.h1[i, j])
            if v != 0.0:
                out.append(f"{v!r} {i + 1} {j + 1} 0 0")
    seen = set()
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    key = canonical_h2_index(i + 1, j + 1, k + 1, l + 1)
                    if key in seen:
                        continue
                    seen.add(key)
                    v = float(
                        integrals.h2[key[0] - 1, key[1] - 1, key[2] - 1, key[3] - 1])
                    if v != 0.0:
                        out.append(f"{v!r} {key[0]} {key[1]} {key[2]} {key[3]}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Synthetic integral sets


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a random integral set with a known two-electron rank.

    The PCG64 generator keyed by ``seed`` makes output reproducible; the
    draw order is part of the format and must not change.
    """

    n_orb: int
    rank: int
    magnitude: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_orb < 1:
            raise ValidationError("n_orb must be positive")
        max_rank = self.n_orb * (self.n_orb + 1) // 2
        if not 0 <= self.rank <= max_rank:
            raise ValidationError(
                f"rank {self.rank} outside [0, {max_rank}] for n_orb={self.n_orb}")
        if not (self.magnitude > 0 and math.isfinite(self.magnitude)):
            raise ValidationError("magnitude must be a positive finite number")


def gen_synthetic(spec: SyntheticSpec) -> IntegralSet:
    """Build a random IntegralSet whose two-electron tensor is an exact sum
    of ``spec.rank`` symmetric separable terms c_r * L_ij * L_kl.

    Each L is a unit-Frobenius random symmetric matrix and the weights are
    scaled by 1/sqrt(rank), which keeps the tensor norm near ``magnitude``
    independent of size. The construction gives exact 8-fold symmetry and
    first-stage matrix rank equal to ``spec.rank`` (almost surely).
    """
    n = spec.n_orb
    rng = np.random.Generator(np.random.PCG64(spec.seed))

    raw = rng.standard_normal((n, n))
    h1 = (raw + raw.T) / 2.0 * spec.magnitude
    core = spec.magnitude * rng.standard_normal()

    h2 = np.zeros((n, n, n, n))
    if spec.rank:
        scale = spec.magnitude / math.sqrt(spec.rank)
        for _ in range(spec.rank):
            a = rng.standard_normal((n, n))
            leaf = a + a.T
            leaf /= np.linalg.norm(leaf)
            # magnitudes bounded away from zero so the rank is unambiguous
            weight = scale * (0.5 + rng.random())
            if rng.random() < 0.5:
                weight = -weight
            h2 += weight * np.einsum("ij,kl->ijkl", leaf, leaf)
    return IntegralSet(n_orb=n, core_energy=core, h1=h1, h2=h2)
