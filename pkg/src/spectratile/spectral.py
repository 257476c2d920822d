"""Log-Hadamard checking, m-spectral certificates, and spectrum search.

A k-point integer set T in Z^d is m-spectral when some k x d matrix of
multiples of 1/m, multiplied against the d x k matrix whose columns are the
points, yields a log-Hadamard matrix: one whose entrywise exponential
exp(2*pi*i*h) has pairwise orthogonal unimodular rows.  Row orthogonality is
a vanishing sum of m-th roots of unity, so every check here reduces to the
exact cyclotomic decision procedure.

Orthogonality of k distinct rows is the whole criterion in the finite group:
a spectrum matching the set's cardinality is automatically complete, and
certificates store matching cardinalities by construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .cyclotomic import ExponentMultiset, is_vanishing_sum
from .guard import check_guard
from .modlinalg import IntMatrix, format_matrix, matmul_mod, parse_matrix

__all__ = [
    "GroupSpec",
    "PointSet",
    "PhaseMatrix",
    "SpectrumCertificate",
    "is_log_hadamard",
    "is_m_spectral",
    "verify_spectrum",
    "find_spectrum",
    "compose_spectral",
    "lift_spectrum",
    "cube_spectrum",
    "format_point_set",
    "parse_point_set",
    "format_phase_matrix",
    "parse_phase_matrix",
]


@dataclass(frozen=True)
class GroupSpec:
    """The ambient finite group Z_m^d."""

    modulus: int
    dimension: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        if self.dimension < 1:
            raise ValueError(f"dimension must be positive, got {self.dimension}")

    def order(self) -> int:
        return self.modulus**self.dimension

    def elements(self) -> Iterable[tuple[int, ...]]:
        """All group elements in lexicographic order."""
        return itertools.product(range(self.modulus), repeat=self.dimension)


@dataclass(frozen=True)
class PointSet:
    """An ordered set of distinct integer vectors of a common dimension."""

    dimension: int
    points: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError(f"dimension must be positive, got {self.dimension}")
        points = tuple(tuple(int(c) for c in p) for p in self.points)
        if not points:
            raise ValueError("point set must be nonempty")
        for p in points:
            if len(p) != self.dimension:
                raise ValueError(f"point {p} does not have dimension {self.dimension}")
        if len(set(points)) != len(points):
            raise ValueError("points must be distinct")
        object.__setattr__(self, "points", points)

    def __len__(self) -> int:
        return len(self.points)

    @classmethod
    def from_points(cls, points: Sequence[Sequence[int]]) -> "PointSet":
        if not points:
            raise ValueError("point set must be nonempty")
        return cls(len(points[0]), tuple(tuple(p) for p in points))

    def to_columns_matrix(self) -> IntMatrix:
        """The d x k matrix whose j-th column is the j-th point."""
        k = len(self.points)
        return IntMatrix(
            self.dimension,
            k,
            tuple(self.points[j][i] for i in range(self.dimension) for j in range(k)),
        )

    def reduced_mod(self, m: int) -> "PointSet":
        """Pointwise reduction mod m; raises if two points collide."""
        if m < 1:
            raise ValueError(f"modulus must be positive, got {m}")
        reduced = [tuple(c % m for c in p) for p in self.points]
        if len(set(reduced)) != len(reduced):
            raise ValueError("points are not distinct mod m")
        return PointSet(self.dimension, tuple(reduced))

    def translated(self, offset: Sequence[int]) -> "PointSet":
        if len(offset) != self.dimension:
            raise ValueError("offset dimension mismatch")
        return PointSet(
            self.dimension,
            tuple(tuple(c + o for c, o in zip(p, offset)) for p in self.points),
        )


@dataclass(frozen=True)
class PhaseMatrix:
    """Integer numerators over a common denominator m, entries in [0, m).

    Represents a matrix of phases h = numerators/m, the discrete stand-in for
    a real log-Hadamard candidate.
    """

    numerators: IntMatrix
    denominator: int

    def __post_init__(self) -> None:
        if self.denominator < 1:
            raise ValueError(f"denominator must be positive, got {self.denominator}")
        if any(not 0 <= x < self.denominator for x in self.numerators.entries):
            raise ValueError("numerators must be reduced into [0, denominator)")

    @classmethod
    def reduce(cls, numerators: IntMatrix, denominator: int) -> "PhaseMatrix":
        if denominator < 1:
            raise ValueError(f"denominator must be positive, got {denominator}")
        return cls(numerators.reduced_mod(denominator), denominator)

    def row(self, i: int) -> tuple[int, ...]:
        return self.numerators.row(i)

    def transpose(self) -> "PhaseMatrix":
        return PhaseMatrix(self.numerators.transpose(), self.denominator)


@dataclass(frozen=True)
class SpectrumCertificate:
    """A set together with a spectrum witnessing that it is m-spectral.

    Structural consistency is enforced here; soundness is re-checked with
    :func:`verify_spectrum`, which any third party can run from the stored
    fields alone.
    """

    group: GroupSpec
    set: PointSet
    spectrum: PhaseMatrix

    def __post_init__(self) -> None:
        if self.set.dimension != self.group.dimension:
            raise ValueError("set dimension does not match the group")
        if self.spectrum.denominator != self.group.modulus:
            raise ValueError("spectrum denominator does not match the group modulus")
        if self.spectrum.numerators.rows != len(self.set):
            raise ValueError("spectrum must have one row per point")
        if self.spectrum.numerators.cols != self.set.dimension:
            raise ValueError("spectrum row width must equal the dimension")


def _rows_orthogonal(
    row_a: Sequence[int], row_b: Sequence[int], m: int
) -> bool:
    deltas = ((a - b) % m for a, b in zip(row_a, row_b))
    return is_vanishing_sum(ExponentMultiset.from_exponents(m, deltas))


def is_log_hadamard(mat: PhaseMatrix) -> bool:
    """Whether exp(2*pi*i*numerators/m) is a (complex) Hadamard matrix.

    Checks that every pair of distinct rows differs by a vanishing sum of
    m-th roots of unity.  For square matrices of unimodular entries row
    orthogonality already implies column orthogonality, so columns are not
    checked separately.
    """
    if mat.numerators.rows != mat.numerators.cols:
        raise ValueError("log-Hadamard candidates must be square")
    m = mat.denominator
    rows = [mat.row(i) for i in range(mat.numerators.rows)]
    return all(
        _rows_orthogonal(rows[i], rows[j], m)
        for i in range(len(rows))
        for j in range(i + 1, len(rows))
    )


def is_m_spectral(point_set: PointSet, spectrum: PhaseMatrix) -> bool:
    """Whether the spectrum's rows witness spectrality of the set in Z_m^d."""
    if spectrum.numerators.rows != len(point_set):
        raise ValueError("spectrum must have one row per point")
    if spectrum.numerators.cols != point_set.dimension:
        raise ValueError("spectrum row width must equal the set dimension")
    m = spectrum.denominator
    product = matmul_mod(spectrum.numerators, point_set.to_columns_matrix(), m)
    return is_log_hadamard(PhaseMatrix(product, m))


def verify_spectrum(cert: SpectrumCertificate) -> bool:
    return is_m_spectral(cert.set, cert.spectrum)


def _pair_ok(
    candidate: tuple[int, ...],
    chosen: Sequence[tuple[int, ...]],
    points: Sequence[tuple[int, ...]],
    m: int,
) -> bool:
    for row in chosen:
        delta = tuple((a - b) % m for a, b in zip(row, candidate))
        exps = (sum(dc * tc for dc, tc in zip(delta, t)) % m for t in points)
        if not is_vanishing_sum(ExponentMultiset.from_exponents(m, exps)):
            return False
    return True


def find_spectrum(
    point_set: PointSet, m: int, guard: int | None = None
) -> SpectrumCertificate | None:
    """Search for a spectrum with entries in (1/m)Z, or None if none exists.

    None rules out this denominator only; the set may still admit spectra
    with other denominators.

    Backtracking over candidate rows in Z_m^d.  Two reductions make the
    search canonical without losing completeness: spectra are closed under
    adding a constant row vector (row differences are unchanged), so the
    first row is pinned to zero; and row order is irrelevant, so rows are
    required to be strictly increasing lexicographically.  A partial
    assignment is abandoned as soon as one chosen pair fails the vanishing
    sum test.  The first certificate found is therefore the
    lexicographically least one.
    """
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    group = GroupSpec(m, point_set.dimension)
    check_guard(group.order(), guard)
    candidates = list(group.elements())
    k = len(point_set)
    points = point_set.points
    chosen: list[tuple[int, ...]] = [candidates[0]]

    def extend(start: int) -> bool:
        if len(chosen) == k:
            return True
        for idx in range(start, len(candidates)):
            row = candidates[idx]
            if not _pair_ok(row, chosen, points, m):
                continue
            chosen.append(row)
            if extend(idx + 1):
                return True
            chosen.pop()
        return False

    if not extend(1):
        return None
    numerators = IntMatrix(k, point_set.dimension, tuple(c for row in chosen for c in row))
    return SpectrumCertificate(group, point_set, PhaseMatrix(numerators, m))


def compose_spectral(
    cert_t: SpectrumCertificate, cert_s: SpectrumCertificate
) -> SpectrumCertificate:
    """Combine an m-spectral set T and an n-spectral set S into T + mS.

    The composed set pairs every t with every s as t + m*s, and the composed
    spectrum pairs the witness rows as (n*l + q)/(m*n).  The result is
    re-verified before being returned.
    """
    if cert_t.set.dimension != cert_s.set.dimension:
        raise ValueError("composed certificates must share a dimension")
    if not verify_spectrum(cert_t):
        raise ValueError("left certificate fails verification")
    if not verify_spectrum(cert_s):
        raise ValueError("right certificate fails verification")
    m = cert_t.group.modulus
    n = cert_s.group.modulus
    d = cert_t.set.dimension
    cert_t.set.reduced_mod(m)  # raises unless T is distinct mod m
    gamma = tuple(
        tuple(tc + m * sc for tc, sc in zip(t, s))
        for t in cert_t.set.points
        for s in cert_s.set.points
    )
    if len(set(gamma)) != len(gamma):
        raise ValueError("composition collides: T + mS has repeated points")
    rows = tuple(
        tuple((n * lc + qc) % (m * n) for lc, qc in zip(l, q))
        for l in cert_t.spectrum.numerators.to_rows()
        for q in cert_s.spectrum.numerators.to_rows()
    )
    composed = SpectrumCertificate(
        GroupSpec(m * n, d),
        PointSet(d, gamma),
        PhaseMatrix(IntMatrix(len(rows), d, tuple(c for r in rows for c in r)), m * n),
    )
    if not verify_spectrum(composed):
        raise RuntimeError("composed spectrum failed verification; implementation fault")
    return composed


def lift_spectrum(
    point_set: PointSet, transform: IntMatrix, base: SpectrumCertificate
) -> SpectrumCertificate:
    """Pull a spectrum back through an integer linear map.

    If the columns of transform @ T form the base certificate's set (same
    order), then base_spectrum @ transform is a spectrum for T itself over
    the same denominator.
    """
    if transform.cols != point_set.dimension:
        raise ValueError("transform width must equal the set dimension")
    if not verify_spectrum(base):
        raise ValueError("base certificate fails verification")
    mapped = matmul_mod(transform, point_set.to_columns_matrix(), None)
    mapped_points = tuple(mapped.column(j) for j in range(mapped.cols))
    if mapped_points != base.set.points:
        raise ValueError("base certificate's set does not match transform @ T")
    m = base.group.modulus
    numerators = matmul_mod(base.spectrum.numerators, transform, m)
    lifted = SpectrumCertificate(
        GroupSpec(m, point_set.dimension),
        point_set,
        PhaseMatrix(numerators, m),
    )
    if not verify_spectrum(lifted):
        raise RuntimeError("lifted spectrum failed verification; implementation fault")
    return lifted


def cube_spectrum(n: int, dimension: int, guard: int | None = None) -> SpectrumCertificate:
    """The discrete cube [0, n)^d with its full character spectrum.

    This is the n^d-point discrete Fourier system: the set and the spectrum
    numerators are both all of [0, n)^d in lexicographic order.
    """
    group = GroupSpec(n, dimension)
    check_guard(group.order(), guard)
    cells = tuple(group.elements())
    cube = PointSet(dimension, cells)
    numerators = IntMatrix(len(cells), dimension, tuple(c for cell in cells for c in cell))
    return SpectrumCertificate(group, cube, PhaseMatrix(numerators, n))


def format_point_set(point_set: PointSet) -> str:
    lines = [f"{len(point_set)} {point_set.dimension}"]
    for p in point_set.points:
        lines.append(" ".join(str(c) for c in p))
    return "\n".join(lines) + "\n"


def parse_point_set(text: str) -> PointSet:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty point set text")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError("point set header must be 'count dimension'")
    count, dimension = (int(x) for x in header)
    if len(lines) - 1 != count:
        raise ValueError(f"expected {count} points, got {len(lines) - 1}")
    points = []
    for line in lines[1:]:
        coords = [int(tok) for tok in line.split()]
        if len(coords) != dimension:
            raise ValueError(f"expected {dimension} coordinates per point")
        points.append(tuple(coords))
    return PointSet(dimension, tuple(points))


def format_phase_matrix(mat: PhaseMatrix) -> str:
    return format_matrix(mat.numerators) + f"denominator {mat.denominator}\n"


def parse_phase_matrix(text: str) -> PhaseMatrix:
    lines = text.splitlines()
    denom_lines = [ln for ln in lines if ln.strip().startswith("denominator")]
    if len(denom_lines) != 1:
        raise ValueError("phase matrix text needs exactly one 'denominator m' line")
    fields = denom_lines[0].split()
    if len(fields) != 2:
        raise ValueError("denominator line must be 'denominator m'")
    denominator = int(fields[1])
    matrix_text = "\n".join(ln for ln in lines if not ln.strip().startswith("denominator"))
    return PhaseMatrix(parse_matrix(matrix_text), denominator)
