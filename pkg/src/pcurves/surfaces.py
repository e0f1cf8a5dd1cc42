"""Punctured-surface combinatorics and branched-cover bookkeeping.

A punctured surface is a closed-orientable-type surface of genus ``g`` with
``m`` boundary components and an ordered list of signed interior punctures.
A branched cover between two of them is purely combinatorial data: degree,
a fiber map with branching orders at the punctures, and a declared total
interior branching order, cross-checked against Riemann-Hurwitz.
"""

from dataclasses import dataclass, field

from .errors import ValidationError

POSITIVE = "+"
NEGATIVE = "-"


@dataclass(frozen=True)
class PuncturedSurface:
    genus: int
    boundary_components: int
    punctures: tuple  # ordered tuple of (puncture_id: str, sign: "+"|"-")

    def __post_init__(self):
        if self.genus < 0:
            raise ValidationError("genus must be nonnegative")
        if self.boundary_components < 0:
            raise ValidationError("boundary component count must be nonnegative")
        object.__setattr__(self, "punctures", tuple(self.punctures))
        seen = set()
        for pid, sign in self.punctures:
            if sign not in (POSITIVE, NEGATIVE):
                raise ValidationError(f"puncture {pid!r} has bad sign {sign!r}")
            if pid in seen:
                raise ValidationError(f"duplicate puncture id {pid!r}")
            seen.add(pid)

    @property
    def puncture_ids(self):
        return tuple(pid for pid, _ in self.punctures)

    def sign_of(self, pid):
        for qid, sign in self.punctures:
            if qid == pid:
                return sign
        raise ValidationError(f"unknown puncture id {pid!r}")

    @property
    def n_punctures(self):
        return len(self.punctures)

    def positive_punctures(self):
        return tuple(pid for pid, s in self.punctures if s == POSITIVE)

    def negative_punctures(self):
        return tuple(pid for pid, s in self.punctures if s == NEGATIVE)


def euler_char(surface):
    """chi of the punctured surface: 2 - 2g - m - #punctures."""
    return 2 - 2 * surface.genus - surface.boundary_components - surface.n_punctures


def _nonstable_row(surface):
    """Return (teich_dim, aut_dim) for the finitely many non-stable cases."""
    g = surface.genus
    m = surface.boundary_components
    p = surface.n_punctures
    table = {
        (0, 0, 0): (0, 6),  # sphere
        (0, 0, 1): (0, 4),  # plane
        (0, 1, 0): (0, 3),  # disk
        (0, 0, 2): (0, 2),  # cylinder
        (0, 1, 1): (0, 1),  # punctured disk
        (0, 2, 0): (1, 1),  # annulus
        (1, 0, 0): (2, 2),  # torus
    }
    return table.get((g, m, p))


def teichmuller_dim(surface):
    """Dimension of the moduli space of complex structures on the surface."""
    if euler_char(surface) < 0:
        return (
            6 * surface.genus
            - 6
            + 3 * surface.boundary_components
            + 2 * surface.n_punctures
        )
    row = _nonstable_row(surface)
    assert row is not None, "chi >= 0 implies one of the seven tabulated surfaces"
    return row[0]


def aut_dim(surface):
    """Dimension of the automorphism group of the surface; 0 in the stable case."""
    if euler_char(surface) < 0:
        return 0
    row = _nonstable_row(surface)
    assert row is not None
    return row[1]


@dataclass(frozen=True)
class BranchedCover:
    """Combinatorial branched cover of punctured surfaces.

    ``fiber_map`` sends each domain puncture id to (codomain puncture id,
    branching order k_z >= 1).  ``interior_branch_count`` is the declared
    total branching order away from the punctures; it is checked against
    Riemann-Hurwitz rather than derived, because there is no actual map here.
    """

    domain: PuncturedSurface
    codomain: PuncturedSurface
    degree: int
    fiber_map: dict = field(default_factory=dict)
    interior_branch_count: int = 0

    def __post_init__(self):
        if self.degree < 1:
            raise ValidationError("cover degree must be >= 1")
        if self.interior_branch_count < 0:
            raise ValidationError("interior branch count must be nonnegative")
        dom_ids = set(self.domain.puncture_ids)
        cod_ids = set(self.codomain.puncture_ids)
        if set(self.fiber_map) != dom_ids:
            raise ValidationError("fiber map must cover exactly the domain punctures")
        fiber_sums = {pid: 0 for pid in cod_ids}
        for z, (target, order) in self.fiber_map.items():
            if target not in cod_ids:
                raise ValidationError(f"fiber target {target!r} is not a codomain puncture")
            if order < 1:
                raise ValidationError(f"branching order at {z!r} must be >= 1")
            if self.domain.sign_of(z) != self.codomain.sign_of(target):
                raise ValidationError(f"puncture {z!r} maps across signs to {target!r}")
            fiber_sums[target] += order
        for zeta, total in fiber_sums.items():
            if total != self.degree:
                raise ValidationError(
                    f"branching orders over {zeta!r} sum to {total}, expected degree {self.degree}"
                )
        # Declared interior branching must satisfy Riemann-Hurwitz.
        expected = -euler_char(self.domain) + self.degree * euler_char(self.codomain)
        if expected != self.interior_branch_count:
            raise ValidationError(
                "interior branch count inconsistent with Riemann-Hurwitz: "
                f"declared {self.interior_branch_count}, formula gives {expected}"
            )

    def order_at(self, z):
        return self.fiber_map[z][1]

    def target_of(self, z):
        return self.fiber_map[z][0]

    def fiber_over(self, zeta):
        return tuple(sorted(z for z, (t, _) in self.fiber_map.items() if t == zeta))


def riemann_hurwitz_punctured(cover):
    """Algebraic critical-point count Z of the punctured cover.

    Equals -chi(domain) + degree * chi(codomain) with punctured Euler
    characteristics; branch points sitting at punctures do not contribute.
    The equivalent closed-surface count is checked at validation time:
    interior branching plus the puncture branching orders sum to
    -chi_closed(domain) + degree * chi_closed(codomain).
    """
    if cover.domain.boundary_components or cover.codomain.boundary_components:
        raise ValidationError("branched covers are only supported for m = 0 surfaces")
    z = -euler_char(cover.domain) + cover.degree * euler_char(cover.codomain)
    if z != cover.interior_branch_count:
        raise ValidationError(
            f"Riemann-Hurwitz mismatch: formula {z} vs declared interior "
            f"branching {cover.interior_branch_count}"
        )
    # Cross-check in closed form: total branching splits into interior part
    # plus the orders at punctures.
    chi_dom_closed = 2 - 2 * cover.domain.genus
    chi_cod_closed = 2 - 2 * cover.codomain.genus
    total = -chi_dom_closed + cover.degree * chi_cod_closed
    at_punctures = sum(order - 1 for _, order in cover.fiber_map.values())
    if total != cover.interior_branch_count + at_punctures:
        raise ValidationError(
            "closed Riemann-Hurwitz mismatch: "
            f"{total} != {cover.interior_branch_count} + {at_punctures}"
        )
    return z


def cover_moduli_dim(cover):
    """Dimension of the space of holomorphic maps near the cover, modulo
    domain automorphisms: 2 Z(d(cover))."""
    return 2 * riemann_hurwitz_punctured(cover)


def compose_covers(first, second):
    """The composite cover second o first (first: A -> B, second: B -> C)."""
    if first.codomain != second.domain:
        raise ValidationError("covers do not compose: codomain/domain mismatch")
    fiber = {}
    for z, (mid, k1) in first.fiber_map.items():
        target, k2 = second.fiber_map[mid]
        fiber[z] = (target, k1 * k2)
    degree = first.degree * second.degree
    interior = first.interior_branch_count + first.degree * second.interior_branch_count
    return BranchedCover(
        domain=first.domain,
        codomain=second.codomain,
        degree=degree,
        fiber_map=fiber,
        interior_branch_count=interior,
    )
