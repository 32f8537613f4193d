"""Symmetric closures of extensible bases and the symmetricisability test.

An admissible symmetric basis (a_i + a_{k-i} = a_k throughout) has range
exactly 2*a_k, the best possible for its top element.  Gluing a mirrored
copy of an origin A_r = {1, ..., b_0} onto its arithmetic extension
b_1, ..., b_j produces the symmetric candidate

    S_j = {a_1, ..., a_r, b_1, ..., b_j, c_{r-1}, ..., c_0},
    c_i = b_j + b_0 - a_i,   k = 2r + j,

whose top is b_j + b_0 and which is symmetric by construction.  Whether it
is admissible depends on j only through a threshold: once b_m >= 2*b_0
(at m0 = ceil(b_0 / p)), admissibility of S_m is decided once and for all,
and an extensible origin is called *symmetricisable* when S_{m0} passes.
Below m0 the admissibility of individual S_j can vary freely, so the
profile over j = 0..m0 is reported alongside the verdict.

For a p-basis the origin has r = p - 1 elements; the plus variant mirrors
all r = p elements of a p-basis with one extra free element a_p, and uses
the same threshold test with b_0 = a_p (the test is sufficient there).
"""

from __future__ import annotations

from dataclasses import dataclass

from .basis import (
    Basis,
    BasisError,
    PreconditionError,
    basis_range,
    coverage,
    is_p_basis,
    range_from_coverage,
)
from .extension import is_extensible


def m_zero(b0: int, p: int) -> int:
    """Smallest m with b_m = b_0 + m*p >= 2*b_0."""
    if p < 1 or b0 < 1:
        raise PreconditionError("threshold needs positive top element and step")
    return (b0 + p - 1) // p


def closure_range(b0: int, p: int, j: int) -> int:
    """Range 2*(2*b_0 + j*p) of an admissible mirrored closure."""
    return 2 * (2 * b0 + j * p)


@dataclass(frozen=True)
class SymmetricClosure:
    origin: Basis
    p: int
    j: int
    elements: Basis
    mirrored_tail: tuple[int, ...]


def build_symmetric_closure(origin: Basis, p: int, j: int) -> SymmetricClosure:
    """Mirror an origin around its j-term arithmetic extension."""
    if p < 1:
        raise PreconditionError(f"step must be positive, got {p}")
    if j < 0:
        raise PreconditionError(f"extension count must be >= 0, got {j}")
    b0 = origin.tail
    bj = b0 + j * p
    ext = tuple(b0 + i * p for i in range(1, j + 1))
    with_zero = (0,) + origin.elements
    mirrored = tuple(bj + b0 - a for a in reversed(with_zero[:-1]))
    elements = Basis(origin.elements + ext + mirrored)
    assert elements.k == 2 * origin.k + j
    return SymmetricClosure(
        origin=origin, p=p, j=j, elements=elements, mirrored_tail=mirrored
    )


@dataclass(frozen=True)
class SymmetricisabilityReport:
    """Admissibility profile of the mirrored closures S_0 ... S_{m0}.

    profile[m] records whether S_m is admissible; the verdict is exactly
    profile[m0], and k0_witness is the element count 2r + m0 of the closure
    that decided it.
    """

    symmetricisable: bool
    m0: int
    profile: tuple[bool, ...]
    k0_witness: int

    def to_json_dict(self) -> dict:
        return {
            "symmetricisable": self.symmetricisable,
            "m0": self.m0,
            "profile": list(self.profile),
        }


def closure_profile(origin: Basis, p: int) -> SymmetricisabilityReport:
    """Profile the closures of an origin without any domain checks."""
    m0 = m_zero(origin.tail, p)
    profile = []
    for m in range(m0 + 1):
        closure = build_symmetric_closure(origin, p, m)
        profile.append(basis_range(closure.elements).admissible)
    return SymmetricisabilityReport(
        symmetricisable=profile[m0],
        m0=m0,
        profile=tuple(profile),
        k0_witness=2 * origin.k + m0,
    )


def is_symmetricisable(pbasis: Basis, p: int) -> SymmetricisabilityReport:
    """Decide whether an extensible p-basis admits an admissible closure.

    The decision is the single admissibility check of S_{m0}; the report
    carries the full profile below the threshold as well, since closures
    there may pass or fail independently of the verdict.
    """
    if not is_p_basis(pbasis, p):
        raise PreconditionError("symmetricisability is defined for p-bases")
    if not is_extensible(pbasis, p).extensible:
        raise PreconditionError("symmetricisability needs an extensible basis")
    return closure_profile(pbasis, p)


def is_symmetricisable_plus(pplus: Basis, p: int) -> SymmetricisabilityReport:
    """Threshold test for a p-basis carrying one extra free element a_p.

    The first p-1 elements must form a p-basis and the whole basis must be
    p-extensible (with b_0 = a_p).  All p elements are mirrored; a passing
    S_{m0} is sufficient for an admissible symmetric closure.
    """
    if pplus.k != p:
        raise BasisError(f"expected p = {p} elements, got {pplus.k}")
    prefix = Basis(pplus.elements[:-1])
    if not is_p_basis(prefix, p):
        raise BasisError("the first p-1 elements must form a p-basis")
    if not is_extensible(pplus, p).extensible:
        raise PreconditionError("symmetricisability needs an extensible basis")
    return closure_profile(pplus, p)


def closure_admissible_at(origin_elements: tuple[int, ...], p: int, m: int) -> bool:
    """Fast path: admissibility of S_m for raw origin elements."""
    b0 = origin_elements[-1]
    bm = b0 + m * p
    ext = tuple(b0 + i * p for i in range(1, m + 1))
    mirrored = tuple(bm + b0 - a for a in reversed((0,) + origin_elements[:-1]))
    elems = origin_elements + ext + mirrored
    cov, _ = coverage(elems)
    return range_from_coverage(cov) >= elems[-1]
