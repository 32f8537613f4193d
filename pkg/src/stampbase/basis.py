"""Core representation for 2-stamp additive bases and their coverage.

A basis A_k = {1, a_2, ..., a_k} is a strictly increasing tuple of positive
integers with a_1 = 1 and an implicit a_0 = 0.  A value x > 0 is *generated*
when x = a_i or x = a_i + a_j (repetition allowed).  The range n(A_k) is the
largest n such that every value 1..n is generated, and A_k is *admissible*
when n(A_k) >= a_k, i.e. coverage reaches the top element without a gap.

Coverage lives in one big-int bitmask (bit x set iff x is generated), so
appending a new top element b is a single shift-or.  No pairwise sum can
exceed 2*a_k, which bounds every mask structurally; the first cleared bit
above zero locates the range.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class BasisError(ValueError):
    """Structurally invalid basis: unsorted, duplicated, or not starting at 1."""


class PreconditionError(ValueError):
    """An operation was applied to a basis outside its stated domain."""


def coverage(elements) -> tuple[int, int]:
    """Return (covered, element_mask) bitmasks for an element sequence.

    element_mask has bit a set for every element plus bit 0 for the implicit
    a_0; covered has bit x set for every generated x (including 0).
    """
    mask = 1
    for a in elements:
        mask |= 1 << a
    cov = mask
    for a in elements:
        cov |= mask << a
    return cov, mask


def extend_coverage(cov: int, mask: int, b: int) -> tuple[int, int]:
    """Coverage masks after appending a new top element b (b above all others)."""
    return cov | (mask << b) | (1 << (2 * b)), mask | (1 << b)


def first_gap(cov: int) -> int:
    """Smallest x >= 0 whose bit is cleared; bit 0 is always set, so >= 1."""
    return ((~cov) & (cov + 1)).bit_length() - 1


def range_from_coverage(cov: int) -> int:
    return first_gap(cov) - 1


def _validated(elements) -> tuple[int, ...]:
    elems = tuple(int(a) for a in elements)
    if not elems:
        raise BasisError("basis needs at least one element")
    if elems[0] != 1:
        raise BasisError(f"basis must start with 1, got {elems[0]}")
    for a, b in zip(elems, elems[1:]):
        if b <= a:
            raise BasisError(f"elements must be strictly increasing: {a} then {b}")
    return elems


@dataclass(frozen=True)
class Basis:
    """Strictly increasing positive integers a_1 = 1 < a_2 < ... < a_k."""

    elements: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", _validated(self.elements))

    @property
    def k(self) -> int:
        return len(self.elements)

    @property
    def tail(self) -> int:
        return self.elements[-1]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    @classmethod
    def parse(cls, text: str) -> "Basis":
        """Parse the comma-separated wire format, e.g. "1,3,4,5,8"."""
        try:
            elems = [int(part) for part in text.split(",")]
        except ValueError as exc:
            raise BasisError(f"unparseable basis text {text!r}") from exc
        return cls(tuple(elems))

    def to_text(self) -> str:
        return ",".join(str(a) for a in self.elements)

    @classmethod
    def from_json(cls, src) -> "Basis":
        """Accept either a JSON string or an already-decoded object."""
        obj = json.loads(src) if isinstance(src, (str, bytes)) else src
        if not isinstance(obj, dict) or "elements" not in obj:
            raise BasisError("basis JSON must be an object with an 'elements' array")
        return cls(tuple(obj["elements"]))

    def to_json(self) -> str:
        return json.dumps({"elements": list(self.elements)})


@dataclass(frozen=True)
class RangeResult:
    n: int
    admissible: bool


@dataclass(frozen=True)
class ReachSet:
    """Coverage snapshot for a basis: which sums of at most two elements exist.

    limit bounds the meaningful bit positions (2 * top element); bits above
    it are structurally zero.
    """

    limit: int
    element_mask: int
    covered: int

    @classmethod
    def of(cls, basis: Basis) -> "ReachSet":
        cov, mask = coverage(basis.elements)
        return cls(limit=2 * basis.tail, element_mask=mask, covered=cov)

    def contains(self, x: int) -> bool:
        return 0 <= x <= self.limit and bool((self.covered >> x) & 1)

    def range_n(self) -> int:
        return range_from_coverage(self.covered)


def basis_range(basis: Basis) -> RangeResult:
    """Range n(A_k) plus the admissibility verdict n >= a_k."""
    n = range_from_coverage(coverage(basis.elements)[0])
    return RangeResult(n=n, admissible=n >= basis.tail)


def extend_reach(reach: ReachSet, basis: Basis, new_element: int) -> ReachSet:
    """Reach of basis + {new_element} computed incrementally from `reach`.

    `reach` must be the coverage of `basis` and new_element must exceed its
    top element; the update is one shift-or instead of a full rebuild.
    """
    expected_mask = 1
    for a in basis.elements:
        expected_mask |= 1 << a
    if reach.element_mask != expected_mask:
        raise BasisError("reach does not correspond to the given basis")
    if new_element <= basis.tail:
        raise BasisError(
            f"new element {new_element} must exceed current top {basis.tail}"
        )
    cov, mask = extend_coverage(reach.covered, reach.element_mask, new_element)
    return ReachSet(limit=2 * new_element, element_mask=mask, covered=cov)


@dataclass(frozen=True)
class ResidueProfile:
    """Residues of a_0, a_1, ..., a_k mod p in positional order."""

    residues: tuple[int, ...]
    complete: bool


def residue_profile(basis: Basis, p: int) -> ResidueProfile:
    """Residues mod p of the basis including the implicit a_0 = 0."""
    if p < 2:
        raise PreconditionError(f"modulus must be at least 2, got {p}")
    residues = (0,) + tuple(a % p for a in basis.elements)
    return ResidueProfile(residues=residues, complete=len(set(residues)) == p)


def is_p_basis(basis: Basis, p: int) -> bool:
    """Exactly p-1 elements, one from each nonzero residue class mod p, admissible."""
    if p < 3:
        raise PreconditionError(f"p-basis test needs p >= 3, got {p}")
    if basis.k != p - 1:
        return False
    residues = {a % p for a in basis.elements}
    if 0 in residues or len(residues) != p - 1:
        return False
    return basis_range(basis).admissible


def is_symmetric(basis: Basis) -> bool:
    """Whether a_i + a_{k-i} = a_k for all i, counting the implicit a_0 = 0."""
    e = (0,) + basis.elements
    k = basis.k
    return all(e[i] + e[k - i] == e[k] for i in range(1, k))


def symmetrize(initial: Basis, parity: str) -> Basis:
    """Reflect an initial segment A_j into a symmetric basis.

    parity "even" yields k = 2j with top 2*a_j; parity "odd" yields
    k = 2j - 1 with top a_j + a_{j-1}.  The odd construction on a single
    element degenerates to {1} (documented, not an error).
    """
    elems = initial.elements
    j = len(elems)
    with_zero = (0,) + elems
    if parity == "even":
        top = 2 * elems[-1]
        mirrored = tuple(top - a for a in reversed(with_zero[:j]))
    elif parity == "odd":
        if j == 1:
            return Basis((1,))
        top = elems[-1] + elems[-2]
        mirrored = tuple(top - a for a in reversed(with_zero[: j - 1]))
    else:
        raise PreconditionError(f"parity must be 'even' or 'odd', got {parity!r}")
    return Basis(elems + mirrored)
