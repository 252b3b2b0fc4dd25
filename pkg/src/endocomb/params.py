"""Formal self-dual parameters for symplectic and even orthogonal targets.

A parameter is a formal sum of typed simple constituents with
multiplicities; orthogonal/symplectic type is declared, not detected.
Local and global parameters share one shape and differ only in the kind
of character attached to the constituents.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

ORTH = "orth"
SYMP = "symp"
PAIR = "pair"
DUALITIES = (ORTH, SYMP, PAIR)


class InvalidParameter(ValueError):
    def __init__(self, issues):
        self.issues = tuple(issues)
        super().__init__("; ".join(self.issues))


def char_product(chars, trivial=None):
    """Product of quadratic characters, ignoring None entries."""
    result = trivial
    for c in chars:
        if c is None:
            continue
        result = c if result is None else result * c
    return result


def _is_trivial(char) -> bool:
    return char is None or char.is_trivial


@dataclass(frozen=True)
class GroupSpec:
    family: str  # "Sp" | "SOeven"
    rank: int
    similitude: bool = False
    eta: object = None  # discriminant character, None = trivial
    factors: Tuple["GroupSpec", ...] = ()
    label: str = ""

    def __post_init__(self):
        if self.factors:
            return
        if self.family not in ("Sp", "SOeven"):
            raise InvalidParameter([f"unknown family {self.family!r}"])
        if self.rank < 0:
            raise InvalidParameter(["negative rank"])
        if self.family == "Sp" and not _is_trivial(self.eta):
            raise InvalidParameter(["Sp targets carry trivial discriminant"])

    @property
    def is_product(self) -> bool:
        return bool(self.factors)

    @property
    def dual_dim(self) -> int:
        """Dimension N of the standard representation of the dual group."""
        if self.factors:
            return sum(f.dual_dim for f in self.factors)
        return 2 * self.rank + 1 if self.family == "Sp" else 2 * self.rank

    def discriminants(self) -> Tuple[object, ...]:
        if self.factors:
            return tuple(itertools.chain.from_iterable(f.discriminants() for f in self.factors))
        return (None,) if self.family == "Sp" else (self.eta,)

    def to_similitude(self) -> "GroupSpec":
        if self.factors:
            return GroupSpec(self.family, self.rank, True, self.eta,
                             tuple(f.to_similitude() for f in self.factors), self.label)
        return GroupSpec(self.family, self.rank, True, self.eta, (), self.label)


@dataclass(frozen=True)
class SimpleParam:
    label: str
    dim: int
    duality: str
    central_char: object = None

    def __post_init__(self):
        if self.duality not in DUALITIES:
            raise InvalidParameter([f"{self.label}: unknown duality {self.duality!r}"])
        if self.dim < 1:
            raise InvalidParameter([f"{self.label}: dimension must be positive"])
        if self.duality == SYMP and self.dim % 2:
            raise InvalidParameter([f"{self.label}: symplectic type forces even dimension"])
        if self.dim % 2 and self.duality != ORTH:
            raise InvalidParameter([f"{self.label}: odd dimension forces orthogonal type"])

    def twist(self, char, label_suffix: str = "'") -> "SimpleParam":
        """Formal twist by a quadratic character: the central character
        picks up char^dim."""
        if char is None or char.is_trivial:
            return self
        new = self.central_char
        if self.dim % 2:
            new = char if new is None else new * char
        return SimpleParam(self.label + label_suffix, self.dim, self.duality, new)


@dataclass(frozen=True)
class Parameter:
    target: GroupSpec
    constituents: Tuple[Tuple[SimpleParam, int], ...]

    def __post_init__(self):
        # deterministic ordering: (dim, duality, label)
        ordered = tuple(sorted(self.constituents,
                               key=lambda cm: (cm[0].dim, cm[0].duality, cm[0].label)))
        object.__setattr__(self, "constituents", ordered)

    @property
    def parts(self) -> Tuple["Parameter", ...]:
        return (self,)

    def total_dim(self) -> int:
        total = 0
        for sp, mult in self.constituents:
            weight = 2 if sp.duality == PAIR else 1
            total += weight * mult * sp.dim
        return total

    def constituent(self, label: str) -> Tuple[SimpleParam, int]:
        for sp, mult in self.constituents:
            if sp.label == label:
                return sp, mult
        raise KeyError(label)


@dataclass(frozen=True)
class ProductParameter:
    """Parameter on a product target; one component per factor."""

    target: GroupSpec
    components: Tuple[Parameter, ...]

    def __post_init__(self):
        if len(self.components) != len(self.target.factors):
            raise InvalidParameter(["component count does not match target factors"])

    @property
    def parts(self) -> Tuple[Parameter, ...]:
        return self.components


@dataclass(frozen=True)
class IndexPartition:
    I_O_odd: Tuple[str, ...]
    I_O_even: Tuple[str, ...]
    I_S: Tuple[str, ...]
    J: Tuple[str, ...]


@dataclass(frozen=True)
class LeviShape:
    gl_blocks: Tuple[int, ...]  # sorted ascending
    remainder_rank: int


def check(phi: Parameter) -> List[str]:
    """All parameter invariants; returns the list of violations."""
    issues: List[str] = []
    if isinstance(phi, ProductParameter):
        for part in phi.components:
            issues.extend(check(part))
        return issues
    labels = [sp.label for sp, _ in phi.constituents]
    if len(set(labels)) != len(labels):
        issues.append("duplicate constituent labels")
    for sp, mult in phi.constituents:
        if mult < 1:
            issues.append(f"{sp.label}: multiplicity must be positive")
        if sp.duality == SYMP and mult % 2:
            issues.append(f"{sp.label}: odd symplectic multiplicity")
    n_target = phi.target.dual_dim
    n_total = phi.total_dim()
    if n_total != n_target:
        issues.append(f"dimension mismatch: constituents give {n_total}, target needs {n_target}")
    det = char_product(sp.central_char for sp, mult in phi.constituents
                       if sp.duality == ORTH and mult % 2)
    eta = phi.target.eta
    if _is_trivial(eta):
        if not _is_trivial(det):
            issues.append("determinant mismatch: product of central characters is nontrivial")
    else:
        if det is None or det != eta:
            issues.append("determinant mismatch: product of central characters differs from the discriminant")
    return issues


def validate(phi) -> None:
    issues = check(phi)
    if issues:
        raise InvalidParameter(issues)


def index_partition(phi: Parameter) -> IndexPartition:
    odd, even, symp, pair = [], [], [], []
    for sp, mult in phi.constituents:
        if sp.duality == ORTH:
            (odd if mult % 2 else even).append(sp.label)
        elif sp.duality == SYMP:
            symp.append(sp.label)
        else:
            pair.append(sp.label)
    return IndexPartition(tuple(odd), tuple(even), tuple(symp), tuple(pair))


def is_discrete(phi) -> bool:
    if isinstance(phi, ProductParameter):
        return all(is_discrete(p) for p in phi.components)
    return all(sp.duality == ORTH and mult == 1 for sp, mult in phi.constituents)


def m_phi(phi) -> int:
    """Multiplicity of the parameter in the discrete spectrum: 2 exactly
    when the target is special even orthogonal and no orthogonal
    constituent has odd dimension; products multiply."""
    if isinstance(phi, ProductParameter):
        out = 1
        for p in phi.components:
            out *= m_phi(p)
        return out
    if phi.target.family != "SOeven":
        return 1
    has_odd = any(sp.dim % 2 for sp, _ in phi.constituents if sp.duality == ORTH)
    return 1 if has_odd else 2


def is_elliptic(phi: Parameter, theta: str = "id") -> bool:
    """Elliptic in the theta-component: the necessary shape conditions
    plus the finiteness of some torsion centralizer.

    The shape conditions (only orthogonal constituents, multiplicities at
    most 2) are necessary; the deciding finiteness amounts to a parity
    feasibility check on the forced -1 blocks.
    """
    if theta not in ("id", "theta0"):
        raise InvalidParameter([f"unknown twist {theta!r}"])
    if theta == "theta0" and phi.target.family != "SOeven":
        raise InvalidParameter(["theta0 requested for a symplectic target"])
    for sp, mult in phi.constituents:
        if sp.duality != ORTH or mult > 2:
            return False
    # forced signs: every multiplicity-2 block contributes one -1 on an
    # N_i-dimensional eigenspace; multiplicity-1 blocks are free.
    forced = sum(sp.dim for sp, mult in phi.constituents if mult == 2) % 2
    free_odd = any(sp.dim % 2 for sp, mult in phi.constituents if mult == 1)
    want = 0 if theta == "id" else 1
    if free_odd:
        return True
    return forced == want


def enumerate_levi_shapes(group: GroupSpec) -> List[LeviShape]:
    """All Levi shapes GL(n1) x ... x GL(nr) x G(n-): multisets of positive
    block sizes with total at most the rank."""
    n = group.rank
    shapes = []
    def rec(remaining, min_part, blocks):
        shapes.append(LeviShape(tuple(blocks), remaining))
        for part in range(min_part, remaining + 1):
            rec(remaining - part, part, blocks + [part])
    rec(n, 1, [])
    shapes.sort(key=lambda s: (len(s.gl_blocks), s.gl_blocks, s.remainder_rank))
    return shapes


def levi_support(phi: Parameter) -> Tuple[LeviShape, Tuple[int, ...], Parameter]:
    """Peel surplus pairs of constituents into GL blocks, leaving a
    discrete parameter on the smaller group of the same type."""
    if is_discrete(phi):
        raise InvalidParameter(["already discrete"])
    gl_dims: List[int] = []
    remaining: List[Tuple[SimpleParam, int]] = []
    for sp, mult in phi.constituents:
        if sp.duality == PAIR:
            gl_dims.extend([sp.dim] * mult)
        else:
            pairs, rest = divmod(mult, 2)
            gl_dims.extend([sp.dim] * pairs)
            if rest:
                remaining.append((sp, 1))
    n_minus_dual = phi.target.dual_dim - 2 * sum(gl_dims)
    fam = phi.target.family
    rank_minus = (n_minus_dual - 1) // 2 if fam == "Sp" else n_minus_dual // 2
    target_minus = GroupSpec(fam, rank_minus, phi.target.similitude, phi.target.eta)
    phi_minus = Parameter(target_minus, tuple(remaining))
    gl_blocks = tuple(sorted(gl_dims))
    shape = LeviShape(gl_blocks, rank_minus)
    return shape, gl_blocks, phi_minus
