"""Component groups of parameter centralizers and their partition model.

Everything here is elementary abelian 2-group combinatorics.  A
component-group element is a bitmask over the orthogonal constituent
labels: bit i records the determinant class of the i-th O(l_i) block.
Two relation vectors control the structure:

  * the kernel constraint, supported on labels with odd attached
    dimension: det classes must multiply to +1 inside the ambient
    special orthogonal dual group;
  * the center identification, supported on labels with odd
    multiplicity: the image of -1 in the dual group's center.

Product targets concatenate factor data; each factor carries its own
pair of vectors.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import charfield, gf2
from .params import (ORTH, PAIR, SYMP, GroupSpec, InvalidParameter, Parameter,
                     ProductParameter, SimpleParam, char_product, index_partition,
                     is_elliptic, validate)

VARIANTS = ("S", "Sbar", "SbarSigma0", "Stilde")


class ConsistencyError(AssertionError):
    """Two independent computations of the same object disagreed."""


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class CentralizerShape:
    factors: Tuple[Tuple[str, int, int, str], ...]  # (kind, size l, attached dim N, label)
    plus_kernel: bool
    center_quotient: str  # "trivial" | "order2"


@dataclass(frozen=True)
class ComponentGroup:
    variant: str
    basis: Tuple[str, ...]
    constraint_relations: Tuple[Tuple[int, ...], ...]
    quotient_relations: Tuple[Tuple[int, ...], ...]
    elements: Tuple[int, ...]  # canonical masks, sorted

    @property
    def relations(self) -> Tuple[Tuple[int, ...], ...]:
        return self.constraint_relations + self.quotient_relations

    @property
    def order(self) -> int:
        return len(self.elements)

    def mask_labels(self, mask: int) -> Tuple[str, ...]:
        return tuple(lbl for i, lbl in enumerate(self.basis) if (mask >> i) & 1)


@dataclass(frozen=True)
class PartitionPair:
    S: Tuple[str, ...]
    T: Tuple[str, ...]
    canonical: bool = True


@dataclass(frozen=True)
class PartitionGroup:
    sigma0: bool
    basis: Tuple[str, ...]
    pairs: Tuple[PartitionPair, ...]

    @property
    def order(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class ExactnessReport:
    matches: bool
    kernel_masks: Tuple[int, ...]
    partition_kernel_masks: Tuple[int, ...]
    alpha_image_order: int


# ---------------------------------------------------------------------------
# internal model


@dataclass(frozen=True)
class _Entry:
    key: str      # display label (factor-prefixed for products)
    label: str
    factor: int
    dim: int
    mult: int
    char: object
    soeven: bool


@dataclass(frozen=True)
class _Model:
    entries: Tuple[_Entry, ...]
    constraints: Tuple[int, ...]       # kernel vectors, one per factor with odd dims
    quotients: Tuple[int, ...]         # center vectors, one per SOeven factor
    flips: Tuple[int, ...]             # complement vectors, one per factor, all families
    theta_vec: int                     # grading vector for the outer component
    soeven_single: bool
    all_soeven: bool

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(e.key for e in self.entries)

    def mask_of(self, keys) -> int:
        mask = 0
        for i, e in enumerate(self.entries):
            if e.key in keys or e.label in keys:
                mask |= 1 << i
        return mask

    def canonical(self, mask: int) -> int:
        # per even orthogonal factor: identify with the complement class
        return self._canon(mask, self.quotients)

    def p_canonical(self, mask: int) -> int:
        # partition side: complementing applies on every factor
        return self._canon(mask, self.flips)

    @staticmethod
    def _canon(mask: int, vectors) -> int:
        # representative not containing the smallest odd-multiplicity
        # label of each vector's factor (empty beats full)
        for q in vectors:
            low = q & -q
            if mask & low:
                mask ^= q
        return mask

    def sbar_elements(self) -> Tuple[int, ...]:
        out = set()
        n = len(self.entries)
        for mask in range(1 << n):
            if all(bin(mask & a).count("1") % 2 == 0 for a in self.constraints):
                out.add(self.canonical(mask))
        return tuple(sorted(out))

    def s_elements(self) -> Tuple[int, ...]:
        n = len(self.entries)
        return tuple(mask for mask in range(1 << n)
                     if all(bin(mask & a).count("1") % 2 == 0 for a in self.constraints))

    def sigma0_elements(self, theta: str = "id") -> Tuple[int, ...]:
        """Elements of the Sigma0 component model, graded by theta.

        Symplectic factors keep their kernel constraint (their Sigma0 is
        trivial); even orthogonal factors drop it, and the theta0 part is
        the odd-grading slice.
        """
        keep = [a for a, so in zip(self.constraints, self._constraint_soeven()) if not so]
        want = 0 if theta == "id" else 1
        out = set()
        n = len(self.entries)
        for mask in range(1 << n):
            if any(bin(mask & a).count("1") % 2 for a in keep):
                continue
            if bin(mask & self.theta_vec).count("1") % 2 != want:
                continue
            out.add(self.canonical(mask))
        return tuple(sorted(out))

    def _constraint_soeven(self) -> List[bool]:
        flags = []
        for a in self.constraints:
            idx = (a & -a).bit_length() - 1
            flags.append(self.entries[idx].soeven)
        return flags


def _build_model(phi) -> _Model:
    entries: List[_Entry] = []
    constraints: List[int] = []
    quotients: List[int] = []
    flips: List[int] = []
    parts = phi.parts
    multi = len(parts) > 1
    offset = 0
    theta_vec = 0
    for f_idx, part in enumerate(parts):
        so = part.target.family == "SOeven"
        local = [(sp, mult) for sp, mult in part.constituents if sp.duality == ORTH]
        a_mask = 0
        c_mask = 0
        for j, (sp, mult) in enumerate(local):
            key = f"{f_idx}:{sp.label}" if multi else sp.label
            entries.append(_Entry(key, sp.label, f_idx, sp.dim, mult, sp.central_char, so))
            if sp.dim % 2:
                a_mask |= 1 << (offset + j)
            if mult % 2:
                c_mask |= 1 << (offset + j)
        if a_mask:
            constraints.append(a_mask)
        if c_mask:
            flips.append(c_mask)
            if so:
                quotients.append(c_mask)
        if so:
            theta_vec |= a_mask
        offset += len(local)
    soeven_single = len(parts) == 1 and parts[0].target.family == "SOeven"
    all_so = all(p.target.family == "SOeven" for p in parts)
    return _Model(tuple(entries), tuple(constraints), tuple(quotients), tuple(flips),
                  theta_vec, soeven_single, all_so)


def _default_xgroup(phi):
    """Class group X for the similitude lift of the parameter's target."""
    target = phi.target if not isinstance(phi, ProductParameter) else phi.target
    chars = [sp.central_char for part in phi.parts for sp, _ in part.constituents
             if sp.central_char is not None]
    chars += [e for e in target.discriminants() if e is not None]
    if not chars:
        return charfield.CharClassGroup(("formal", "trivial", 0), ())
    probe = chars[0]
    if isinstance(probe, charfield.GlobalQuadChar):
        return charfield.x_group(target, "global", model=probe.model)
    if isinstance(probe, charfield.LocalQuadChar):
        return charfield.x_group(target, "local", place=probe.place,
                                 model=None)
    return charfield.x_group(target, "formal")


# ---------------------------------------------------------------------------
# public operations


def centralizer_shape(phi: Parameter) -> CentralizerShape:
    validate(phi)
    factors = []
    plus = False
    for part in phi.parts:
        for sp, mult in part.constituents:
            if sp.duality == ORTH:
                factors.append(("O", mult, sp.dim, sp.label))
                plus = plus or sp.dim % 2 == 1
            elif sp.duality == SYMP:
                factors.append(("Sp", mult, sp.dim, sp.label))
            else:
                factors.append(("GL", mult, sp.dim, sp.label))
    soeven = bool(phi.parts) and all(p.target.family == "SOeven" for p in phi.parts)
    return CentralizerShape(tuple(factors), plus,
                            "order2" if soeven else "trivial")


def component_group(phi, variant: str = "Sbar",
                    xgroup=None) -> ComponentGroup:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    validate(phi)
    model = _build_model(phi)
    n = len(model.entries)
    cons = tuple(tuple((a >> i) & 1 for i in range(n)) for a in model.constraints)
    quots = tuple(tuple((q >> i) & 1 for i in range(n)) for q in model.quotients)
    if variant == "S":
        return ComponentGroup("S", model.labels, cons, (), model.s_elements())
    if variant == "Sbar":
        return ComponentGroup("Sbar", model.labels, cons, quots, model.sbar_elements())
    if variant == "SbarSigma0":
        keep = tuple(t for t, so in zip(cons, (model._constraint_soeven())) if not so)
        return ComponentGroup("SbarSigma0", model.labels, keep, quots,
                              model.sigma0_elements("id"))
    kernel, _, _ = _stilde_elements(phi, model, xgroup)
    return ComponentGroup("Stilde", model.labels, cons, quots, kernel)


def p_phi(phi, sigma0: bool = False) -> PartitionGroup:
    """The partition substitute: pairs (S, T) of odd/even-multiplicity
    orthogonal labels modulo complementing S, with the even-total
    constraint on even orthogonal targets unless sigma0."""
    validate(phi)
    model = _build_model(phi)
    n = len(model.entries)
    so_constraints = []
    if not sigma0:
        for a, so in zip(model.constraints, model._constraint_soeven()):
            if so:
                so_constraints.append(a)
    seen = set()
    pairs = []
    for mask in range(1 << n):
        if any(bin(mask & a).count("1") % 2 for a in so_constraints):
            continue
        canon = model.p_canonical(mask)
        if canon in seen:
            continue
        seen.add(canon)
        pairs.append(_pair_of_mask(model, canon))
    pairs.sort(key=lambda p: (len(p.S) + len(p.T), p.S, p.T))
    return PartitionGroup(sigma0, model.labels, tuple(pairs))


def _pair_of_mask(model: _Model, mask: int) -> PartitionPair:
    S, T = [], []
    for i, e in enumerate(model.entries):
        if (mask >> i) & 1:
            (S if e.mult % 2 else T).append(e.key)
    return PartitionPair(tuple(S), tuple(T), True)


def c_map(phi, x, sigma0: bool = False) -> PartitionPair:
    """The bijection onto the partition model: identity on the underlying
    determinant-class masks, canonicalized."""
    model = _build_model(phi)
    mask = x if isinstance(x, int) else model.mask_of(set(x.S) | set(x.T))
    return _pair_of_mask(model, model.p_canonical(mask))


def c_map_inverse(phi, pair, sigma0: bool = False) -> int:
    """Canonical component-group mask whose partition class is ``pair``.

    On symplectic factor data the kernel constraint picks out a unique
    representative of the complement class; on even orthogonal data the
    class itself is the element.
    """
    model = _build_model(phi)
    mask = pair if isinstance(pair, int) else model.mask_of(set(pair.S) | set(pair.T))
    for a, so in zip(model.constraints, model._constraint_soeven()):
        if so:
            continue
        if bin(mask & a).count("1") % 2:
            # flip within the factor of this constraint
            factor = model.entries[(a & -a).bit_length() - 1].factor
            flip = 0
            for i, e in enumerate(model.entries):
                if e.factor == factor and e.mult % 2:
                    flip |= 1 << i
            mask ^= flip
    if any(bin(mask & a).count("1") % 2 for a in model.constraints):
        raise ConsistencyError("partition class has no kernel-constraint representative")
    return model.canonical(mask)


def alpha_char(phi, x):
    """Product of the central characters over the support of x (any
    representative; taking classes in X makes it well defined)."""
    model = _build_model(phi)
    mask = x if isinstance(x, int) else model.mask_of(set(x.S) | set(x.T))
    return char_product(e.char for i, e in enumerate(model.entries) if (mask >> i) & 1)


def alpha(phi, x, xgroup=None) -> Tuple[int, ...]:
    """Class vector of alpha(x) in the twisting-character group X."""
    xgroup = xgroup or _default_xgroup(phi)
    return xgroup.class_vec(alpha_char(phi, x))


def _stilde_elements(phi, model: _Model, xgroup):
    xgroup = xgroup or _default_xgroup(phi)
    sbar = model.sbar_elements()
    kernel = tuple(m for m in sbar if not any(alpha(phi, m, xgroup)))
    image = {alpha(phi, m, xgroup) for m in sbar}
    # independent combinatorial route: the partition classes killed by the
    # character product
    part_kernel = set()
    n = len(model.entries)
    so_constraints = [a for a, so in zip(model.constraints, model._constraint_soeven()) if so]
    for mask in range(1 << n):
        if any(bin(mask & a).count("1") % 2 for a in so_constraints):
            continue
        canon = model.canonical(mask)
        if canon in part_kernel:
            continue
        if not any(alpha(phi, canon, xgroup)):
            part_kernel.add(canon)
    part_masks = tuple(sorted(c_map_inverse(phi, m) for m in part_kernel))
    return kernel, part_masks, len(image)


def s_tilde(phi, xgroup=None) -> Tuple[ComponentGroup, ExactnessReport]:
    """Kernel of alpha computed two independent ways and compared."""
    validate(phi)
    model = _build_model(phi)
    kernel, part_masks, image_order = _stilde_elements(phi, model, xgroup)
    report = ExactnessReport(tuple(sorted(kernel)) == part_masks,
                             tuple(sorted(kernel)), part_masks, image_order)
    if not report.matches:
        raise ConsistencyError(
            f"kernel of alpha {kernel} differs from partition kernel {part_masks}")
    n = len(model.entries)
    cons = tuple(tuple((a >> i) & 1 for i in range(n)) for a in model.constraints)
    quots = tuple(tuple((q >> i) & 1 for i in range(n)) for q in model.quotients)
    group = ComponentGroup("Stilde", model.labels, cons, quots, tuple(sorted(kernel)))
    return group, report


def stilde_is_trivial_test(phi, xgroup=None) -> Tuple[bool, Optional[PartitionPair]]:
    """The sufficient criterion for a trivial lifted component group:
    every pair (S, T) killed by the character product has T empty and S
    empty or full."""
    validate(phi)
    xgroup = xgroup or _default_xgroup(phi)
    model = _build_model(phi)
    odd_mask = 0
    for i, e in enumerate(model.entries):
        if e.mult % 2:
            odd_mask |= 1 << i
    n = len(model.entries)
    for mask in range(1 << n):
        if any(alpha(phi, mask, xgroup)):
            continue
        s_part = mask & odd_mask
        t_part = mask & ~odd_mask
        if t_part == 0 and s_part in (0, odd_mask):
            continue
        return False, _pair_of_mask(model, mask)
    return True, None


# ---------------------------------------------------------------------------
# endoscopic splitting of a parameter along a component-group element


def split_parameter(phi: Parameter, x, theta: str = "id"):
    """Split phi into the two endoscopic halves selected by x.

    Returns (G_I, phi_I, G_II, phi_II, eta_I).  The first half receives
    one copy of every constituent in the support; on symplectic targets
    and on the outer component both halves are twisted by the character
    products the embeddings require.
    """
    validate(phi)
    if isinstance(phi, ProductParameter):
        raise InvalidParameter(["split_parameter expects a simple target"])
    model = _build_model(phi)
    mask = x if isinstance(x, int) else model.mask_of(set(x.S) | set(x.T))
    mask = model.canonical(mask)
    fam = phi.target.family
    a_total = model.constraints[0] if model.constraints else 0
    parity = bin(mask & a_total).count("1") % 2
    want = 0 if theta == "id" else 1
    if parity != want:
        raise InvalidParameter(["element does not lie in the requested component"])
    flip = 0
    for i, e in enumerate(model.entries):
        if e.mult % 2:
            flip |= 1 << i
    if fam == "Sp" and theta == "id":
        if mask == 0:
            trivial_half = GroupSpec("SOeven", 0)
            return phi.target, phi, trivial_half, Parameter(trivial_half, ()), None
        # representative with odd total dimension on the first half
        odd_rep = mask if _dim_of(model, mask) % 2 else mask ^ flip
        mask = odd_rep
    support = [model.entries[i] for i in range(len(model.entries)) if (mask >> i) & 1]
    keys = {e.label for e in support}
    eta_I = char_product(e.char for e in support)
    dim_I = sum(e.dim for e in support)
    dim_II = phi.target.dual_dim - dim_I

    def residual_constituents(twist_char):
        out = []
        for sp, mult in phi.constituents:
            m = mult - (1 if sp.label in keys and sp.duality == ORTH else 0)
            if m > 0:
                out.append((sp.twist(twist_char, "~II") if twist_char is not None else sp, m))
        return tuple(out)

    def support_constituents(twist_char):
        return tuple((sp.twist(twist_char, "~I") if twist_char is not None else sp, 1)
                     for sp, mult in phi.constituents if sp.label in keys)

    if theta == "theta0":
        eta_II = char_product([eta_I, phi.target.eta])
        g_I = GroupSpec("Sp", (dim_I - 1) // 2)
        g_II = GroupSpec("Sp", (dim_II - 1) // 2)
        phi_I = Parameter(g_I, support_constituents(eta_I))
        phi_II = Parameter(g_II, residual_constituents(eta_II))
    elif fam == "Sp":
        g_I = GroupSpec("Sp", (dim_I - 1) // 2)
        g_II = GroupSpec("SOeven", dim_II // 2, eta=eta_I)
        phi_I = Parameter(g_I, support_constituents(eta_I))
        phi_II = Parameter(g_II, residual_constituents(None))
    else:
        eta_II = char_product([eta_I, phi.target.eta])
        g_I = GroupSpec("SOeven", dim_I // 2, eta=eta_I)
        g_II = GroupSpec("SOeven", dim_II // 2, eta=eta_II)
        phi_I = Parameter(g_I, support_constituents(None))
        phi_II = Parameter(g_II, residual_constituents(None))
    validate(phi_I)
    if phi_II is not None:
        validate(phi_II)
    return g_I, phi_I, g_II, phi_II, eta_I


def _dim_of(model: _Model, mask: int) -> int:
    return sum(e.dim for i, e in enumerate(model.entries) if (mask >> i) & 1)


def consistency_on_induction_check(phi: Parameter, theta: str, split) -> Tuple[bool, dict]:
    """Both endoscopic halves of an elliptic parameter with trivial lifted
    component group again have trivial lifted component groups, provided
    the target is symplectic, or has nontrivial discriminant, or one of
    the odd/even label sets is empty."""
    validate(phi)
    if not is_elliptic(phi, theta):
        raise PreconditionError("parameter is not elliptic for the requested component")
    group, _ = s_tilde(phi)
    if group.order != 1:
        raise PreconditionError("lifted component group is not trivial")
    fam = phi.target.family
    eta = phi.target.eta
    part = index_partition(phi)
    cond = (fam == "Sp"
            or (fam == "SOeven" and eta is not None and not eta.is_trivial)
            or (fam == "SOeven" and (not part.I_O_odd or not part.I_O_even)))
    if not cond:
        raise PreconditionError(
            "split even orthogonal target with both odd and even labels present")
    g_I, phi_I, g_II, phi_II, _ = split_parameter(phi, split, theta)
    orders = {}
    ok = True
    for name, p in (("I", phi_I), ("II", phi_II)):
        if p is None or not p.constituents:
            orders[name] = 1
            continue
        sub, _ = s_tilde(p)
        orders[name] = sub.order
        ok = ok and sub.order == 1
    return ok, {"orders": orders, "witness": None if ok else orders}
