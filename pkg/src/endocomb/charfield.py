"""Finite models of quadratic characters as GF(2) lattices.

A place carries F_v^x/(F_v^x)^2 as a GF(2) vector space: one sign
coordinate at a real place, an (unramified, ramified) pair at a finite
place.  A global model is a finite list of places with a chosen lattice
of "global" characters inside the direct sum of the local groups.  The
2-adic places' larger square-class groups are deliberately ignored: the
constructions only ever distinguish ramified from unramified.

All values are immutable; characters multiply by componentwise xor.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from . import gf2


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class PlaceModel:
    id: str
    kind: str  # "real" | "finite"

    def __post_init__(self):
        if self.kind not in ("real", "finite"):
            raise ModelError(f"unknown place kind {self.kind!r}")

    @property
    def local_rank(self) -> int:
        return 1 if self.kind == "real" else 2

    @property
    def basis_labels(self) -> Tuple[str, ...]:
        return ("sign",) if self.kind == "real" else ("unramified", "ramified")


class _XorChar:
    """Shared multiplicative (xor) behaviour of quadratic characters."""

    coords: Tuple[int, ...]

    def _twin(self, coords):
        raise NotImplementedError

    def _same_space(self, other) -> bool:
        raise NotImplementedError

    def __mul__(self, other):
        if not self._same_space(other):
            raise ModelError("characters live in different groups")
        return self._twin(tuple(a ^ b for a, b in zip(self.coords, other.coords)))

    @property
    def is_trivial(self) -> bool:
        return not any(self.coords)

    def __bool__(self):
        return not self.is_trivial


@dataclass(frozen=True)
class LocalQuadChar(_XorChar):
    place: str
    coords: Tuple[int, ...]

    def _twin(self, coords):
        return LocalQuadChar(self.place, coords)

    def _same_space(self, other):
        return isinstance(other, LocalQuadChar) and other.place == self.place


@dataclass(frozen=True)
class FormalChar(_XorChar):
    """Abstract quadratic character in a nameless GF(2) universe.

    Used by the parameter sweeps, where no place structure is required.
    """

    universe: str
    coords: Tuple[int, ...]

    def _twin(self, coords):
        return FormalChar(self.universe, coords)

    def _same_space(self, other):
        return isinstance(other, FormalChar) and other.universe == self.universe


@dataclass(frozen=True)
class GlobalCharModel:
    places: Tuple[PlaceModel, ...]
    generators: Tuple[Tuple[int, ...], ...]
    name: str = "model"

    def __post_init__(self):
        ids = [p.id for p in self.places]
        if len(set(ids)) != len(ids):
            raise ModelError("duplicate place ids")
        dim = self.total_dim
        for row in self.generators:
            if len(row) != dim:
                raise ModelError("generator row length does not match place ranks")
        mat = np.array(self.generators, dtype=np.uint8) if self.generators else np.zeros((0, dim), np.uint8)
        if gf2.rank(mat) != len(self.generators):
            raise ModelError("generator rows are GF(2)-dependent")

    @property
    def total_dim(self) -> int:
        return sum(p.local_rank for p in self.places)

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    def place(self, place_id: str) -> PlaceModel:
        for p in self.places:
            if p.id == place_id:
                return p
        raise ModelError("place not in model")

    def block(self, place_id: str) -> Tuple[int, int]:
        start = 0
        for p in self.places:
            if p.id == place_id:
                return start, start + p.local_rank
            start += p.local_rank
        raise ModelError("place not in model")

    def generator_matrix(self) -> np.ndarray:
        if not self.generators:
            return np.zeros((0, self.total_dim), dtype=np.uint8)
        return np.array(self.generators, dtype=np.uint8)

    def char(self, coords: Sequence[int]) -> "GlobalQuadChar":
        return GlobalQuadChar(self, tuple(int(c) & 1 for c in coords))

    def generator(self, i: int) -> "GlobalQuadChar":
        coords = [0] * self.n_generators
        coords[i] = 1
        return self.char(coords)

    def trivial(self) -> "GlobalQuadChar":
        return self.char([0] * self.n_generators)

    def all_chars(self) -> list:
        out = []
        for mask in range(1 << self.n_generators):
            out.append(self.char([(mask >> i) & 1 for i in range(self.n_generators)]))
        return out


@dataclass(frozen=True)
class GlobalQuadChar(_XorChar):
    model: GlobalCharModel
    coords: Tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.model.n_generators:
            raise ModelError("coordinate length does not match generator count")

    def _twin(self, coords):
        return GlobalQuadChar(self.model, coords)

    def _same_space(self, other):
        return isinstance(other, GlobalQuadChar) and other.model == self.model

    def expanded(self) -> Tuple[int, ...]:
        """Coordinates in the full direct sum of local groups."""
        vec = np.zeros(self.model.total_dim, dtype=np.uint8)
        for i, c in enumerate(self.coords):
            if c:
                vec ^= np.array(self.model.generators[i], dtype=np.uint8)
        return tuple(int(x) for x in vec)


def localize(chi: GlobalQuadChar, place_id: str) -> LocalQuadChar:
    """Restriction of a global character to one place (GF(2)-linear)."""
    lo, hi = chi.model.block(place_id)
    return LocalQuadChar(place_id, chi.expanded()[lo:hi])


@dataclass(frozen=True)
class CharClassGroup:
    """Classes of quadratic characters modulo a subgroup of identifications.

    ``ambient`` describes where the characters live: ("local", place_id,
    rank), ("global", model), or ("formal", universe, dim).  Class vectors
    are canonical GF(2) representatives modulo the span of ``modulus``.
    """

    ambient: tuple
    modulus: Tuple[Tuple[int, ...], ...] = ()

    @property
    def dim(self) -> int:
        kind = self.ambient[0]
        if kind == "local":
            return self.ambient[2]
        if kind == "global":
            return self.ambient[1].n_generators
        return self.ambient[2]

    def _coords(self, char) -> Tuple[int, ...]:
        kind = self.ambient[0]
        if char is None:
            return tuple([0] * self.dim)
        if kind == "local":
            if not isinstance(char, LocalQuadChar) or char.place != self.ambient[1]:
                raise ModelError("character does not live at this place")
        elif kind == "global":
            if not isinstance(char, GlobalQuadChar) or char.model != self.ambient[1]:
                raise ModelError("character does not belong to this model")
        else:
            if not isinstance(char, FormalChar) or char.universe != self.ambient[1]:
                raise ModelError("character does not belong to this universe")
        return char.coords

    def _modulus_basis(self) -> np.ndarray:
        if not self.modulus:
            return np.zeros((0, self.dim), dtype=np.uint8)
        return gf2.row_basis(np.array(self.modulus, dtype=np.uint8))

    def class_vec(self, char) -> Tuple[int, ...]:
        vec = gf2.reduce_mod(np.array(self._coords(char), dtype=np.uint8), self._modulus_basis())
        return tuple(int(x) for x in vec)

    def is_trivial(self, char) -> bool:
        return not any(self.class_vec(char))

    @property
    def order(self) -> int:
        return 1 << (self.dim - gf2.rank(self._modulus_basis()) if self.dim else 0)

    def image_basis(self, chars: Iterable) -> Tuple[Tuple[int, ...], ...]:
        """Canonical basis of the subgroup of classes generated by chars."""
        vecs = [self.class_vec(c) for c in chars]
        if not vecs:
            return ()
        basis = gf2.row_basis(np.array(vecs, dtype=np.uint8))
        return tuple(tuple(int(x) for x in row) for row in basis)

    def image_order(self, chars: Iterable) -> int:
        return 1 << len(self.image_basis(chars))


# ---------------------------------------------------------------------------
# groups X of twisting characters

def x_group(group, scope: str, model: Optional[GlobalCharModel] = None,
            place: Optional[str] = None) -> CharClassGroup:
    """The character class group X attached to a similitude target.

    GSp keeps the full quadratic character group (the similitude character
    is onto the squares' complement); GSO(2n, eta) identifies characters
    that agree on the norm group, i.e. takes classes modulo <eta>.
    Products take classes modulo all the factors' discriminants.
    """
    etas = [e for e in group.discriminants() if e is not None and not e.is_trivial]
    if scope == "local":
        if place is None:
            raise ModelError("local x_group needs a place")
        if model is not None:
            rank_ = model.place(place).local_rank
        elif etas:
            rank_ = len(etas[0].coords)
        else:
            raise ModelError("cannot infer local rank without a model")
        mods = []
        for e in etas:
            loc = e if isinstance(e, LocalQuadChar) else localize(e, place)
            mods.append(loc.coords)
        return CharClassGroup(("local", place, rank_), tuple(mods))
    if scope == "global":
        if model is None:
            if etas and isinstance(etas[0], GlobalQuadChar):
                model = etas[0].model
            else:
                raise ModelError("global x_group needs a model")
        mods = tuple(e.coords for e in etas)
        return CharClassGroup(("global", model), mods)
    if scope == "formal":
        if etas:
            uni = etas[0].universe
            dim = len(etas[0].coords)
        else:
            uni, dim = "formal", 0
        return CharClassGroup(("formal", uni, dim), tuple(e.coords for e in etas))
    raise ModelError(f"unknown scope {scope!r}")


def formal_x_group(group, universe: str, dim: int) -> CharClassGroup:
    etas = [e for e in group.discriminants() if e is not None and not e.is_trivial]
    return CharClassGroup(("formal", universe, dim), tuple(e.coords for e in etas))


def aut_product_group(local_subgroups: Dict[str, Sequence[LocalQuadChar]],
                      exceptions: Iterable[str],
                      model: GlobalCharModel) -> Tuple[GlobalQuadChar, ...]:
    """Global characters whose localization at every non-excepted place
    lies in the designated local subgroup.  Returns a basis.

    "Almost all places" is modelled by the explicit exception set; the
    result is monotone in it.
    """
    exceptions = set(exceptions)
    conditions = []
    gen_mat = model.generator_matrix()
    for p in model.places:
        if p.id in exceptions:
            continue
        lo, hi = model.block(p.id)
        local_mat = gen_mat[:, lo:hi]  # generators -> local coords
        sub = local_subgroups.get(p.id, ())
        sub_rows = [np.array(ch.coords, dtype=np.uint8) for ch in sub]
        if sub_rows:
            sub_basis = gf2.row_basis(np.array(sub_rows, dtype=np.uint8))
        else:
            sub_basis = np.zeros((0, p.local_rank), dtype=np.uint8)
        # membership in the span == annihilated by a complement functional set
        comp = gf2.kernel(sub_basis) if sub_basis.size else np.eye(p.local_rank, dtype=np.uint8)
        if comp.shape[0] == 0:
            continue  # full local group: no condition
        conditions.append((local_mat @ comp.T) % 2)
    if not conditions:
        basis = np.eye(model.n_generators, dtype=np.uint8)
    else:
        stacked = np.concatenate(conditions, axis=1)
        basis = gf2.kernel(stacked.T)
    return tuple(model.char(row) for row in gf2.row_basis(basis)) if basis.size else ()


# ---------------------------------------------------------------------------
# built-in models; generator matrices are fixture data, bit-exact.
#
# Three finite places p1 p2 p3 (blocks: unramified, ramified) and one real
# place vR (block: sign).  Every local quadratic character at each finite
# place is the localization of some global one.

_DEFAULT3_ROWS = (
    (1, 0, 1, 0, 1, 0, 0),
    (0, 1, 1, 0, 0, 0, 1),
    (1, 0, 0, 1, 0, 0, 0),
    (0, 0, 0, 0, 0, 1, 1),
)

_DEFAULT4_ROWS = (
    (1, 0, 1, 0, 1, 0, 1, 0, 0),
    (0, 1, 1, 0, 0, 0, 0, 0, 1),
    (1, 0, 0, 1, 0, 0, 1, 0, 0),
    (0, 0, 0, 0, 0, 1, 1, 0, 1),
    (1, 0, 0, 0, 1, 0, 0, 1, 0),
)


def default_model() -> GlobalCharModel:
    places = (PlaceModel("p1", "finite"), PlaceModel("p2", "finite"),
              PlaceModel("p3", "finite"), PlaceModel("vR", "real"))
    return GlobalCharModel(places, _DEFAULT3_ROWS, name="default3")


def default_model4() -> GlobalCharModel:
    places = (PlaceModel("q1", "finite"), PlaceModel("q2", "finite"),
              PlaceModel("q3", "finite"), PlaceModel("q4", "finite"),
              PlaceModel("vR", "real"))
    return GlobalCharModel(places, _DEFAULT4_ROWS, name="default4")


def local_group(model: GlobalCharModel, place_id: str) -> CharClassGroup:
    p = model.place(place_id)
    return CharClassGroup(("local", place_id, p.local_rank))


def global_group(model: GlobalCharModel) -> CharClassGroup:
    return CharClassGroup(("global", model))
