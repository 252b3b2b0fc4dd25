"""Exact Weyl-sum and elliptic-expansion constants for classical shapes.

A shape is a product of GL / Sp / SO / O / Torus factors (plus a paired
GL factor with a swap twist).  All constants are exact fractions; the
Weyl sums run over signed permutations, the elliptic expansions over
plus-minus eigenvalue splits.  Determinants are taken on the full real
torus span including central directions, so torus factors kill
regularity.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

KINDS = ("GL", "Sp", "SO", "O", "Torus", "GLpair")


class WeylSizeError(RuntimeError):
    pass


@dataclass(frozen=True)
class Factor:
    kind: str
    size: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown factor kind {self.kind!r}")
        if self.size < 0:
            raise ValueError("negative size")
        if self.kind == "Sp" and self.size % 2:
            raise ValueError("Sp factors have even size")

    @property
    def rank(self) -> int:
        if self.kind in ("Sp",):
            return self.size // 2
        if self.kind in ("SO", "O"):
            return self.size // 2
        if self.kind == "GLpair":
            return 2 * self.size
        return self.size  # GL, Torus

    @property
    def twistable(self) -> bool:
        return self.kind in ("O", "GLpair")


@dataclass(frozen=True)
class ReductiveShape:
    factors: Tuple[Factor, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors",
                           tuple(sorted(self.factors, key=lambda f: (f.kind, f.size))))

    @property
    def rank(self) -> int:
        return sum(f.rank for f in self.factors)

    def __str__(self):
        if not self.factors:
            return "1"
        return "*".join(f"{f.kind}{f.size}" for f in self.factors)


def shape(*pairs) -> ReductiveShape:
    return ReductiveShape(tuple(Factor(k, s) for k, s in pairs))


def parse_shape(text: str) -> ReductiveShape:
    factors = []
    text = text.strip()
    if text in ("1", ""):
        return ReductiveShape(())
    for atom in text.split("*"):
        atom = atom.strip()
        for kind in ("GLpair", "GL", "Sp", "SO", "O", "Torus", "T"):
            if atom.startswith(kind) and atom[len(kind):].isdigit():
                k = "Torus" if kind == "T" else kind
                factors.append(Factor(k, int(atom[len(kind):])))
                break
        else:
            raise ValueError(f"cannot parse shape atom {atom!r}")
    return ReductiveShape(tuple(factors))


@dataclass(frozen=True)
class WeylElementRec:
    blocks: Tuple[tuple, ...]       # per factor: (perm, signmask) or pair data
    coset: Tuple[bool, ...]


@dataclass(frozen=True)
class EllipticClassRec:
    splits: Tuple[Tuple[int, int], ...]  # per factor (+1-eigenspace, -1-eigenspace)
    coset: Tuple[bool, ...]


def _normalize_coset(s: ReductiveShape, coset) -> Tuple[bool, ...]:
    if coset == "inner" or coset is None:
        return tuple(False for _ in s.factors)
    if coset == "outer":
        vec = tuple(f.twistable for f in s.factors)
        if not any(vec):
            raise ValueError("shape has no twistable factor")
        return vec
    vec = tuple(bool(c) for c in coset)
    if len(vec) != len(s.factors):
        raise ValueError("coset vector length mismatch")
    for f, c in zip(s.factors, vec):
        if c and not f.twistable:
            raise ValueError(f"factor {f.kind}{f.size} has no outer component")
    return vec


def coset_vectors(s: ReductiveShape) -> List[Tuple[bool, ...]]:
    options = [(False, True) if f.twistable else (False,) for f in s.factors]
    return [tuple(v) for v in itertools.product(*options)]


# ---------------------------------------------------------------------------
# Weyl elements

def _signed_perms(m: int, parity: Optional[int]) -> List[tuple]:
    out = []
    for perm in itertools.permutations(range(m)):
        for smask in range(1 << m):
            if parity is not None and bin(smask).count("1") % 2 != parity:
                continue
            out.append((perm, smask))
    return out


def _factor_weyl_order(f: Factor) -> int:
    m = f.rank
    if f.kind == "GL":
        return math.factorial(f.size)
    if f.kind == "Sp":
        return (1 << m) * math.factorial(m)
    if f.kind in ("SO", "O"):
        if f.size % 2:
            return (1 << (f.size // 2)) * math.factorial(f.size // 2)
        m = f.size // 2
        return max((1 << (m - 1)) * math.factorial(m), 1) if m else 1
    if f.kind == "GLpair":
        return math.factorial(f.size) ** 2
    return 1  # Torus


def weyl_order(s: ReductiveShape) -> int:
    out = 1
    for f in s.factors:
        out *= _factor_weyl_order(f)
    return out


def _factor_elements(f: Factor, outer: bool) -> List[tuple]:
    if f.kind == "GL":
        return [(perm, 0) for perm in itertools.permutations(range(f.size))]
    if f.kind == "Sp":
        return _signed_perms(f.size // 2, None)
    if f.kind in ("SO", "O"):
        if f.size % 2:
            return _signed_perms(f.size // 2, None)
        m = f.size // 2
        if m == 0:
            return [((), 0)] if not outer else [((), 0)]
        return _signed_perms(m, 1 if outer else 0)
    if f.kind == "GLpair":
        k = f.size
        return [(p1, p2) for p1 in itertools.permutations(range(k))
                for p2 in itertools.permutations(range(k))]
    return [((), 0) if f.size == 0 else (tuple(range(f.size)), 0)]  # Torus identity


def _coset_size(f: Factor, outer: bool) -> int:
    if f.kind == "GL":
        return math.factorial(f.size)
    if f.kind == "Sp":
        return (1 << (f.size // 2)) * math.factorial(f.size // 2)
    if f.kind in ("SO", "O"):
        if f.size % 2:
            return (1 << (f.size // 2)) * math.factorial(f.size // 2)
        m = f.size // 2
        if m == 0:
            return 1
        return (1 << (m - 1)) * math.factorial(m)
    if f.kind == "GLpair":
        return math.factorial(f.size) ** 2
    return 1


def weyl_enumerate(s: ReductiveShape, coset="inner",
                   max_order: int = 10 ** 6) -> List[WeylElementRec]:
    vec = _normalize_coset(s, coset)
    total = 1
    for f, outer in zip(s.factors, vec):
        total *= _coset_size(f, outer)
    if total > max_order:
        raise WeylSizeError(f"Weyl set of size {total} exceeds bound {max_order}")
    combos = itertools.product(*[_factor_elements(f, o) for f, o in zip(s.factors, vec)])
    return [WeylElementRec(tuple(combo), vec) for combo in combos]


def _factor_matrix(f: Factor, element: tuple, outer: bool) -> List[List[int]]:
    m = f.rank
    mat = [[0] * m for _ in range(m)]
    if f.kind == "GLpair":
        k = f.size
        p1, p2 = element
        if not outer:
            for i in range(k):
                mat[p1[i]][i] = 1
                mat[k + p2[i]][k + i] = 1
        else:
            # swap composed with inverse-transpose: (x, y) -> (-p1 y, -p2 x)
            for i in range(k):
                mat[p1[i]][k + i] = -1
                mat[k + p2[i]][i] = -1
        return mat
    if f.kind == "Torus":
        for i in range(m):
            mat[i][i] = 1
        return mat
    perm, smask = element
    for i in range(m):
        mat[perm[i]][i] = -1 if (smask >> i) & 1 else 1
    return mat


def _block_diag(blocks: List[List[List[int]]]) -> List[List[int]]:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[off + i][off + j] = v
        off += len(b)
    return out


def action_matrix(s: ReductiveShape, rec: WeylElementRec) -> List[List[int]]:
    blocks = [_factor_matrix(f, el, o)
              for f, el, o in zip(s.factors, rec.blocks, rec.coset)]
    return _block_diag(blocks)


def int_det(mat: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) integer determinant."""
    n = len(mat)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _positive_roots(s: ReductiveShape) -> List[Tuple[int, ...]]:
    roots: List[Dict[int, int]] = []
    off = 0
    for f in s.factors:
        m = f.rank
        local: List[Dict[int, int]] = []
        if f.kind == "GL":
            for i in range(f.size):
                for j in range(i + 1, f.size):
                    local.append({off + i: 1, off + j: -1})
        elif f.kind == "GLpair":
            k = f.size
            for blockoff in (off, off + k):
                for i in range(k):
                    for j in range(i + 1, k):
                        local.append({blockoff + i: 1, blockoff + j: -1})
        elif f.kind == "Sp":
            mm = f.size // 2
            for i in range(mm):
                for j in range(i + 1, mm):
                    local.append({off + i: 1, off + j: -1})
                    local.append({off + i: 1, off + j: 1})
                local.append({off + i: 2})
        elif f.kind in ("SO", "O"):
            if f.size % 2:
                mm = f.size // 2
                for i in range(mm):
                    for j in range(i + 1, mm):
                        local.append({off + i: 1, off + j: -1})
                        local.append({off + i: 1, off + j: 1})
                    local.append({off + i: 1})
            else:
                mm = f.size // 2
                for i in range(mm):
                    for j in range(i + 1, mm):
                        local.append({off + i: 1, off + j: -1})
                        local.append({off + i: 1, off + j: 1})
        roots.extend(local)
        off += m
    n = s.rank
    out = []
    for d in roots:
        vec = [0] * n
        for idx, c in d.items():
            vec[idx] = c
        out.append(tuple(vec))
    return out


def _sign_of(s: ReductiveShape, mat: List[List[int]],
             positives: List[Tuple[int, ...]], pos_set) -> int:
    flips = 0
    n = s.rank
    for alpha in positives:
        image = tuple(sum(mat[i][j] * alpha[j] for j in range(n)) for i in range(n))
        if tuple(-c for c in image) in pos_set:
            flips += 1
    return -1 if flips % 2 else 1


def i_theta(s: ReductiveShape, coset="inner",
            max_order: int = 10 ** 6) -> Fraction:
    """Weighted count of regular elements in the chosen Weyl coset."""
    recs = weyl_enumerate(s, coset, max_order)
    positives = _positive_roots(s)
    pos_set = set(positives)
    n = s.rank
    total = Fraction(0)
    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for rec in recs:
        mat = action_matrix(s, rec)
        diff = [[mat[i][j] - ident[i][j] for j in range(n)] for i in range(n)]
        det = int_det(diff)
        if det == 0:
            continue
        total += Fraction(_sign_of(s, mat, positives, pos_set), abs(det))
    return total / weyl_order(s)


# ---------------------------------------------------------------------------
# elliptic classes and the sigma recursion

def _factor_splits(f: Factor, outer: bool) -> List[Tuple[int, int]]:
    if f.kind in ("GL", "Torus", "GLpair"):
        return []
    m = f.size
    if f.kind == "Sp":
        return [(a, m - a) for a in range(0, m + 1, 2)]
    want = 1 if outer else 0
    return [(a, m - a) for a in range(m + 1) if (m - a) % 2 == want]


def _split_center_finite(f: Factor, split: Tuple[int, int]) -> bool:
    """Whether Cent(s, factor) has finite centre for this eigenvalue split."""
    a, b = split
    if f.kind == "Sp":
        return True
    if f.kind == "O":
        return True  # Z(O(a) x O(b)) is finite
    # connected SO ambient: only the lone SO(2) has infinite centre
    if (a, b) in ((2, 0), (0, 2)) and f.size == 2:
        return False
    return True


def elliptic_classes(s: ReductiveShape, coset="inner") -> List[EllipticClassRec]:
    """Classes of plus-minus eigenvalue data in the chosen component(s);
    coset may also be "all" to take every component of the shape."""
    if coset == "all":
        out = []
        for vec in coset_vectors(s):
            out.extend(elliptic_classes(s, vec))
        return sorted(set(out), key=lambda r: (r.coset, r.splits))
    vec = _normalize_coset(s, coset)
    per_factor = []
    for f, o in zip(s.factors, vec):
        if f.kind in ("GL", "Torus", "GLpair"):
            if f.size > 0:
                return []  # positive-dimensional centre in every centralizer
            per_factor.append([(0, 0)])
            continue
        splits = [sp for sp in _factor_splits(f, o) if _split_center_finite(f, sp)]
        if not splits:
            return []
        per_factor.append(splits)
    out = [EllipticClassRec(tuple(combo), vec)
           for combo in itertools.product(*per_factor)]
    return out


def _cent_connected_shape(s: ReductiveShape, rec: EllipticClassRec) -> ReductiveShape:
    factors = []
    for f, (a, b) in zip(s.factors, rec.splits):
        kind = "Sp" if f.kind == "Sp" else "SO"
        for part in (a, b):
            if part >= 2:
                factors.append(Factor(kind, part))
    return ReductiveShape(tuple(factors))


def _cent_pi0(s: ReductiveShape, rec: EllipticClassRec) -> int:
    out = 1
    for f, (a, b) in zip(s.factors, rec.splits):
        if f.kind in ("SO", "O") and a >= 1 and b >= 1:
            out *= 2
    return out


_SIGMA_MEMO: Dict[ReductiveShape, Fraction] = {}


def _prune(s: ReductiveShape) -> ReductiveShape:
    kept = [f for f in s.factors
            if not (f.size == 0 or (f.kind == "SO" and f.size == 1))]
    return ReductiveShape(tuple(kept))


def _center_order(s: ReductiveShape) -> Optional[int]:
    """Order of the centre of a connected shape, None if infinite."""
    out = 1
    for f in s.factors:
        if f.kind in ("GL", "Torus") and f.size >= 1:
            return None
        if f.kind == "Sp" and f.size >= 2:
            out *= 2
        elif f.kind == "SO":
            if f.size == 2:
                return None
            if f.size >= 4 and f.size % 2 == 0:
                out *= 2
    return out


def sigma(s: ReductiveShape, max_order: int = 10 ** 6) -> Fraction:
    """The uniquely determined connected-group constant, computed by the
    defining recursion: the Weyl sum equals the elliptic expansion, and
    central classes each contribute sigma of the whole group."""
    for f in s.factors:
        if f.kind in ("O", "GLpair"):
            raise ValueError("sigma is defined for connected shapes")
    s = _prune(s)
    if s in _SIGMA_MEMO:
        return _SIGMA_MEMO[s]
    z = _center_order(s)
    if z is None:
        _SIGMA_MEMO[s] = Fraction(0)
        return _SIGMA_MEMO[s]
    if not s.factors:
        _SIGMA_MEMO[s] = Fraction(1)
        return _SIGMA_MEMO[s]
    ival = i_theta(s, "inner", max_order)
    rest = Fraction(0)
    for rec in elliptic_classes(s, "inner"):
        if _is_central_split(s, rec):
            continue
        sub = _prune(_cent_connected_shape(s, rec))
        rest += Fraction(1, _cent_pi0(s, rec)) * sigma(sub, max_order)
    val = (ival - rest) / z
    _SIGMA_MEMO[s] = val
    return val


def _is_central_split(s: ReductiveShape, rec: EllipticClassRec) -> bool:
    return all(a == 0 or b == 0 for a, b in rec.splits)


def e_theta(s: ReductiveShape, coset="inner",
            max_order: int = 10 ** 6) -> Fraction:
    """Elliptic expansion of the chosen component; provably equal to the
    Weyl sum, but computed independently."""
    total = Fraction(0)
    for rec in elliptic_classes(s, coset):
        sub = _prune(_cent_connected_shape(s, rec))
        total += Fraction(1, _cent_pi0(s, rec)) * sigma(sub, max_order)
    return total
