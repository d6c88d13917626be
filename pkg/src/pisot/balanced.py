"""Minimal balanced blocks and the morphism generating the common points of two stepped lines."""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _kernels
from .fractal import PointCloud
from .spectral import PerronData, classify, project_stable
from .words import FixedPointStream, Substitution, ValidationError, apply, periodic_point

DEFAULT_SEED_CAP = 10_000
DEFAULT_BLOCKLEN_CAP = 1_000
DEFAULT_BLOCKCOUNT_CAP = 10_000


class BalancedBlock(NamedTuple):
    top: str
    bottom: str

    def __str__(self):
        return f"{self.top} | {self.bottom}"


def is_balanced(top: str, bottom: str) -> bool:
    return Counter(top) == Counter(bottom)


def is_minimal(block: BalancedBlock) -> bool:
    top, bottom = block
    if len(top) != len(bottom) or not top or not is_balanced(top, bottom):
        return False
    return all(Counter(top[:k]) != Counter(bottom[:k]) for k in range(1, len(top)))


def decompose_minimal(block: BalancedBlock) -> list[BalancedBlock]:
    """Cut a balanced pair at every balanced prefix length, left to right.

    Each piece is then minimal, and no other cut into minimal pieces exists.
    """
    top, bottom = block
    if len(top) != len(bottom):
        raise ValidationError("balanced block halves must have equal length")
    table = {a: i for i, a in enumerate(sorted(set(top) | set(bottom)))}
    cuts = _kernels.balanced_positions(
        np.array([table[a] for a in top], dtype=np.int64),
        np.array([table[a] for a in bottom], dtype=np.int64),
        max(len(table), 1),
    )
    if cuts[-1] != len(top):
        raise ValidationError(f"pair ({top!r}, {bottom!r}) is not balanced")
    return [BalancedBlock(top[a:b], bottom[a:b]) for a, b in zip(cuts[:-1], cuts[1:])]


def seed_balanced_prefix(u: FixedPointStream, v: FixedPointStream,
                         cap: int = DEFAULT_SEED_CAP) -> BalancedBlock | None:
    """Shortest nonempty balanced prefix pair of length <= cap, or None."""
    letters = u.sigma.letters
    if tuple(v.sigma.letters) != tuple(letters):
        raise ValidationError("streams use different alphabet orders")
    hits = _kernels.balanced_positions(u.codes(cap), v.codes(cap), len(letters), 2)
    if len(hits) < 2:
        return None
    k = int(hits[1])
    return BalancedBlock(u.prefix(k), v.prefix(k))


# ---------------------------------------------------------------------------
# The block morphism
# ---------------------------------------------------------------------------

def block_name(i: int) -> str:
    return chr(ord("A") + i) if i < 26 else f"B{i}"


@dataclass
class BlockMorphism:
    blocks: list[BalancedBlock]
    phi: list[tuple[int, ...]]
    names: list[str] = field(default=None)

    def __post_init__(self):
        if self.names is None:
            self.names = [block_name(i) for i in range(len(self.blocks))]
        self._index = {b: i for i, b in enumerate(self.blocks)}
        self._by_name = {n: i for i, n in enumerate(self.names)}

    def __len__(self):
        return len(self.blocks)

    def index(self, key) -> int:
        if isinstance(key, (int, np.integer)):
            if not 0 <= key < len(self.blocks):
                raise ValidationError(f"unknown block index {key}")
            return int(key)
        if isinstance(key, BalancedBlock) or isinstance(key, tuple):
            try:
                return self._index[BalancedBlock(*key)]
            except KeyError:
                raise ValidationError(f"block {key!r} is not in the alphabet") from None
        try:
            return self._by_name[key]
        except KeyError:
            raise ValidationError(f"unknown block name {key!r}") from None

    def image(self, key) -> str:
        """phi of one block, written with block names."""
        return "".join(self.names[j] for j in self.phi[self.index(key)])

    def apply(self, word, times: int = 1) -> tuple[int, ...]:
        w = tuple(self.index(x) for x in word)
        for _ in range(times):
            w = tuple(j for i in w for j in self.phi[i])
        return w

    def flatten(self, word) -> BalancedBlock:
        idx = [self.index(x) for x in word]
        return BalancedBlock("".join(self.blocks[i].top for i in idx),
                             "".join(self.blocks[i].bottom for i in idx))

    def matrix(self) -> np.ndarray:
        """Incidence matrix of phi over the block alphabet."""
        n = len(self.blocks)
        M = np.zeros((n, n), dtype=np.int64)
        for j, img in enumerate(self.phi):
            for i in img:
                M[i, j] += 1
        return M

    def to_text(self) -> str:
        lines = [f"block {n} = {b.top} | {b.bottom}" for n, b in zip(self.names, self.blocks)]
        lines += [f"phi {n} -> {self.image(n)}" for n in self.names]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> BlockMorphism:
        names, blocks, rules = [], [], {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            kind, _, rest = line.partition(" ")
            if kind == "block":
                name, eq, pair = rest.partition("=")
                top, bar, bottom = pair.partition("|")
                if not eq or not bar:
                    raise ValidationError(f"line {lineno}: expected 'block <Name> = <top> | <bottom>'")
                names.append(name.strip())
                blocks.append(BalancedBlock(top.strip(), bottom.strip()))
            elif kind == "phi":
                name, arrow, img = rest.partition("->")
                if not arrow:
                    raise ValidationError(f"line {lineno}: expected 'phi <Name> -> <image>'")
                rules[name.strip()] = img.strip()
            else:
                raise ValidationError(f"line {lineno}: unknown record {kind!r}")
        m = cls(blocks, [()] * len(blocks), names)
        phi = []
        for n in names:
            if n not in rules:
                raise ValidationError(f"no phi rule for block {n}")
            phi.append(tuple(m.index(x) for x in _split_names(rules[n], names)))
        m.phi = phi
        return m


def _split_names(word: str, names: list[str]) -> list[str]:
    """Tokenize a concatenation of block names (longest match first)."""
    ordered = sorted(names, key=len, reverse=True)
    out, i = [], 0
    while i < len(word):
        for n in ordered:
            if word.startswith(n, i):
                out.append(n)
                i += len(n)
                break
        else:
            raise ValidationError(f"cannot read block names from {word!r} at offset {i}")
    return out


# ---------------------------------------------------------------------------
# The intersection algorithm
# ---------------------------------------------------------------------------

class Status(enum.Enum):
    SUCCESS = "Success"
    EMPTY_INTERSECTION_SUSPECTED = "EmptyIntersectionSuspected"
    CAP_EXCEEDED = "CapExceeded"


@dataclass
class IntersectionReport:
    status: Status
    morphism: BlockMorphism | None
    sigma1: Substitution            # the (possibly raised) substitutions actually used
    sigma2: Substitution
    power: int
    caps: dict
    block_count: int = 0
    max_block_length: int = 0
    message: str = ""


def common_alphabet(sigma1: Substitution, sigma2: Substitution) -> Substitution:
    """sigma2 rewritten over sigma1's alphabet order, after checking the matrices agree."""
    sigma2 = sigma2.reorder(sigma1.letters)
    if not np.array_equal(sigma1.matrix, sigma2.matrix):
        raise ValidationError("the two substitutions have different incidence matrices")
    return sigma2


def intersection_morphism(sigma1: Substitution, sigma2: Substitution,
                          seed_cap: int = DEFAULT_SEED_CAP,
                          blocklen_cap: int = DEFAULT_BLOCKLEN_CAP,
                          blockcount_cap: int = DEFAULT_BLOCKCOUNT_CAP) -> IntersectionReport:
    sigma2 = common_alphabet(sigma1, sigma2)
    cls = classify(sigma1.matrix)
    if not cls.ok:
        raise ValidationError(f"not an irreducible unimodular Pisot matrix: {cls.reasons}")
    caps = {"seed": seed_cap, "blocklen": blocklen_cap, "blockcount": blockcount_cap}

    k1 = periodic_point(sigma1).k
    k2 = periodic_point(sigma2).k
    power = k1 * k2 // math.gcd(k1, k2)
    s1, s2 = sigma1.power(power), sigma2.power(power)
    u, v = periodic_point(s1), periodic_point(s2)
    report = IntersectionReport(Status.SUCCESS, None, s1, s2, power, caps)

    seed = seed_balanced_prefix(u, v, seed_cap)
    if seed is None:
        report.status = Status.EMPTY_INTERSECTION_SUSPECTED
        report.message = (f"no balanced prefix pair of length <= {seed_cap}: "
                          "the two stepped lines share no point besides the origin")
        return report

    blocks = [seed]
    index = {seed: 0}
    phi = []
    longest = len(seed.top)
    while len(phi) < len(blocks):
        X = blocks[len(phi)]
        image = []
        for piece in decompose_minimal(BalancedBlock(apply(s1, X.top), apply(s2, X.bottom))):
            j = index.get(piece)
            if j is None:
                j = index[piece] = len(blocks)
                blocks.append(piece)
                longest = max(longest, len(piece.top))
                if len(piece.top) > blocklen_cap or len(blocks) > blockcount_cap:
                    report.status = Status.CAP_EXCEEDED
                    report.block_count = len(blocks)
                    report.max_block_length = longest
                    report.message = (
                        f"caps exceeded ({len(blocks)} blocks, longest {longest} letters); "
                        "the procedure only terminates when 0 is an inner point of the "
                        "Rauzy fractal of the first substitution, which may fail here")
                    return report
            image.append(j)
        phi.append(tuple(image))

    report.morphism = BlockMorphism(blocks, phi)
    report.block_count = len(blocks)
    report.max_block_length = longest
    return report


# ---------------------------------------------------------------------------
# Common points and aligned letters
# ---------------------------------------------------------------------------

def _fixed_points(sigma1: Substitution, sigma2: Substitution):
    sigma2 = common_alphabet(sigma1, sigma2)
    return periodic_point(sigma1), periodic_point(sigma2)


def balanced_prefix_lengths(sigma1: Substitution, sigma2: Substitution, N: int) -> np.ndarray:
    """All k <= N where the length-k prefixes of the two fixed points are balanced."""
    u, v = _fixed_points(sigma1, sigma2)
    return _kernels.balanced_positions(u.codes(N), v.codes(N), sigma1.d)


def common_points(sigma1: Substitution, sigma2: Substitution, N: int, pd: PerronData,
                  m: BlockMorphism | None) -> PointCloud:
    """Projected common vertices of both stepped lines up to prefix length N.

    Point k is labelled by the block ending at k; the origin carries the seed
    block's label. With no morphism (empty intersection) only the origin is kept.
    """
    u, v = _fixed_points(sigma1, sigma2)
    d = sigma1.d
    if m is None:
        return PointCloud(np.zeros((1, d - 1)), np.zeros(1, dtype=np.int64), ["origin"],
                          source="common points (none besides origin)", meta={"N": N})
    hits = _kernels.balanced_positions(u.codes(N), v.codes(N), d)
    top, bottom = u.prefix(N), v.prefix(N)
    labels = np.zeros(len(hits), dtype=np.int64)
    for n in range(1, len(hits)):
        a, b = hits[n - 1], hits[n]
        labels[n] = m.index(BalancedBlock(top[a:b], bottom[a:b]))
    vertices = _kernels.prefix_counts(u.codes(N), d)[hits]
    return PointCloud(project_stable(pd, vertices), labels, list(m.names),
                      source=f"common points N={N}", meta={"N": N, "positions": hits})


def aligned_letter_check(sigma1: Substitution, sigma2: Substitution, letter: str, N: int) -> list[int]:
    """Positions k < N where both fixed points carry ``letter``."""
    u, v = _fixed_points(sigma1, sigma2)
    code = sigma1.index(letter)
    both = (u.codes(N) == code) & (v.codes(N) == code)
    return np.flatnonzero(both).tolist()
