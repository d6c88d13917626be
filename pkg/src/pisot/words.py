"""Words, substitutions and their exact combinatorics.

Words are plain ``str`` objects whose characters are letters. A
:class:`Substitution` fixes the alphabet order, which in turn fixes the
coordinate order of every abelianization vector and incidence matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np

from . import _kernels


class ValidationError(ValueError):
    """Input violates a precondition (foreign letter, non-Pisot matrix, ...)."""


# ---------------------------------------------------------------------------
# Substitutions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Substitution:
    letters: tuple[str, ...]
    images: dict[str, str]

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "images", dict(self.images))
        if len(set(letters)) != len(letters):
            raise ValidationError(f"duplicate letters in alphabet {letters!r}")
        for a in letters:
            if len(a) != 1 or a.isspace():
                raise ValidationError(f"letter {a!r} is not a single non-whitespace character")
        if set(self.images) != set(letters):
            raise ValidationError("images must be given for exactly the alphabet letters")
        alphabet = set(letters)
        for a in letters:
            img = self.images[a]
            if not img:
                raise ValidationError(f"image of {a!r} is empty")
            bad = set(img) - alphabet
            if bad:
                raise ValidationError(f"image of {a!r} uses letters outside the alphabet: {sorted(bad)}")

    @classmethod
    def from_rules(cls, rules: dict[str, str]) -> Substitution:
        """Build from an ordered ``{letter: image}`` mapping; order = alphabet order."""
        return cls(tuple(rules), dict(rules))

    @property
    def d(self) -> int:
        return len(self.letters)

    def index(self, letter: str) -> int:
        try:
            return self.letters.index(letter)
        except ValueError:
            raise ValidationError(f"letter {letter!r} not in alphabet {''.join(self.letters)!r}") from None

    def __call__(self, w: str) -> str:
        return apply(self, w)

    def __hash__(self):
        return hash((self.letters, tuple(self.images[a] for a in self.letters)))

    def power(self, k: int) -> Substitution:
        if k < 0:
            raise ValueError("power must be >= 0")
        images = {a: a for a in self.letters}
        for _ in range(k):
            images = {a: apply(self, images[a]) for a in self.letters}
        return Substitution(self.letters, images)

    def reorder(self, letters) -> Substitution:
        """Same morphism over the same letters listed in another order."""
        letters = tuple(letters)
        if sorted(letters) != sorted(self.letters):
            raise ValidationError(
                f"alphabets differ: {''.join(self.letters)!r} vs {''.join(letters)!r}")
        return Substitution(letters, self.images)

    @property
    def matrix(self) -> np.ndarray:
        return incidence_matrix(self)

    def encode(self, w: str) -> np.ndarray:
        """Letter indices of ``w`` as an int64 array."""
        table = {ord(a): i for i, a in enumerate(self.letters)}
        try:
            return np.array([table[ord(c)] for c in w], dtype=np.int64)
        except KeyError as exc:
            raise ValidationError(f"letter {chr(exc.args[0])!r} not in alphabet") from None

    def __str__(self):
        return "\n".join(f"{a} -> {self.images[a]}" for a in self.letters)


def abelianize(w: str, letters) -> np.ndarray:
    """Occurrence count of each letter of ``letters`` in ``w``."""
    if isinstance(letters, Substitution):
        letters = letters.letters
    letters = tuple(letters)
    foreign = set(w) - set(letters)
    if foreign:
        raise ValidationError(f"letters {sorted(foreign)} not in alphabet {''.join(letters)!r}")
    return np.array([w.count(a) for a in letters], dtype=np.int64)


def apply(sigma: Substitution, w: str) -> str:
    images = sigma.images
    try:
        return "".join([images[c] for c in w])
    except KeyError as exc:
        raise ValidationError(f"letter {exc.args[0]!r} not in alphabet") from None


def incidence_matrix(sigma: Substitution) -> np.ndarray:
    """``M[i, j]`` = number of occurrences of letter i in the image of letter j."""
    d = sigma.d
    M = np.zeros((d, d), dtype=np.int64)
    for j, b in enumerate(sigma.letters):
        M[:, j] = abelianize(sigma.images[b], sigma.letters)
    return M


def is_primitive(M, cap: int | None = None) -> bool:
    """True iff some power M^k with k <= cap is entrywise positive.

    The default cap is Wielandt's bound (d-1)^2 + 1.
    """
    B = (np.asarray(M) > 0).astype(np.int64)
    d = B.shape[0]
    if cap is None:
        cap = (d - 1) ** 2 + 1
    P = B.copy()
    for _ in range(cap):
        if P.all():
            return True
        P = ((P @ B) > 0).astype(np.int64)
    return False


# ---------------------------------------------------------------------------
# Periodic points
# ---------------------------------------------------------------------------

class FixedPointStream:
    """Lazily grown prefix of the fixed point of ``sigma**k`` starting with ``seed``.

    The buffer only ever grows at the right end: letters already emitted are
    never rewritten.
    """

    def __init__(self, sigma: Substitution, k: int, seed: str):
        self.base = sigma
        self.k = k
        self.seed = seed
        self.sigma = sigma.power(k)
        first = self.sigma.images[seed]
        if not first.startswith(seed) or len(first) < 2:
            raise ValidationError(f"{seed!r} does not seed an infinite fixed point of sigma^{k}")
        self._chunks = [first]
        self._length = len(first)
        self._expanded = 1          # letters of the buffer whose image is already appended
        self._word = first          # cached join of _chunks
        self._codes = None

    def __len__(self):
        return self._length

    def _text(self) -> str:
        if len(self._chunks) > 1:
            self._word = "".join(self._chunks)
            self._chunks = [self._word]
        return self._word

    def extend_to(self, n: int) -> None:
        images = self.sigma.images
        while self._length < n:
            word = self._text()
            # each letter yields at least one letter, so this never overshoots badly
            stop = min(self._length, self._expanded + (n - self._length))
            chunk = "".join([images[c] for c in word[self._expanded:stop]])
            self._chunks.append(chunk)
            self._length += len(chunk)
            self._expanded = stop

    def prefix(self, n: int) -> str:
        self.extend_to(n)
        return self._text()[:n]

    def codes(self, n: int) -> np.ndarray:
        """Letter indices of the first ``n`` letters (int64)."""
        self.extend_to(n)
        if self._codes is None or len(self._codes) < n:
            self._codes = self.sigma.encode(self._text())
        return self._codes[:n]

    def __repr__(self):
        return f"FixedPointStream(k={self.k}, seed={self.seed!r}, buffered={self._length})"


def periodic_point(sigma: Substitution, kcap: int | None = None) -> FixedPointStream:
    """Smallest k (then smallest seed letter) with sigma^k(a) starting with a."""
    if kcap is None:
        kcap = math.factorial(sigma.d)
    # only the first letter and the length of sigma^k(a) matter
    first = {a: a for a in sigma.letters}
    length = {a: 1 for a in sigma.letters}
    for k in range(1, kcap + 1):
        first = {a: sigma.images[first[a]][0] for a in sigma.letters}
        length = {a: sum(length[c] for c in sigma.images[a]) for a in sigma.letters}
        for a in sigma.letters:
            if first[a] == a and length[a] > 1:
                return FixedPointStream(sigma, k, a)
    raise ValidationError(f"no periodic seed with k <= {kcap}")


# ---------------------------------------------------------------------------
# Prefix-suffix automaton
# ---------------------------------------------------------------------------

class Edge(NamedTuple):
    """Edge ``letter -> source`` labelled (prefix, letter, suffix), source image = prefix+letter+suffix."""
    source: str
    prefix: str
    letter: str
    suffix: str


def prefix_suffix_automaton(sigma: Substitution) -> list[Edge]:
    edges = []
    for b in sigma.letters:
        img = sigma.images[b]
        for k, a in enumerate(img):
            edges.append(Edge(b, img[:k], a, img[k + 1:]))
    return edges


# ---------------------------------------------------------------------------
# Strong coincidence
# ---------------------------------------------------------------------------

class Coincidence(NamedTuple):
    k: int
    letter: str
    variant: str                  # "prefix" or "suffix"
    positions: tuple[int, int]    # index of the shared letter in each image


@dataclass
class CoincidenceReport:
    holds: bool
    inconclusive: bool
    witness: dict[tuple[str, str], Coincidence]
    missing: list[tuple[str, str]]


def _first_coincidence(w1, w2, d, letters, variant):
    c1 = np.array([letters.index(c) for c in w1], dtype=np.int64)
    c2 = np.array([letters.index(c) for c in w2], dtype=np.int64)
    if variant == "suffix":
        c1, c2 = c1[::-1], c2[::-1]
    P1 = _kernels.prefix_counts(c1, d)[:-1]
    P2 = _kernels.prefix_counts(c2, d)[:-1]
    seen = {}
    for i in range(len(c1)):
        seen.setdefault((P1[i].tobytes(), int(c1[i])), i)
    for j in range(len(c2)):
        i = seen.get((P2[j].tobytes(), int(c2[j])))
        if i is not None:
            if variant == "suffix":
                return len(w1) - 1 - i, len(w2) - 1 - j
            return i, j
    return None


def strong_coincidence(sigma: Substitution, kcap: int = 20, max_length: int = 200_000) -> CoincidenceReport:
    """Search each letter pair for a coincidence within k <= kcap.

    A pair left without a witness makes the report inconclusive rather than a
    disproof; images longer than ``max_length`` also end the search early.
    """
    letters = sigma.letters
    witness = {}
    for a in letters:
        witness[(a, a)] = Coincidence(0, a, "prefix", (0, 0))
    pending = list(combinations(letters, 2))
    power = {a: a for a in letters}
    for k in range(1, kcap + 1):
        if not pending:
            break
        power = {a: apply(sigma, power[a]) for a in letters}
        if max(len(w) for w in power.values()) > max_length:
            break
        still = []
        for b1, b2 in pending:
            for variant in ("prefix", "suffix"):
                hit = _first_coincidence(power[b1], power[b2], sigma.d, letters, variant)
                if hit is not None:
                    witness[(b1, b2)] = Coincidence(k, power[b1][hit[0]], variant, hit)
                    break
            else:
                still.append((b1, b2))
        pending = still
    return CoincidenceReport(not pending, bool(pending), witness, pending)
