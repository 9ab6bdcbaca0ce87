"""Binary linear codes with bit-packed words.

A word of length n is an ``int`` whose bit ``i`` is coordinate ``i``; in
text form coordinate 0 is the leftmost character.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import random
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .combinatorics import Composition, enumerate_compositions

DEFAULT_PAIR_BUDGET = 2 ** 26
DEFAULT_SEARCH_CAP = 10


class BudgetExceeded(RuntimeError):
    pass


class CapExceeded(RuntimeError):
    pass


def weight(word: int) -> int:
    return word.bit_count()


def rref_rows(rows: Iterable[int], n: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form over GF(2); returns nonzero rows and pivots."""
    work = [r for r in rows if r]
    basis: list[int] = []
    pivots: list[int] = []
    for col in range(n):
        bit = 1 << col
        p = next((i for i, r in enumerate(work) if r & bit), None)
        if p is None:
            continue
        row = work.pop(p)
        work = [r ^ row if r & bit else r for r in work]
        basis = [b ^ row if b & bit else b for b in basis]
        basis.append(row)
        pivots.append(col)
    return basis, pivots


def gf2_rank(rows: Iterable[int], n: int) -> int:
    return len(rref_rows(rows, n)[0])


@dataclass(frozen=True)
class BinaryCode:
    n: int
    generator: tuple[int, ...]
    k: int = field(init=False)

    def __post_init__(self):
        for row in self.generator:
            if row >> self.n:
                raise ValueError("generator row longer than n")
        if gf2_rank(self.generator, self.n) != len(self.generator):
            raise ValueError("generator matrix is rank deficient")
        object.__setattr__(self, "k", len(self.generator))

    @classmethod
    def from_strings(cls, rows: Sequence[str], n: int | None = None) -> "BinaryCode":
        rows = [r.strip() for r in rows if r.strip()]
        if n is None:
            if not rows:
                raise ValueError("cannot infer length of an empty generator")
            n = len(rows[0])
        words = []
        for r in rows:
            if len(r) != n or set(r) - {"0", "1"}:
                raise ValueError(f"bad generator row {r!r}")
            words.append(sum(1 << i for i, ch in enumerate(r) if ch == "1"))
        return cls(n, tuple(words))

    @classmethod
    def zero(cls, n: int) -> "BinaryCode":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "BinaryCode":
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def parity_check(cls, n: int) -> "BinaryCode":
        """Span of the length-n words 110..0, 0110..0, ..., 0..011."""
        return cls(n, tuple(3 << i for i in range(n - 1)))

    def row_strings(self) -> list[str]:
        return [word_to_string(r, self.n) for r in self.generator]

    def codewords(self) -> Iterator[int]:
        """All 2**k codewords in Gray-code order."""
        word = 0
        yield word
        for step in range(1, 1 << self.k):
            word ^= self.generator[(step & -step).bit_length() - 1]
            yield word

    def canonical(self) -> tuple[int, ...]:
        return tuple(sorted(rref_rows(self.generator, self.n)[0]))

    def same_code(self, other: "BinaryCode") -> bool:
        return self.n == other.n and self.canonical() == other.canonical()

    def minimum_distance(self) -> int | None:
        """Smallest nonzero weight, or None for the zero code."""
        best = None
        for w in self.codewords():
            if w:
                wt = w.bit_count()
                if best is None or wt < best:
                    best = wt
        return best


def word_to_string(word: int, n: int) -> str:
    return "".join("1" if word >> i & 1 else "0" for i in range(n))


def dual(code: BinaryCode) -> BinaryCode:
    """Orthogonal complement under the standard inner product."""
    n = code.n
    basis, pivots = rref_rows(code.generator, n)
    pivot_set = set(pivots)
    rows = []
    for f in range(n):
        if f in pivot_set:
            continue
        v = 1 << f
        for row, p in zip(basis, pivots):
            if row >> f & 1:
                v |= 1 << p
        rows.append(v)
    return BinaryCode(n, tuple(rows))


def is_lcd(code: BinaryCode) -> bool:
    """True when the code meets its dual only in zero."""
    return gf2_rank(code.generator + dual(code).generator, code.n) == code.n


def gram_nonsingular(rows: Sequence[int]) -> bool:
    """Massey's criterion: G G^T invertible over GF(2) iff the code is LCD."""
    k = len(rows)
    gram = []
    for a in rows:
        gram.append(sum(((a & b).bit_count() & 1) << j for j, b in enumerate(rows)))
    return gf2_rank(gram, k) == k


@dataclass(frozen=True)
class WeightDistribution:
    n: int
    counts: tuple[int, ...]


def weight_distribution(code: BinaryCode, budget: int = DEFAULT_PAIR_BUDGET) -> WeightDistribution:
    if 1 << code.k > budget:
        raise BudgetExceeded(f"2^{code.k} codewords exceed budget {budget}")
    counts = [0] * (code.n + 1)
    for w in code.codewords():
        counts[w.bit_count()] += 1
    return WeightDistribution(code.n, tuple(counts))


@dataclass(frozen=True)
class JointEnumerator:
    """Coefficients ``M(n00, n01, n10, n11)`` of the joint weight enumerator."""

    n: int
    coeffs: dict

    def __getitem__(self, m) -> int:
        return self.coeffs.get(Composition(*m), 0)

    def vector(self) -> list[int]:
        """Coefficients in the order of ``enumerate_compositions(n)``."""
        return [self.coeffs.get(m, 0) for m in enumerate_compositions(self.n)]

    def total(self) -> int:
        return sum(self.coeffs.values())

    def terms(self) -> list[tuple[Composition, int]]:
        return [(m, self.coeffs[m]) for m in enumerate_compositions(self.n) if self.coeffs.get(m)]


def joint_enumerator(a: BinaryCode, b: BinaryCode, budget: int = DEFAULT_PAIR_BUDGET) -> JointEnumerator:
    """Count codeword pairs ``(u, v)`` by coordinate-pair profile."""
    if a.n != b.n:
        raise ValueError("codes must have equal length")
    if 1 << (a.k + b.k) > budget:
        raise BudgetExceeded(f"2^{a.k + b.k} pairs exceed budget {budget}")
    n = a.n
    mask = (1 << n) - 1
    counts: dict[tuple[int, int, int], int] = {}
    bwords = list(b.codewords())
    for u in a.codewords():
        nu = ~u & mask
        for v in bwords:
            key = ((nu & v).bit_count(), (u & ~v).bit_count(), (u & v).bit_count())
            counts[key] = counts.get(key, 0) + 1
    coeffs = {
        Composition(n - j - k - l, j, k, l): c for (j, k, l), c in counts.items()
    }
    return JointEnumerator(n, coeffs)


def iter_subspaces(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Every k-dimensional subspace of GF(2)^n exactly once, as the rows of
    its reduced row echelon generator, in canonical order (pivot sets in
    lexicographic order, then free bits counting upward)."""
    for pivots in combinations(range(n), k):
        pivot_set = set(pivots)
        free = [
            [c for c in range(p + 1, n) if c not in pivot_set]
            for p in pivots
        ]
        slots = [(r, c) for r, cols in enumerate(free) for c in cols]
        base = [1 << p for p in pivots]
        for bits in product((0, 1), repeat=len(slots)):
            rows = base[:]
            for (r, c), bit in zip(slots, bits):
                if bit:
                    rows[r] |= 1 << c
            yield tuple(rows)


def gaussian_binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= (1 << (n - i)) - 1
        den *= (1 << (i + 1)) - 1
    return num // den


def _min_distance_at_least(rows: Sequence[int], d: int) -> bool:
    if any(r.bit_count() < d for r in rows):
        return False
    word = 0
    for step in range(1, 1 << len(rows)):
        word ^= rows[(step & -step).bit_length() - 1]
        if word.bit_count() < d:
            return False
    return True


def exhaustive_lcd_search(n: int, k: int, d: int, cap: int = DEFAULT_SEARCH_CAP) -> BinaryCode | None:
    """First LCD [n, k] code of minimum distance >= d in canonical order."""
    if n > cap:
        raise CapExceeded(f"n={n} exceeds search cap {cap}")
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if k == 0:
        return BinaryCode.zero(n)
    for rows in iter_subspaces(n, k):
        if _min_distance_at_least(rows, d) and gram_nonsingular(rows):
            return BinaryCode(n, rows)
    return None


def best_lcd_distances(n: int, k: int, cap: int = DEFAULT_SEARCH_CAP) -> tuple[int, int]:
    """``(best_distance, lcd_count)`` over all LCD [n, k] codes, k >= 1.

    ``best_distance`` is 0 when no LCD code exists.
    """
    if n > cap:
        raise CapExceeded(f"n={n} exceeds search cap {cap}")
    best = 0
    count = 0
    for rows in iter_subspaces(n, k):
        if not gram_nonsingular(rows):
            continue
        count += 1
        if _min_distance_at_least(rows, best + 1):
            best = _distance(rows)
    return best, count


def _distance(rows: Sequence[int]) -> int:
    best = min(r.bit_count() for r in rows)
    word = 0
    for step in range(1, 1 << len(rows)):
        word ^= rows[(step & -step).bit_length() - 1]
        wt = word.bit_count()
        if wt < best:
            best = wt
    return best


def random_lcd_search(n: int, k: int, trials: int, seed: int = 0) -> BinaryCode | None:
    """LCD [n, k] code of largest distance among ``trials`` random
    generators in systematic form; None if none of them is LCD."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    rng = random.Random(seed * 1_000_003 + n * 1009 + k)
    best, best_d = None, 0
    for _ in range(trials):
        rows = tuple((1 << i) | (rng.getrandbits(n - k) << k if n > k else 0) for i in range(k))
        if not gram_nonsingular(rows):
            continue
        if _min_distance_at_least(rows, best_d + 1):
            best, best_d = rows, _distance(rows)
    return None if best is None else BinaryCode(n, best)


def iter_lcd_codes(n: int, k: int) -> Iterator[BinaryCode]:
    for rows in iter_subspaces(n, k):
        if gram_nonsingular(rows):
            yield BinaryCode(n, rows)


def read_generator(path) -> BinaryCode:
    with open(path, encoding="utf-8") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines:
        raise ValueError(f"{path}: empty generator file")
    lengths = {len(line) for line in lines}
    if len(lengths) != 1:
        raise ValueError(f"{path}: rows have unequal lengths")
    return BinaryCode.from_strings(lines)


def write_generator(code: BinaryCode, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in code.row_strings():
            fh.write(row + "\n")
