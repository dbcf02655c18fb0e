"""Sparse symbolic Pauli algebra on bitmask-encoded Pauli words.

A Pauli word on n qubits is a pair of n-bit masks (x, z): bit j of x marks an
X component on qubit j, bit j of z a Z component, and both together a Y.
Python integers give arbitrary-width masks for free, with a fast path for the
usual n <= 64 case.  Hermitian operators are held as real-coefficient maps
word -> coefficient (PauliSum); commutators of Hermitian sums are
anti-Hermitian and are stored through the Hermitian representative [A, B]/i,
which leaves every norm used downstream unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

COEFF_EPS = 1e-14   # coefficients below this are dropped during canonicalization
DENSE_LIMIT = 12    # largest qubit count materialized as a dense matrix

_MASKS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_LETTERS = {v: k for k, v in _MASKS.items()}


@dataclass(frozen=True, slots=True)
class PauliString:
    """One n-qubit Pauli word. Immutable and hashable."""

    n: int
    x: int
    z: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("qubit count must be nonnegative")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("mask uses bits outside the low n positions")

    @classmethod
    def from_text(cls, text: str) -> "PauliString":
        """Parse a word over {I,X,Y,Z}; qubit 0 is the leftmost character."""
        x = z = 0
        for j, letter in enumerate(text):
            try:
                xb, zb = _MASKS[letter]
            except KeyError:
                raise ValueError(f"invalid Pauli letter {letter!r} in {text!r}") from None
            x |= xb << j
            z |= zb << j
        return cls(len(text), x, z)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0)

    def text(self) -> str:
        return "".join(_LETTERS[(self.x >> j) & 1, (self.z >> j) & 1] for j in range(self.n))

    def support(self) -> frozenset[int]:
        m = self.x | self.z
        return frozenset(j for j in range(self.n) if (m >> j) & 1)

    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def commutes_with(self, other: "PauliString") -> bool:
        """Symplectic test: words commute iff <x_a.z_b> + <x_b.z_a> is even."""
        return ((self.x & other.z).bit_count() + (other.x & self.z).bit_count()) % 2 == 0

    def sort_key(self) -> tuple[int, int]:
        return (self.x, self.z)

    def __str__(self) -> str:
        return self.text()


def multiply(a: PauliString, b: PauliString) -> tuple[PauliString, complex]:
    """Product of two Pauli words.

    Returns (word, phase) with a*b == phase*word and phase in {1, -1, 1j, -1j}.
    """
    if a.n != b.n:
        raise ValueError(f"qubit-count mismatch: {a.n} vs {b.n}")
    x = a.x ^ b.x
    z = a.z ^ b.z
    # i-exponent from Y = iXZ bookkeeping plus Z-past-X reordering
    k = (
        (a.x & a.z).bit_count()
        + (b.x & b.z).bit_count()
        - (x & z).bit_count()
        + 2 * (a.z & b.x).bit_count()
    ) % 4
    return PauliString(a.n, x, z), (1, 1j, -1, -1j)[k]


class PauliSum:
    """A Hermitian operator as a real-coefficient map Pauli word -> coefficient.

    Canonical form: no stored coefficient has magnitude below COEFF_EPS, all
    words share the same n, and terms are kept sorted by (x, z).  Instances
    are immutable after construction; arithmetic returns new sums.
    """

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[PauliString, float] | Iterable[tuple[PauliString, float]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[PauliString, float] = {}
        for word, coeff in items:
            if word.n != n:
                raise ValueError(f"word on {word.n} qubits in a sum on {n}")
            acc[word] = acc.get(word, 0.0) + float(coeff)
        clean = {w: c for w, c in sorted(acc.items(), key=lambda it: it[0].sort_key()) if abs(c) >= COEFF_EPS}
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("PauliSum is immutable")

    @property
    def terms(self) -> dict[PauliString, float]:
        return dict(self._terms)

    @property
    def num_terms(self) -> int:
        return len(self._terms)

    def items(self) -> Iterator[tuple[PauliString, float]]:
        return iter(self._terms.items())

    def coefficient(self, word: PauliString) -> float:
        return self._terms.get(word, 0.0)

    def support(self) -> frozenset[int]:
        x = z = 0
        for w in self._terms:
            x |= w.x
            z |= w.z
        m = x | z
        return frozenset(j for j in range(self.n) if (m >> j) & 1)

    def is_zero(self) -> bool:
        return not self._terms

    def scaled(self, factor: float) -> "PauliSum":
        return PauliSum(self.n, ((w, c * factor) for w, c in self._terms.items()))

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if self.n != other.n:
            raise ValueError("qubit-count mismatch")
        merged = dict(self._terms)
        for w, c in other._terms.items():
            merged[w] = merged.get(w, 0.0) + c
        return PauliSum(self.n, merged)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + other.scaled(-1.0)

    def __eq__(self, other) -> bool:
        return isinstance(other, PauliSum) and self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.n, tuple(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        inner = " + ".join(f"{c:g}*{w.text()}" for w, c in list(self._terms.items())[:4])
        more = "" if self.num_terms <= 4 else f" + ... ({self.num_terms} terms)"
        return f"PauliSum(n={self.n}, {inner}{more})"

    # -- text form: one line per term, "<coeff> <word>"; '#' starts a comment --

    def to_text(self) -> str:
        lines = [f"# n={self.n}"]
        lines += [f"{c!r} {w.text()}" for w, c in self._terms.items()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PauliSum":
        n = None
        items: list[tuple[PauliString, float]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("n=") and n is None:
                    n = int(body[2:])
                continue
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected '<coeff> <word>', got {raw!r}")
            try:
                coeff = float(parts[0])
            except ValueError:
                raise ValueError(f"line {lineno}: bad coefficient {parts[0]!r}") from None
            word = PauliString.from_text(parts[1])
            if n is None:
                n = word.n
            elif word.n != n:
                raise ValueError(f"line {lineno}: word length {word.n} != {n}")
            items.append((word, coeff))
        if n is None:
            raise ValueError("empty input with no '# n=' header")
        return cls(n, items)


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """Hermitian representative of a commutator: returns C = [a, b] / i.

    For Hermitian a, b the commutator is anti-Hermitian, so C is Hermitian
    with real coefficients; every norm of C equals the same norm of [a, b].
    """
    if a.n != b.n:
        raise ValueError("qubit-count mismatch")
    acc: dict[PauliString, float] = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            if wa.commutes_with(wb):
                continue
            word, phase = multiply(wa, wb)
            # [P, Q] = 2 P Q for anticommuting words; fold the 1/i in.
            coeff = 2.0 * ca * cb * (phase / 1j)
            acc[word] = acc.get(word, 0.0) + coeff.real
    return PauliSum(a.n, acc)


def one_norm(a: PauliSum) -> float:
    """Sum of absolute Pauli coefficients."""
    return sum(abs(c) for _, c in a.items())


def normalized_two_norm(a: PauliSum) -> float:
    """Schatten 2-norm over sqrt(dim), exact by Pauli orthogonality."""
    return math.sqrt(sum(c * c for _, c in a.items()))


def _square_coefficients(a: PauliSum) -> dict[PauliString, float]:
    """Pauli coefficients of a*a for Hermitian a (real by Hermiticity)."""
    acc: dict[PauliString, complex] = {}
    for wa, ca in a.items():
        for wb, cb in a.items():
            word, phase = multiply(wa, wb)
            acc[word] = acc.get(word, 0.0) + ca * cb * phase
    out: dict[PauliString, float] = {}
    for word, coeff in acc.items():
        if abs(coeff.imag) > 1e-9 * max(1.0, abs(coeff)):
            raise ArithmeticError("square of a Hermitian sum acquired an imaginary coefficient")
        if abs(coeff.real) >= COEFF_EPS:
            out[word] = coeff.real
    return out


def normalized_four_norm(a: PauliSum, max_products: int = 4_000_000) -> float:
    """Schatten 4-norm over dim**(1/4), from the symbolic coefficients of a*a.

    The expansion touches num_terms**2 word products; calls beyond
    ``max_products`` are rejected with the projected size.
    """
    projected = a.num_terms * a.num_terms
    if projected > max_products:
        raise ValueError(f"four-norm expansion needs {projected} word products (budget {max_products})")
    sq = _square_coefficients(a)
    return sum(c * c for c in sq.values()) ** 0.25


def operator_norm(a: PauliSum, mode: str = "dense", dense_limit: int = DENSE_LIMIT) -> float:
    """Spectral norm of a, either exactly (dense) or via the 1-norm upper bound.

    mode="dense" materializes the operator and needs n <= dense_limit;
    mode="one_norm_upper" returns one_norm(a), a guaranteed upper bound.
    """
    if mode == "one_norm_upper":
        return one_norm(a)
    if mode != "dense":
        raise ValueError(f"unknown norm mode {mode!r}")
    if a.n > dense_limit:
        raise ValueError(
            f"dense operator norm needs n <= {dense_limit} (got n={a.n}); use mode='one_norm_upper'"
        )
    if a.is_zero():
        return 0.0
    from . import exactsim

    return exactsim.spectral_norm(a)
