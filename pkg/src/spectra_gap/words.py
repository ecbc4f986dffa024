"""Digit words, pointed words and eventually periodic bi-infinite sequences.

Literal grammar (whitespace between blocks is optional)::

    biseq   := "per(" word ")" body "per(" word ")"
    body    := block+
    block   := word | "(" word ")^" uint
    word    := digit+ with at most one "*" suffixing a digit

The digit carrying ``*`` sits at index 0 of the ambient sequence.
A literal with only one ``per(...)`` tail parses as a :class:`PartialSeq`,
which the extremal search uses for sequences with one free side.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

Digits = tuple[int, ...]


class LiteralError(ValueError):
    """Malformed sequence literal; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def _check_digits(digits: Iterable[int]) -> Digits:
    out = tuple(int(d) for d in digits)
    for d in out:
        if not 1 <= d <= 9:
            raise ValueError(f"digit {d} outside 1..9")
    return out


def _digits_str(digits: Sequence[int]) -> str:
    return "".join(str(d) for d in digits)


def primitive_root(block: Sequence[int]) -> Digits:
    """Shortest u with block = u^k."""
    block = tuple(block)
    n = len(block)
    for p in range(1, n + 1):
        if n % p == 0 and block[:p] * (n // p) == block:
            return block[:p]
    return block


def is_palindrome(w: Sequence[int]) -> bool:
    return tuple(w) == tuple(reversed(w))


def is_semisymmetric(w: "FiniteWord | Sequence[int]") -> bool:
    """True iff w is a palindrome or a concatenation of two palindromes."""
    d = tuple(w)
    return any(is_palindrome(d[:i]) and is_palindrome(d[i:]) for i in range(len(d) + 1))


def find_all(haystack: Sequence[int], needle: Sequence[int]) -> list[int]:
    h, n = tuple(haystack), tuple(needle)
    m = len(n)
    return [i for i in range(len(h) - m + 1) if h[i : i + m] == n]


def contains_subword(
    s: "FiniteWord | PointedWord | Sequence[int]",
    w: "FiniteWord | Sequence[int]",
    include_transpose: bool = False,
) -> list[tuple[int, bool]]:
    """All occurrences of ``w`` in ``s`` as (start, is_transposed) pairs.

    Transposed matches are only reported when ``wᵀ`` differs from ``w``.
    """
    hay = s.word.digits if isinstance(s, PointedWord) else tuple(s)
    needle = tuple(w)
    hits = [(i, False) for i in find_all(hay, needle)]
    rev = needle[::-1]
    if include_transpose and rev != needle:
        hits += [(i, True) for i in find_all(hay, rev)]
    return sorted(hits)


@dataclass(frozen=True)
class FiniteWord:
    digits: Digits

    def __post_init__(self) -> None:
        object.__setattr__(self, "digits", _check_digits(self.digits))
        if not self.digits:
            raise ValueError("empty word")

    @classmethod
    def of(cls, w: "str | Sequence[int] | FiniteWord") -> "FiniteWord":
        if isinstance(w, FiniteWord):
            return w
        if isinstance(w, str):
            parsed = parse(w)
            if not isinstance(parsed, FiniteWord):
                raise ValueError(f"not a plain word: {w!r}")
            return parsed
        return cls(tuple(w))

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def __add__(self, other: "FiniteWord | Sequence[int]") -> "FiniteWord":
        return FiniteWord(self.digits + tuple(other))

    def transpose(self) -> "FiniteWord":
        return FiniteWord(self.digits[::-1])

    @property
    def T(self) -> "FiniteWord":
        return self.transpose()

    def point(self, pivot: int) -> "PointedWord":
        return PointedWord(self, pivot)

    def __str__(self) -> str:
        return _digits_str(self.digits)


@dataclass(frozen=True)
class PointedWord:
    word: FiniteWord
    pivot: int

    def __post_init__(self) -> None:
        if not isinstance(self.word, FiniteWord):
            object.__setattr__(self, "word", FiniteWord(tuple(self.word)))
        if not 0 <= self.pivot < len(self.word):
            raise ValueError(f"pivot {self.pivot} outside word of length {len(self.word)}")

    @classmethod
    def of(cls, w: "str | PointedWord") -> "PointedWord":
        if isinstance(w, PointedWord):
            return w
        parsed = parse(w)
        if not isinstance(parsed, PointedWord):
            raise ValueError(f"not a pointed word: {w!r}")
        return parsed

    @classmethod
    def from_parts(cls, left: Sequence[int], pivot_digit: int, right: Sequence[int]) -> "PointedWord":
        return cls(FiniteWord(tuple(left) + (pivot_digit,) + tuple(right)), len(left))

    @property
    def digits(self) -> Digits:
        return self.word.digits

    def __len__(self) -> int:
        return len(self.word)

    @property
    def left_arm(self) -> Digits:
        """Digits strictly left of the pivot, in reading order."""
        return self.word.digits[: self.pivot]

    @property
    def right_arm(self) -> Digits:
        """Digits strictly right of the pivot."""
        return self.word.digits[self.pivot + 1 :]

    def transpose(self) -> "PointedWord":
        return PointedWord(self.word.transpose(), len(self.word) - 1 - self.pivot)

    @property
    def T(self) -> "PointedWord":
        return self.transpose()

    def extend(self, left: Sequence[int] = (), right: Sequence[int] = ()) -> "PointedWord":
        return PointedWord(FiniteWord(tuple(left) + self.digits + tuple(right)), self.pivot + len(left))

    def repoint(self, pivot: int) -> "PointedWord":
        return PointedWord(self.word, pivot)

    def __str__(self) -> str:
        d = self.word.digits
        return _digits_str(d[: self.pivot + 1]) + "*" + _digits_str(d[self.pivot + 1 :])


def _canonical_tails(
    left: Digits, core: Digits, pivot: int, right: Digits
) -> tuple[Digits, Digits, int, Digits]:
    left = primitive_root(left)
    right = primitive_root(right)
    core = list(core)
    # absorb core digits that merely continue a tail, keeping the pivot in the core
    while pivot > 0 and core[0] == left[0]:
        core.pop(0)
        pivot -= 1
        left = left[1:] + left[:1]
    while pivot < len(core) - 1 and core[-1] == right[-1]:
        core.pop()
        right = right[-1:] + right[:-1]
    return left, tuple(core), pivot, right


@dataclass(frozen=True)
class BiSeq:
    """``... left left core right right ...`` with ``core[pivot]`` at index 0.

    Construction canonicalizes: tail blocks become primitive and the core is
    shrunk as far as possible, so two BiSeqs are equal exactly when they
    describe the same sequence with the same index 0.
    """

    left: Digits
    core: Digits
    pivot: int
    right: Digits

    def __post_init__(self) -> None:
        left = _check_digits(self.left)
        core = _check_digits(self.core)
        right = _check_digits(self.right)
        if not left or not core or not right:
            raise ValueError("BiSeq parts must be nonempty")
        if not 0 <= self.pivot < len(core):
            raise ValueError("pivot outside core")
        left, core, pivot, right = _canonical_tails(left, core, self.pivot, right)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "core", core)
        object.__setattr__(self, "pivot", pivot)
        object.__setattr__(self, "right", right)

    @classmethod
    def of(cls, text: "str | BiSeq") -> "BiSeq":
        if isinstance(text, BiSeq):
            return text
        parsed = parse(text)
        if not isinstance(parsed, BiSeq):
            raise ValueError(f"not a bi-sequence literal: {text!r}")
        return parsed

    @classmethod
    def periodic(cls, block: Sequence[int], pivot: int = 0) -> "BiSeq":
        block = tuple(block)
        return cls(block, block, pivot, block)

    @classmethod
    def build(
        cls, left: Sequence[int], core: "PointedWord | str", right: Sequence[int]
    ) -> "BiSeq":
        pw = PointedWord.of(core) if not isinstance(core, PointedWord) else core
        return cls(tuple(left), pw.digits, pw.pivot, tuple(right))

    # -- indexing ---------------------------------------------------------
    def __getitem__(self, n: int) -> int:
        i = n + self.pivot
        if 0 <= i < len(self.core):
            return self.core[i]
        if i < 0:
            return self.left[i % len(self.left)]
        j = i - len(self.core)
        return self.right[j % len(self.right)]

    def window(self, a: int, b: int) -> Digits:
        """Digits at indices a..b inclusive."""
        return tuple(self[n] for n in range(a, b + 1))

    def right_digits(self, k: int = 0) -> Iterator[int]:
        """a_k, a_{k+1}, ..."""
        n = k
        while True:
            yield self[n]
            n += 1

    @property
    def core_start(self) -> int:
        return -self.pivot

    @property
    def core_end(self) -> int:
        return len(self.core) - 1 - self.pivot

    # -- structure --------------------------------------------------------
    def transpose(self) -> "BiSeq":
        return BiSeq(self.right[::-1], self.core[::-1], len(self.core) - 1 - self.pivot, self.left[::-1])

    @property
    def T(self) -> "BiSeq":
        return self.transpose()

    def shift(self, k: int) -> "BiSeq":
        """Same sequence with index k moved to index 0."""
        if k == 0:
            return self
        core = self.core
        pivot = self.pivot + k
        while pivot < 0:
            core = self.left + core
            pivot += len(self.left)
        while pivot >= len(core):
            core = core + self.right
        return BiSeq(self.left, core, pivot, self.right)

    def pointed_core(self) -> PointedWord:
        return PointedWord(FiniteWord(self.core), self.pivot)

    def expanded(self, left_reps: int, right_reps: int) -> PointedWord:
        """Core padded with whole tail blocks on each side."""
        return PointedWord(
            FiniteWord(self.left * left_reps + self.core + self.right * right_reps),
            self.pivot + len(self.left) * left_reps,
        )

    def is_purely_periodic(self) -> bool:
        return self.period_block() is not None

    def period_block(self) -> Digits | None:
        """Block u with self = per(u) (any phase), else None."""
        if len(self.left) != len(self.right):
            return None
        p = len(self.left)
        probe = self.window(self.core_start - 2 * p, self.core_end + 2 * p)
        if all(probe[i] == probe[i + p] for i in range(len(probe) - p)):
            return primitive_root(probe[:p])
        return None

    def __str__(self) -> str:
        return f"per({_digits_str(self.left)}) {PointedWord(FiniteWord(self.core), self.pivot)} per({_digits_str(self.right)})"


@dataclass(frozen=True)
class PartialSeq:
    """A pointed core with at most one periodic tail; a missing tail is free."""

    left: Digits | None
    core: Digits
    pivot: int
    right: Digits | None

    def __post_init__(self) -> None:
        core = _check_digits(self.core)
        if not core or not 0 <= self.pivot < len(core):
            raise ValueError("bad core or pivot")
        object.__setattr__(self, "core", core)
        for name in ("left", "right"):
            v = getattr(self, name)
            if v is not None:
                v = primitive_root(_check_digits(v))
                if not v:
                    raise ValueError("empty tail")
                object.__setattr__(self, name, v)

    @classmethod
    def of(cls, text: "str | PartialSeq") -> "PartialSeq":
        if isinstance(text, PartialSeq):
            return text
        parsed = parse(text)
        if isinstance(parsed, PartialSeq):
            return parsed
        if isinstance(parsed, PointedWord):
            return cls(None, parsed.digits, parsed.pivot, None)
        if isinstance(parsed, BiSeq):
            return cls(parsed.left, parsed.core, parsed.pivot, parsed.right)
        raise ValueError(f"not a partial sequence literal: {text!r}")

    @property
    def pointed_core(self) -> PointedWord:
        return PointedWord(FiniteWord(self.core), self.pivot)

    def transpose(self) -> "PartialSeq":
        return PartialSeq(
            None if self.right is None else self.right[::-1],
            self.core[::-1],
            len(self.core) - 1 - self.pivot,
            None if self.left is None else self.left[::-1],
        )

    def __str__(self) -> str:
        parts = []
        if self.left is not None:
            parts.append(f"per({_digits_str(self.left)})")
        parts.append(str(self.pointed_core))
        if self.right is not None:
            parts.append(f"per({_digits_str(self.right)})")
        return " ".join(parts)


Parsed = Union[FiniteWord, PointedWord, BiSeq, PartialSeq]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def error(self, msg: str) -> LiteralError:
        return LiteralError(msg, self.i)

    def skip_ws(self) -> None:
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.i >= len(self.text)

    def peek(self, s: str) -> bool:
        return self.text.startswith(s, self.i)

    def expect(self, s: str) -> None:
        if not self.peek(s):
            raise self.error(f"expected {s!r}")
        self.i += len(s)

    def word(self, allow_star: bool) -> tuple[list[int], int | None]:
        digits: list[int] = []
        star = None
        start = self.i
        while self.i < len(self.text):
            c = self.text[self.i]
            if c.isdigit():
                if c == "0":
                    raise self.error("digit 0 is not allowed")
                digits.append(int(c))
            elif c == "*":
                if not digits:
                    raise self.error("'*' must follow a digit")
                if not allow_star:
                    raise self.error("'*' not allowed here")
                if star is not None:
                    raise self.error("multiple pivots")
                star = len(digits) - 1
            else:
                break
            self.i += 1
        if not digits:
            self.i = start
            raise self.error("expected digits")
        return digits, star

    def tail(self, allow_star: bool = False) -> tuple[list[int], int | None]:
        self.expect("per(")
        digits, star = self.word(allow_star=allow_star)
        self.expect(")")
        return digits, star

    def body(self) -> tuple[list[int], int | None]:
        digits: list[int] = []
        pivot = None
        while True:
            self.skip_ws()
            if self.i >= len(self.text) or self.peek("per("):
                break
            if self.peek("("):
                self.i += 1
                block, star = self.word(allow_star=False)
                self.expect(")^")
                start = self.i
                while self.i < len(self.text) and self.text[self.i].isdigit():
                    self.i += 1
                if start == self.i:
                    raise self.error("expected exponent")
                digits.extend(block * int(self.text[start : self.i]))
                continue
            block, star = self.word(allow_star=True)
            if star is not None:
                if pivot is not None:
                    raise self.error("multiple pivots")
                pivot = len(digits) + star
            digits.extend(block)
        return digits, pivot


def parse(text: str) -> Parsed:
    """Parse a sequence literal into the narrowest matching type."""
    p = _Parser(text)
    p.skip_ws()
    left = right = None
    if p.peek("per("):
        left, star = p.tail(allow_star=True)
        p.skip_ws()
        if star is not None:
            # a lone starred period: "per(2212*112)"
            if not p.at_end():
                raise p.error("a starred period must be the whole literal")
            return BiSeq.periodic(tuple(left), star)
    digits, pivot = p.body()
    p.skip_ws()
    if p.peek("per("):
        right, _ = p.tail()
    if not p.at_end():
        raise p.error("unexpected trailing text")
    if not digits:
        raise LiteralError("empty body", p.i)
    if left is None and right is None:
        if pivot is None:
            return FiniteWord(tuple(digits))
        return PointedWord(FiniteWord(tuple(digits)), pivot)
    if pivot is None:
        raise LiteralError("sequence literal needs exactly one pivot", len(text))
    if left is not None and right is not None:
        return BiSeq(tuple(left), tuple(digits), pivot, tuple(right))
    return PartialSeq(
        None if left is None else tuple(left), tuple(digits), pivot, None if right is None else tuple(right)
    )


def occurs_in(seq: BiSeq, w: Sequence[int]) -> list[int]:
    """Indices n at which ``w`` starts in ``seq`` (finite list: core region plus one tail period each side).

    An occurrence inside a tail repeats every period; only the occurrences
    starting within one period of the core are listed.
    """
    w = tuple(w)
    a = seq.core_start - len(seq.left) - len(w)
    b = seq.core_end + len(seq.right) + len(w)
    win = seq.window(a, b)
    return [a + i for i in find_all(win, w)]
