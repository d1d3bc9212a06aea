"""Words in the standard generators of a genus-g surface group.

Generators a1, b1, ..., ag, bg are encoded by positive letters 1..2g
(a_i = 2i-1, b_i = 2i); negative letters are inverses.  The string form uses
case for inversion: "a1 B1 a2" means a1 * b1^-1 * a2.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator

Word = tuple  # tuple of nonzero ints

_TOKEN = re.compile(r"^([abAB])(\d+)$")


def letter_of_name(name: str) -> int:
    m = _TOKEN.match(name)
    if not m:
        raise ValueError("bad generator token %r (want e.g. 'a1', 'B2')" % (name,))
    kind, idx = m.group(1), int(m.group(2))
    if idx < 1:
        raise ValueError("generator index must be >= 1 in %r" % (name,))
    base = 2 * idx - 1 if kind in "aA" else 2 * idx
    return base if kind in "ab" else -base


def name_of_letter(letter: int) -> str:
    if letter == 0:
        raise ValueError("letter 0 is not a generator")
    k = abs(letter)
    idx = (k + 1) // 2
    kind = "a" if k % 2 == 1 else "b"
    if letter < 0:
        kind = kind.upper()
    return "%s%d" % (kind, idx)


def parse_word(text: str) -> Word:
    text = text.strip()
    if not text:
        return ()
    return tuple(letter_of_name(tok) for tok in text.split())


def format_word(word: Word) -> str:
    return " ".join(name_of_letter(x) for x in word)


def free_reduce(word: Iterable[int]) -> Word:
    out = []
    for x in word:
        if x == 0:
            raise ValueError("letter 0 in word")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse_word(word: Word) -> Word:
    return tuple(-x for x in reversed(word))


def cyclic_reduce(word: Word) -> Word:
    w = free_reduce(word)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def is_cyclically_reduced(word: Word) -> bool:
    return word == cyclic_reduce(word)


def conjugacy_key(word: Word) -> Word:
    """Canonical representative of the conjugacy class of a free word,
    up to cyclic rotation AND inversion (unoriented classes)."""
    w = cyclic_reduce(word)
    if not w:
        return ()
    candidates = []
    for base in (w, cyclic_reduce(inverse_word(w))):
        n = len(base)
        for i in range(n):
            candidates.append(base[i:] + base[:i])
    return min(candidates)


def conjugate_word(g: Word, w: Word) -> Word:
    """g w g^-1, freely reduced."""
    return free_reduce(tuple(g) + tuple(w) + inverse_word(tuple(g)))


def concat(*ws: Word) -> Word:
    out: tuple = ()
    for w in ws:
        out = out + tuple(w)
    return free_reduce(out)


def power(w: Word, n: int) -> Word:
    if n == 0:
        return ()
    if n < 0:
        return power(inverse_word(w), -n)
    return free_reduce(tuple(w) * n)


def commutator(u: Word, v: Word) -> Word:
    return concat(u, v, inverse_word(u), inverse_word(v))


def surface_relator(genus: int) -> Word:
    """[a1,b1][a2,b2]...[ag,bg]."""
    w: tuple = ()
    for i in range(1, genus + 1):
        a = (2 * i - 1,)
        b = (2 * i,)
        w = w + commutator(a, b)
    return free_reduce(w)


def alphabet(genus: int) -> tuple:
    letters = []
    for k in range(1, 2 * genus + 1):
        letters.append(k)
        letters.append(-k)
    return tuple(letters)


def reduced_words(genus: int, length: int) -> Iterator[Word]:
    """All freely reduced words of exactly the given length."""
    letters = alphabet(genus)
    if length == 0:
        yield ()
        return

    def rec(prefix):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for x in letters:
            if prefix and prefix[-1] == -x:
                continue
            prefix.append(x)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([])


def reduced_words_upto(genus: int, max_length: int) -> Iterator[Word]:
    for n in range(0, max_length + 1):
        yield from reduced_words(genus, n)


def conjugacy_class_reps(genus: int, max_length: int) -> list:
    """One representative per unoriented conjugacy class of nontrivial
    cyclically reduced free words of length <= max_length."""
    seen = set()
    out = []
    for n in range(1, max_length + 1):
        for w in reduced_words(genus, n):
            if not is_cyclically_reduced(w):
                continue
            key = conjugacy_key(w)
            if key in seen:
                continue
            seen.add(key)
            out.append(key)
    return out


def abelianization(word: Word, genus: int) -> tuple:
    """Exponent-sum vector over (a1, b1, ..., ag, bg)."""
    v = [0] * (2 * genus)
    for x in word:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(v)


def is_separating_class(word: Word, genus: int) -> bool:
    """A loop is separating iff it is trivial in homology."""
    return all(e == 0 for e in abelianization(word, genus))
