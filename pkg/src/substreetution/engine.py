"""Constant-length-2 substitutions on colored binary trees.

A system maps each color to a depth-1 tree and carries a 4-letter grammar
over {A, B} that says, slot by slot (aa, ab, ba, bb), whether the image of
the a-subtree or of the b-subtree is glued at generation 2.  This grammar
order reproduces the source table s(ba)=a, s(aa)=s(ab)=s(bb)=b of the
BBAB system, which pins down the otherwise implicit slot convention.
"""

from __future__ import annotations

import itertools
import re
import warnings
from dataclasses import dataclass

from .errors import (
    BadSystemFormat,
    NotFixable,
    NotInImage,
    OddLength,
    Shallow,
)
from .trees import Patch, check_address

SLOTS = ("aa", "ab", "ba", "bb")


@dataclass(frozen=True)
class Substreetution:
    """Images of the two colors plus the grammar word.

    image0/image1 are (root, a-child, b-child) triples of bits.  The system
    is *marked* when the two image roots differ, which makes it injective
    and lets images be unsubstituted.
    """

    image0: tuple[int, int, int]
    image1: tuple[int, int, int]
    grammar: str
    name: str | None = None

    def __post_init__(self):
        for img in (self.image0, self.image1):
            if len(img) != 3 or any(b not in (0, 1) for b in img):
                raise BadSystemFormat(f"image must be a triple of bits, got {img!r}")
        if len(self.grammar) != 4 or any(c not in "AB" for c in self.grammar):
            raise BadSystemFormat(f"grammar must be 4 letters over A/B, got {self.grammar!r}")

    def image(self, color: int) -> tuple[int, int, int]:
        return self.image1 if color else self.image0

    @property
    def marked(self) -> bool:
        return self.image0[0] != self.image1[0]

    def fixable_at(self, color: int) -> bool:
        return self.image(color)[0] == color

    def root_preimage(self, color: int) -> int:
        """The color whose image has the given root (marked systems only)."""
        if not self.marked:
            raise NotInImage("root colors of an unmarked system are ambiguous")
        return 0 if self.image0[0] == color else 1

    def source_letter(self, slot: str) -> str:
        """Which subtree ('a' or 'b') feeds the given generation-2 slot."""
        return "a" if self.grammar[SLOTS.index(slot)] == "A" else "b"

    def slots_of(self, letter: str) -> tuple[str, ...]:
        want = "A" if letter == "a" else "B"
        return tuple(s for s, g in zip(SLOTS, self.grammar) if g == want)


BBAB = Substreetution((0, 1, 0), (1, 1, 0), "BBAB", name="bbab-jacaranda")
THUE_MORSE = Substreetution((0, 1, 1), (1, 0, 0), "ABAB", name="thue-morse")
ABBA = Substreetution((0, 0, 1), (1, 1, 0), "ABBA", name="abba")

BUILTINS = {
    "bbab": BBAB,
    "bbab-jacaranda": BBAB,
    "tm": THUE_MORSE,
    "thue-morse": THUE_MORSE,
    "abba": ABBA,
}


# -- applying the substitution ----------------------------------------------


def apply(sub: Substreetution, p: Patch, out_depth: int | None = None) -> Patch:
    """Image of a patch; depth 2*p.depth + 1, optionally truncated.

    A node of color c contributes the three nodes of its image at the two
    generations it spawns; the four grandchild slots receive the images of
    the node's subtrees as dictated by the grammar.  Truncation happens
    during construction so deep prefixes never materialize beyond out_depth.
    """
    full = 2 * p.depth + 1
    if out_depth is None or out_depth > full:
        out_depth = full
    return Patch(tuple(_apply_rows(sub, p.levels, out_depth)))


def _apply_rows(sub, rows, out_depth):
    rt, ra, rb = sub.image(int(rows[0][0]))
    out = [str(rt)]
    if out_depth >= 1:
        out.append(f"{ra}{rb}")
    if out_depth >= 2:
        sides = {}
        for letter in "ab":
            if sub.slots_of(letter):
                if letter == "a":
                    half = [row[: len(row) // 2] for row in rows[1:]]
                else:
                    half = [row[len(row) // 2 :] for row in rows[1:]]
                sides[letter] = _apply_rows(sub, half, out_depth - 2)
        for k in range(out_depth - 1):
            out.append("".join(sides[sub.source_letter(s)][k] for s in SLOTS))
    return out


def fixed_point_prefix(sub: Substreetution, root: int, depth: int) -> Patch:
    """Depth-`depth` truncation of the unique fixed tree with the given root.

    Iterates the substitution from a single node, truncating along the way;
    agreement doubles each round, so the loop stops once the prefix is fixed.
    """
    if not sub.fixable_at(root):
        raise NotFixable(f"{sub.name or sub.grammar}: image of {root} does not start with {root}")
    p = Patch.leaf(root)
    while True:
        q = apply(sub, p, min(2 * p.depth + 1, depth))
        if q == p:
            return p
        p = q


# -- source and its multivalued inverse --------------------------------------


def source(sub: Substreetution, word: str) -> str:
    """Half-length site the substitution pulls an even site back to, blockwise."""
    check_address(word)
    if len(word) % 2:
        raise OddLength(f"source needs an even-length site, got {word!r}")
    return "".join(
        sub.source_letter(word[i : i + 2]) for i in range(0, len(word), 2)
    )


def theta(sub: Substreetution, word: str) -> frozenset[str]:
    """All even sites whose source is `word` (letterwise slot sets, concatenated)."""
    check_address(word)
    sets = []
    for c in word:
        slots = sub.slots_of(c)
        if not slots:
            warnings.warn(
                f"grammar {sub.grammar} never uses letter {c!r}; theta({word!r}) is empty "
                "and the source map is not onto",
                stacklevel=2,
            )
            return frozenset()
        sets.append(slots)
    return frozenset("".join(parts) for parts in itertools.product(*sets))


# -- renormalization ----------------------------------------------------------


@dataclass(frozen=True)
class RenormReport:
    ok: bool
    checked: int
    failure: tuple[str, Patch, Patch] | None = None

    def __bool__(self):
        return self.ok


def verify_renormalization(sub: Substreetution, p: Patch, maxlen: int) -> RenormReport:
    """Check shift-after-image = image-after-source on every even site <= maxlen."""
    if maxlen % 2:
        raise OddLength("maxlen must be even")
    if maxlen > p.depth:
        raise Shallow(f"maxlen {maxlen} exceeds patch depth {p.depth}")
    big = apply(sub, p)
    checked = 0
    for n in range(0, maxlen + 1, 2):
        for letters in itertools.product("ab", repeat=n):
            w = "".join(letters)
            lhs = big.subtree(w)
            rhs = apply(sub, p.subtree(source(sub, w)))
            d = min(lhs.depth, rhs.depth)
            checked += 1
            if lhs.truncate(d) != rhs.truncate(d):
                return RenormReport(False, checked, (w, lhs, rhs))
    return RenormReport(True, checked)


# -- unsubstitution -----------------------------------------------------------


def unsub(sub: Substreetution, p: Patch) -> Patch:
    """Invert the substitution on its image (marked systems only).

    Recovers the patch of depth floor((depth-1)/2) whose image agrees with p
    on all of p's data; slots carrying the same grammar letter are checked
    for equality, so a forged deepest level is still rejected.
    """
    if not sub.marked:
        raise NotInImage("only marked systems can be unsubstituted")
    if p.depth < 1:
        raise Shallow("need at least one generation to unsubstitute")
    root = sub.root_preimage(p.get(""))
    _, ia, ib = sub.image(root)
    if p.levels[1] != f"{ia}{ib}":
        raise NotInImage(
            f"generation 1 is {p.levels[1]}, image of {root} needs {ia}{ib}"
        )
    if p.depth < 3:
        if p.depth == 2:
            _check_slot_agreement(sub, p, depth=0)
        return Patch.leaf(root)
    kids = {}
    for letter in "ab":
        slots = sub.slots_of(letter)
        if not slots:
            raise NotInImage(f"grammar {sub.grammar} never places the {letter}-subtree")
        pulled = [p.subtree(s) for s in slots]
        for other in pulled[1:]:
            if other != pulled[0]:
                raise NotInImage(f"slots {slots} disagree; not an image")
        kids[letter] = unsub(sub, pulled[0])
    return Patch.combine(root, kids["a"], kids["b"])


def _check_slot_agreement(sub, p, depth):
    for letter in "ab":
        slots = sub.slots_of(letter)
        vals = [p.window(2, SLOTS.index(s), depth) for s in slots]
        for other in vals[1:]:
            if other != vals[0]:
                raise NotInImage(f"slots {slots} disagree; not an image")


# -- text format --------------------------------------------------------------

_IMAGE_RE = re.compile(r"^([01])\s*->\s*([01])\(\s*([01])\s*,\s*([01])\s*\)$")
_GRAMMAR_RE = re.compile(r"^grammar\s+([A-Z]+)$")


def dump_substreetution(sub: Substreetution) -> str:
    lines = []
    for c, img in ((0, sub.image0), (1, sub.image1)):
        lines.append(f"{c} -> {img[0]}({img[1]},{img[2]})")
    lines.append(f"grammar {sub.grammar}")
    return "\n".join(lines) + "\n"


def parse_substreetution(text: str) -> Substreetution:
    images = {}
    grammar = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _IMAGE_RE.match(line)
        if m:
            c = int(m.group(1))
            if c in images:
                raise BadSystemFormat(f"duplicate image for color {c}")
            images[c] = tuple(int(m.group(i)) for i in (2, 3, 4))
            continue
        m = _GRAMMAR_RE.match(line)
        if m:
            grammar = m.group(1)
            continue
        raise BadSystemFormat(
            f"unsupported line {raw!r}: only constant-length-2 binary systems are accepted"
        )
    if sorted(images) != [0, 1] or grammar is None:
        raise BadSystemFormat("need images for colors 0 and 1 plus a grammar line")
    return Substreetution(images[0], images[1], grammar)


def resolve_system(spec: str) -> Substreetution:
    """Turn 'builtin:<name>' or a file path into a system."""
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        try:
            return BUILTINS[name]
        except KeyError:
            raise BadSystemFormat(
                f"unknown builtin {name!r}; have {sorted(set(BUILTINS))}"
            ) from None
    with open(spec, encoding="ascii") as fh:
        return parse_substreetution(fh.read())
