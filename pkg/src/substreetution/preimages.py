"""One-step and iterated preimages inside the orbit closure.

The case analysis produces, for every tree shape, the exact set of parents
(root color, which side the tree sits on, and the forced sibling).  A
brute-force scan over a generated prefix acts as the ground truth: the
classification is validated against the scan, never the other way around.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import Inconsistent, Shallow, TypeUndetermined, Undetermined
from .jacaranda import (
    XDescriptor,
    brother_best_effort,
    detect_type,
    h_power,
    jacaranda_prefix,
    jprime_prefix,
    side_type_candidates,
    unsub_best_effort,
)
from .trees import Patch, addr_index, index_addr
from .words import v2


@dataclass(frozen=True)
class PreimageDescriptor:
    """One parent: which side the given tree occupies and who its sibling is."""

    root: int
    side: str  # 'a': parent = (root, A, sibling); 'b': parent = (root, sibling, A)
    sibling_kind: str  # "patch" | "J" | "J'"
    sibling: Patch | None
    case_tag: str

    def sibling_prefix(self, depth: int) -> Patch:
        if self.sibling_kind == "J":
            return jacaranda_prefix(depth)
        if self.sibling_kind == "J'":
            return jprime_prefix(depth)
        return self.sibling

    def serialize(self) -> str:
        if self.sibling_kind == "patch":
            sib = f"id:{self.sibling.canonical_id:x}"
        else:
            sib = self.sibling_kind
        return f"case={self.case_tag} root={self.root} side={self.side} sibling={sib}"


@dataclass(frozen=True)
class PreimageSet:
    members: tuple[PreimageDescriptor, ...]
    completeness: str  # "exact" | "lower-bound"

    def __len__(self):
        return len(self.members)

    def serialize(self) -> str:
        lines = [f"completeness={self.completeness} count={len(self.members)}"]
        lines += [d.serialize() for d in self.members]
        return "\n".join(lines) + "\n"


def _desc(root, side, sibling, tag) -> PreimageDescriptor:
    if sibling in ("J", "J'"):
        return PreimageDescriptor(root, side, sibling, None, tag)
    return PreimageDescriptor(root, side, "patch", sibling, tag)


JAC_PREIMAGES = (
    _desc(0, "a", "J", "jac"),
    _desc(1, "a", "J", "jac"),
    _desc(0, "b", "J'", "jac"),
)
JAC_PRIME_PREIMAGES = (_desc(0, "a", "J", "jacp"),)


# -- classification -----------------------------------------------------------


def preimages_classified(desc: XDescriptor, jprefix: Patch | None = None) -> PreimageSet:
    """Exact parent set per the case analysis.

    Concrete descriptors with provenance use the ambient prefix to pin their
    class; without provenance the class is detected from the patch alone and
    Undetermined is raised when several cases stay open.
    """
    if desc.kind == "J":
        return PreimageSet(JAC_PREIMAGES, "exact")
    if desc.kind == "J'":
        return PreimageSet(JAC_PRIME_PREIMAGES, "exact")
    if desc.provenance == "":
        raise Inconsistent("a root-site descriptor should be passed symbolically")
    if desc.provenance is not None:
        tag, members = _classify_at_site(desc.patch, desc.provenance, jprefix)
    else:
        tag, members = _classify_detected(desc.patch)
    return PreimageSet(tuple(members), "exact")


def _subtree_line(p: Patch, site: str, l: int, jp: Patch | None):
    """Line l of the subtree at `site`, read from p or from the ambient prefix."""
    if l <= p.depth:
        return p.levels[l]
    if jp is not None and len(site) + l <= jp.depth:
        i = addr_index(site)
        return jp.levels[len(site) + l][i << l : (i + 1) << l]
    return None


def _child(p: Patch, letter: str) -> Patch:
    if p.depth >= 1:
        return p.subtree(letter)
    # children of an even root-1 core are root-0; everything else that calls
    # this at depth 0 also knows the child root
    return Patch.leaf(0)


def _odd_root1_cases(sib_main):
    """The three deep alternatives for an odd root-1 tree (line class open)."""
    return [
        ("odd1-1a", [_desc(0, "a", sib_main, "odd1-1a"), _desc(1, "a", sib_main, "odd1-1a")]),
        ("odd1-1b", [_desc(1, "a", sib_main, "odd1-1b")]),
        ("odd1-1c", [_desc(0, "a", sib_main, "odd1-1c")]),
    ]


def _classify_at_site(p: Patch, site: str, jp: Patch | None):
    n = len(site)
    u = v2(n)
    root = p.get("")
    if u == 0:
        if root == 1:
            g = _child(p, "a")
            k = v2(n + 1)
            sib_main = Patch.combine(0, brother_best_effort(g, k), g)
            sib_prime = Patch.combine(0, g, g)
            if n == 1:
                return "odd1-vinf", [
                    _desc(0, "a", sib_main, "odd1-vinf"),
                    _desc(1, "a", sib_main, "odd1-vinf"),
                ]
            v = v2(n - 1)
            if v == 1:
                if k >= 3:
                    return "odd1-2a", [
                        _desc(0, "a", sib_prime, "odd1-2a"),
                        _desc(1, "a", sib_prime, "odd1-2a"),
                        _desc(0, "a", sib_main, "odd1-2a"),
                    ]
                return "odd1-2b", [
                    _desc(1, "a", sib_prime, "odd1-2b"),
                    _desc(0, "a", sib_main, "odd1-2b"),
                ]
            line = _subtree_line(p, site, (1 << v) - 1, jp)
            if line is None:
                raise Undetermined(
                    f"line {(1 << v) - 1} not visible at depth {p.depth}",
                    cases=_odd_root1_cases(sib_main),
                )
            if "1" in line:
                return "odd1-1c", [_desc(0, "a", sib_main, "odd1-1c")]
            u_inner = v2(n - 1 + (1 << v)) - v
            if u_inner >= 2:
                return "odd1-1a", [
                    _desc(0, "a", sib_main, "odd1-1a"),
                    _desc(1, "a", sib_main, "odd1-1a"),
                ]
            return "odd1-1b", [_desc(1, "a", sib_main, "odd1-1b")]
        # odd tree with root 0: only ever a b-child
        if p.depth < 1:
            sib = Patch.leaf(1)
            raise Undetermined(
                "children of a depth-0 odd tree are unknown",
                cases=[
                    ("odd0-open", [_desc(0, "b", sib, "odd0-open"), _desc(1, "b", sib, "odd0-open")]),
                ],
            )
        ca, cb = p.get("a"), p.get("b")
        right = p.subtree("b")
        sib = Patch.combine(1, right, right)
        k = v2(n + 1)
        if (ca, cb) == (0, 0):
            if k >= 3:
                return "odd0-1a", [
                    _desc(0, "b", sib, "odd0-1a"),
                    _desc(1, "b", sib, "odd0-1a"),
                ]
            if k == 2:
                return "odd0-1b", [_desc(1, "b", sib, "odd0-1b")]
            raise Inconsistent("children 00 cannot sit on a line of single blocks")
        if (ca, cb) != (1, 0):
            raise Inconsistent(f"children pair {ca}{cb} cannot occur in the closure")
        if k >= 2:
            return "odd0-2a", [_desc(0, "b", sib, "odd0-2a")]
        if n == 1:
            return "odd0-vinf", [
                _desc(0, "b", sib, "odd0-vinf"),
                _desc(1, "b", sib, "odd0-vinf"),
            ]
        v = v2(n - 1)
        line = _subtree_line(p, site, (1 << v) - 1, jp)
        if line is None:
            raise Undetermined(
                f"line {(1 << v) - 1} not visible at depth {p.depth}",
                cases=[
                    ("odd0-2bi", [_desc(0, "b", sib, "odd0-2bi"), _desc(1, "b", sib, "odd0-2bi")]),
                    ("odd0-2bii", [_desc(1, "b", sib, "odd0-2bii")]),
                    ("odd0-2biii", [_desc(0, "b", sib, "odd0-2biii")]),
                ],
            )
        if "1" in line:
            return "odd0-2biii", [_desc(0, "b", sib, "odd0-2biii")]
        u_inner = v2(n - 1 + (1 << v)) - v
        if u_inner >= 2:
            return "odd0-2bi", [
                _desc(0, "b", sib, "odd0-2bi"),
                _desc(1, "b", sib, "odd0-2bi"),
            ]
        return "odd0-2bii", [_desc(1, "b", sib, "odd0-2bii")]
    # even type of class 2^u
    if root == 0:
        sib = brother_best_effort(p, u)
        if u >= 2:
            return "even0-deep", [
                _desc(0, "a", p, "even0-deep"),
                _desc(1, "a", p, "even0-deep"),
                _desc(0, "b", sib, "even0-deep"),
            ]
        return "even0-2type", [
            _desc(1, "a", p, "even0-2type"),
            _desc(0, "b", sib, "even0-2type"),
        ]
    core = unsub_best_effort(p, u)
    c = _child(core, "a")
    v = v2(n // (1 << u) + 1)
    d_tree = brother_best_effort(c, v)
    sib = h_power(Patch.combine(0, d_tree, c), u)
    sib_prime = h_power(Patch.combine(0, c, c), u)
    if v == 1:
        return "even1-v1", [_desc(0, "a", sib, "even1-v1")]
    return "even1-vdeep", [
        _desc(0, "a", sib, "even1-vdeep"),
        _desc(0, "a", sib_prime, "even1-vdeep"),
    ]


def _classify_detected(p: Patch):
    """Patch-only classification; pins every index via visible lines or raises."""
    report = detect_type(p)
    if report.inf_consistent:
        raise TypeUndetermined(
            "patch matches a fixed-tree prefix; classify it symbolically"
        )
    if report.parity == "undetermined":
        raise Undetermined("parity not visible at this depth", cases=[])
    if report.parity == "odd":
        root = p.get("")
        site_v, inf_ok = side_type_candidates(p)
        if root == 1:
            g = p.subtree("a")
            krep = detect_type(g) if g.depth >= 2 else None
            if krep is None or krep.determined is None:
                raise TypeUndetermined("class of the a-branch not pinned")
            k = krep.determined
            sib_main = Patch.combine(0, brother_best_effort(g, k), g)
            sib_prime = Patch.combine(0, g, g)
            if inf_ok:
                return "odd1-vinf", [
                    _desc(0, "a", sib_main, "odd1-vinf"),
                    _desc(1, "a", sib_main, "odd1-vinf"),
                ]
            if len(site_v) != 1:
                raise TypeUndetermined(f"parent class open: {sorted(site_v)}")
            (v,) = site_v
            if v == 1:
                if k >= 3:
                    return "odd1-2a", [
                        _desc(0, "a", sib_prime, "odd1-2a"),
                        _desc(1, "a", sib_prime, "odd1-2a"),
                        _desc(0, "a", sib_main, "odd1-2a"),
                    ]
                return "odd1-2b", [
                    _desc(1, "a", sib_prime, "odd1-2b"),
                    _desc(0, "a", sib_main, "odd1-2b"),
                ]
            if (1 << v) - 1 > p.depth:
                raise Undetermined(
                    "deep line class not visible",
                    cases=_odd_root1_cases(sib_main),
                )
            line = p.levels[(1 << v) - 1]
            if "1" in line:
                return "odd1-1c", [_desc(0, "a", sib_main, "odd1-1c")]
            probe = p.subtree("a" * ((1 << v) - 1))
            trep = detect_type(probe) if probe.depth >= 2 else None
            if trep is None or trep.determined is None:
                raise TypeUndetermined("inner class of the all-zero branch not pinned")
            if trep.determined - v >= 2:
                return "odd1-1a", [
                    _desc(0, "a", sib_main, "odd1-1a"),
                    _desc(1, "a", sib_main, "odd1-1a"),
                ]
            return "odd1-1b", [_desc(1, "a", sib_main, "odd1-1b")]
        right = p.subtree("b")
        sib = Patch.combine(1, right, right)
        ca, cb = p.get("a"), p.get("b")
        krep = detect_type(right) if right.depth >= 2 else None
        if krep is None or krep.determined is None:
            raise TypeUndetermined("class of the b-branch not pinned")
        k = krep.determined
        if (ca, cb) == (0, 0):
            if k >= 3:
                return "odd0-1a", [
                    _desc(0, "b", sib, "odd0-1a"),
                    _desc(1, "b", sib, "odd0-1a"),
                ]
            return "odd0-1b", [_desc(1, "b", sib, "odd0-1b")]
        if (ca, cb) != (1, 0):
            raise Inconsistent(f"children pair {ca}{cb} cannot occur in the closure")
        if k >= 2:
            return "odd0-2a", [_desc(0, "b", sib, "odd0-2a")]
        if inf_ok:
            return "odd0-vinf", [
                _desc(0, "b", sib, "odd0-vinf"),
                _desc(1, "b", sib, "odd0-vinf"),
            ]
        if len(site_v) != 1:
            raise TypeUndetermined(f"parent class open: {sorted(site_v)}")
        (v,) = site_v
        if (1 << v) - 1 > p.depth:
            raise Undetermined(
                "deep line class not visible",
                cases=[
                    ("odd0-2bi", [_desc(0, "b", sib, "odd0-2bi"), _desc(1, "b", sib, "odd0-2bi")]),
                    ("odd0-2bii", [_desc(1, "b", sib, "odd0-2bii")]),
                    ("odd0-2biii", [_desc(0, "b", sib, "odd0-2biii")]),
                ],
            )
        line = p.levels[(1 << v) - 1]
        if "1" in line:
            return "odd0-2biii", [_desc(0, "b", sib, "odd0-2biii")]
        probe = p.subtree("b" * ((1 << v) - 1))
        trep = detect_type(probe) if probe.depth >= 2 else None
        if trep is None or trep.determined is None:
            raise TypeUndetermined("inner class of the all-zero branch not pinned")
        if trep.determined - v >= 2:
            return "odd0-2bi", [
                _desc(0, "b", sib, "odd0-2bi"),
                _desc(1, "b", sib, "odd0-2bi"),
            ]
        return "odd0-2bii", [_desc(1, "b", sib, "odd0-2bii")]
    if report.determined is None:
        raise TypeUndetermined(report.serialize())
    u = report.determined
    root = p.get("")
    if root == 0:
        sib = brother_best_effort(p, u)
        if u >= 2:
            return "even0-deep", [
                _desc(0, "a", p, "even0-deep"),
                _desc(1, "a", p, "even0-deep"),
                _desc(0, "b", sib, "even0-deep"),
            ]
        return "even0-2type", [
            _desc(1, "a", p, "even0-2type"),
            _desc(0, "b", sib, "even0-2type"),
        ]
    core = unsub_best_effort(p, u)
    c = _child(core, "a")
    crep = detect_type(c) if c.depth >= 2 else None
    if crep is None or crep.determined is None:
        raise TypeUndetermined("inner branch class not pinned")
    v = crep.determined
    d_tree = brother_best_effort(c, v)
    sib = h_power(Patch.combine(0, d_tree, c), u)
    sib_prime = h_power(Patch.combine(0, c, c), u)
    if v == 1:
        return "even1-v1", [_desc(0, "a", sib, "even1-v1")]
    return "even1-vdeep", [
        _desc(0, "a", sib, "even1-vdeep"),
        _desc(0, "a", sib_prime, "even1-vdeep"),
    ]


# -- brute force over a generated prefix --------------------------------------


def brute_parent_patches(a: Patch, jp: Patch) -> list[Patch]:
    """Distinct depth-(d+1) subtrees of jp having `a` as one of their children."""
    d = a.depth
    if d + 1 > jp.depth:
        raise Shallow(f"need prefix depth >= {d + 1}, have {jp.depth}")
    child = jp.subtree_ids(d)
    parent = jp.subtree_ids(d + 1)
    target = a.canonical_id
    seen = {}
    for m, row in enumerate(parent):
        kids = child[m + 1]
        for i, pid in enumerate(row):
            if pid not in seen and (kids[2 * i] == target or kids[2 * i + 1] == target):
                seen[pid] = jp.window(m, i, d + 1)
    return list(seen.values())


def preimages_bruteforce(a: Patch, jp: Patch) -> PreimageSet:
    members = []
    for parent in brute_parent_patches(a, jp):
        side = "a" if parent.subtree("a") == a else "b"
        other = "b" if side == "a" else "a"
        members.append(_desc(parent.get(""), side, parent.subtree(other), "scan"))
    return PreimageSet(tuple(members), "lower-bound")


def p_n(a: Patch, n: int, jp: Patch) -> int:
    """Number of distinct n-step ancestors of `a` visible in the prefix."""
    if a.depth + n > jp.depth:
        raise Shallow(f"need prefix depth >= {a.depth + n}, have {jp.depth}")
    frontier = {a.canonical_id}
    for k in range(n):
        d = a.depth + k
        child = jp.subtree_ids(d)
        parent = jp.subtree_ids(d + 1)
        nxt = set()
        for m, row in enumerate(parent):
            kids = child[m + 1]
            for i, pid in enumerate(row):
                if kids[2 * i] in frontier or kids[2 * i + 1] in frontier:
                    nxt.add(pid)
        frontier = nxt
    count = len(frontier)
    if count > 3**n:
        raise Inconsistent(f"{count} ancestors at distance {n} exceeds 3^{n}")
    return count


# -- classified-versus-oracle validation ---------------------------------------


@dataclass
class CrosscheckReport:
    ok: bool
    occurrences: int
    mismatches: list = field(default_factory=list)
    limit_only: list = field(default_factory=list)
    undetermined_sites: int = 0


def _descriptor_matches(parent: Patch, a: Patch, desc: PreimageDescriptor) -> bool:
    if parent.get("") != desc.root:
        return False
    other = "b" if desc.side == "a" else "a"
    if parent.subtree(desc.side) != a:
        return False
    sib = parent.subtree(other)
    ref = desc.sibling_prefix(sib.depth)
    d = min(sib.depth, ref.depth)
    return sib.truncate(d) == ref.truncate(d)


def crosscheck(desc: XDescriptor, jp: Patch, depth: int | None = None) -> CrosscheckReport:
    """Validate the classified parents of one patch against the brute scan.

    Every occurrence of the patch inside the prefix is classified at its own
    site (classes can differ between occurrences of the same truncation) and
    the actual parent found there must match a predicted descriptor.
    Predicted descriptors never witnessed anywhere are reported as limit-only.
    """
    if desc.kind != "patch":
        if depth is None:
            depth = min(6, jp.depth - 1)
        a = jacaranda_prefix(depth) if desc.kind == "J" else jprime_prefix(depth)
    else:
        a = desc.patch
    d = a.depth
    if d + 1 > jp.depth:
        raise Shallow("prefix too shallow for a parent scan")
    table = jp.subtree_ids(d)
    ptable = jp.subtree_ids(d + 1)
    target = a.canonical_id

    primary = None
    if desc.kind == "J":
        primary = PreimageSet(JAC_PREIMAGES, "exact")
    elif desc.kind == "J'":
        primary = PreimageSet(JAC_PRIME_PREIMAGES, "exact")
    else:
        try:
            primary = preimages_classified(desc, jp)
        except (Undetermined, TypeUndetermined):
            primary = None

    report = CrosscheckReport(ok=True, occurrences=0)
    matched = set()
    seen = set()
    class_cache: dict = {}
    for m in range(1, len(table)):
        row = table[m]
        for i, cid in enumerate(row):
            if cid != target:
                continue
            report.occurrences += 1
            site = index_addr(i, m)
            key = _class_key(a, site, jp)
            pid = ptable[m - 1][i // 2]
            if (pid, key) in seen:
                continue
            seen.add((pid, key))
            cases = class_cache.get(key)
            if cases is None:
                cases = _site_cases(a, site, jp)
                class_cache[key] = cases
            if cases == "undetermined-parity":
                report.undetermined_sites += 1
                continue
            parent = jp.window(m - 1, i // 2, d + 1)
            hit = False
            for tag, members in cases:
                for member in members:
                    if _descriptor_matches(parent, a, member):
                        matched.add((member.root, member.side))
                        hit = True
            if not hit:
                report.ok = False
                report.mismatches.append((site, parent))
    if primary is not None:
        for member in primary.members:
            if (member.root, member.side) not in matched:
                report.limit_only.append(member.serialize())
    return report


def _class_key(a: Patch, site: str, jp: Patch):
    n = len(site)
    extra = None
    if v2(n) == 0 and n > 1:
        l = (1 << v2(n - 1)) - 1
        if l > a.depth:
            extra = _subtree_line(a, site, l, jp)
    return (a.canonical_id, n, extra)


def _site_cases(a: Patch, site: str, jp: Patch):
    try:
        tag, members = _classify_at_site(a, site, jp)
        return [(tag, members)]
    except Undetermined as exc:
        if exc.cases:
            return list(exc.cases)
        return "undetermined-parity"


def crosscheck_sweep(jp: Patch, max_depth: int = 6):
    """Oracle comparison over every distinct subpatch of depth <= max_depth.

    One pass per depth: each site's actual parent is matched against the
    classification for that site's class.  Returns the aggregate report and
    the number of distinct (patch, parent, class) combinations checked.
    """
    from .trees import subpatch_representatives

    total = CrosscheckReport(ok=True, occurrences=0)
    checked = 0
    for d in range(1, max_depth + 1):
        reps = subpatch_representatives(jp, d)
        table = jp.subtree_ids(d)
        ptable = jp.subtree_ids(d + 1)
        seen = set()
        class_cache: dict = {}
        for m in range(1, jp.depth - d + 1):
            row = table[m]
            prow = ptable[m - 1]
            for i, cid in enumerate(row):
                total.occurrences += 1
                site = index_addr(i, m)
                a = reps[cid]
                key = _class_key(a, site, jp)
                pid = prow[i // 2]
                if (pid, key) in seen:
                    continue
                seen.add((pid, key))
                cases = class_cache.get(key)
                if cases is None:
                    cases = _site_cases(a, site, jp)
                    class_cache[key] = cases
                if cases == "undetermined-parity":
                    total.undetermined_sites += 1
                    continue
                parent = jp.window(m - 1, i // 2, d + 1)
                checked += 1
                if not any(
                    _descriptor_matches(parent, a, member)
                    for tag, members in cases
                    for member in members
                ):
                    total.ok = False
                    total.mismatches.append((site, parent))
    return total, checked
