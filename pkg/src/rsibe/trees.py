"""Binary-tree machinery for revocation and time management.

Node labels are bit strings; the empty string is the root, and a label's
length is its depth.  Two trees share this addressing:

* the revocation tree (one leaf per user, complete-subtree covers), and
* the time tree (periods assigned to leaves left to right, present-and-future
  covers for ciphertext components).

`ct_nodes` is the corrected present-and-future cover built from right
siblings along the leaf path.  `ct_nodes_wei` is the broken published
definition (all off-path children of path nodes), kept so its past-leaf
leakage can be demonstrated.  Both are pure functions of (depth, time).
"""

from .errors import (
    AlreadyAssigned,
    CapacityExceeded,
    InvalidIdentity,
    InvalidNode,
    InvalidTime,
    NoAncestor,
    UnknownIdentity,
)

ROOT = ""


def validate_label(label: str, max_depth: int):
    if len(label) > max_depth or any(ch not in "01" for ch in label):
        raise InvalidNode(f"bad node label {label!r} for depth {max_depth}")


def validate_time(t: int, depth: int):
    if not 0 <= t < (1 << depth):
        raise InvalidTime(f"time {t} outside [0, {1 << depth})")


def leaf_label(index: int, depth: int) -> str:
    """Big-endian bit label of the index-th leaf."""
    return format(index, f"0{depth}b")


def label_str(label: str) -> str:
    """Human-readable form; the root prints as epsilon."""
    return label if label else "ε"


def path(leaf: str, depth: int) -> list[str]:
    """Root-to-leaf chain of labels, inclusive (length depth + 1)."""
    validate_label(leaf, depth)
    if len(leaf) != depth:
        raise InvalidNode(f"{leaf!r} is not a leaf of a depth-{depth} tree")
    return [leaf[:i] for i in range(depth + 1)]


def is_prefix(node: str, target: str) -> bool:
    return target[: len(node)] == node


def find_prefix_ancestor(candidates, target: str) -> str:
    """The unique candidate whose label prefixes `target` (itself counts).

    Raises NoAncestor when no candidate covers the target; for the
    present-and-future cover that signals a past-time target.
    """
    matches = [c for c in candidates if is_prefix(c, target)]
    if not matches:
        raise NoAncestor(f"no candidate covers {label_str(target)}")
    return max(matches, key=len)


def covered_leaves(nodes, depth: int) -> set[int]:
    """Leaf indices lying under any node of the set."""
    out = set()
    for node in nodes:
        width = depth - len(node)
        base = int(node, 2) << width if node else 0
        out.update(range(base, base + (1 << width)))
    return out


def ct_nodes(depth: int, t: int) -> set[str]:
    """Cover of the present and future periods {t .. 2^depth - 1}.

    RightSibling(Path(v_t)) minus Path(Parent(v_t)), plus the leaf itself.
    """
    validate_time(t, depth)
    leaf = leaf_label(t, depth)
    chain = path(leaf, depth)
    right_siblings = {v[:-1] + "1" for v in chain if v}
    parent_path = set(chain[:-1])
    return (right_siblings - parent_path) | {leaf}


def ct_nodes_wei(depth: int, t: int) -> set[str]:
    """The published (flawed) cover: off-path children of path nodes.

    Includes left children of the path, so it can reach leaves before t.
    """
    validate_time(t, depth)
    leaf = leaf_label(t, depth)
    chain = set(path(leaf, depth))
    out = {leaf}
    for v in chain:
        if len(v) < depth:
            for child in (v + "0", v + "1"):
                if child not in chain:
                    out.add(child)
    return out


class RevocationList:
    """Revocation records: identity -> first period it is revoked from."""

    def __init__(self):
        self.entries: dict[str, int] = {}

    def add(self, identity: str, t: int):
        # re-revoking keeps the earliest effective time
        current = self.entries.get(identity)
        if current is None or t < current:
            self.entries[identity] = t

    def is_revoked(self, identity: str, t: int) -> bool:
        start = self.entries.get(identity)
        return start is not None and start <= t

    def revoked_at(self, t: int) -> set[str]:
        return {ident for ident, start in self.entries.items() if start <= t}


class RevocationTree:
    """State of the user tree: leaf assignments plus per-node key splits.

    Node secrets are attached lazily by the scheme layer; this class only
    guards the assignment bookkeeping.  Leaves are handed out first-free in
    order by default; `policy="random"` samples among the free ones (the
    published description assigns randomly, but deterministic order keeps
    seeded runs reproducible).
    """

    def __init__(self, n_levels: int, policy: str = "sequential"):
        if policy not in ("sequential", "random"):
            raise ValueError(f"unknown assignment policy {policy!r}")
        self.n_levels = n_levels
        self.policy = policy
        self.leaf_assignments: dict[str, int] = {}
        self.node_secrets: dict[str, object] = {}

    @property
    def capacity(self) -> int:
        return 1 << self.n_levels

    def leaf_of(self, identity: str) -> int:
        try:
            return self.leaf_assignments[identity]
        except KeyError:
            raise UnknownIdentity(identity) from None

    def assign_leaf(self, identity: str, rng=None) -> int:
        if identity in self.leaf_assignments:
            raise AlreadyAssigned(identity)
        used = set(self.leaf_assignments.values())
        free = [i for i in range(self.capacity) if i not in used]
        if not free:
            raise CapacityExceeded(f"all {self.capacity} leaves assigned")
        if self.policy == "random" and rng is not None:
            index = free[rng.draw(f"assign_leaf[{identity}]") % len(free)]
        else:
            index = free[0]
        self.leaf_assignments[identity] = index
        return index


def ku_nodes(tree: RevocationTree, rl: RevocationList, t: int) -> set[str]:
    """Complete-subtree cover of the leaves not revoked at time t.

    Covers every non-revoked leaf of the tree (assigned or not); with no
    revocations this is just the root.
    """
    n = tree.n_levels
    revoked = set()
    for identity in rl.revoked_at(t):
        revoked.add(leaf_label(tree.leaf_of(identity), n))
    if not revoked:
        return {ROOT}
    marked = set()
    for leaf in revoked:
        marked.update(path(leaf, n))
    cover = set()
    for node in marked:
        if len(node) < n:
            for child in (node + "0", node + "1"):
                if child not in marked:
                    cover.add(child)
    return cover


def parse_identity(identity: str, n: int) -> str:
    if len(identity) != n or any(ch not in "01" for ch in identity):
        raise InvalidIdentity(f"identity must be {n} bits of 0/1, got {identity!r}")
    return identity
