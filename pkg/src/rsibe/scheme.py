"""The revocable-storage IBE algorithms, parameterized by scheme variant.

Three variants of the same algorithm family:

* WEI_ORIGINAL      - the published scheme: the time-leaf ciphertext
                      component shares the message exponent s, every other
                      time-node component draws its own s_v.  Decryption
                      after a ciphertext update mixes two exponents and
                      fails; see the analysis module.
* NAIVE_SHARED_S    - the obvious "fix": every node component uses s.
                      Correct, but the shared exponent lets anyone rebuild
                      components for past periods (rollback attack).
* CORRECTED_PARALLEL- no shared base; each time node carries a complete
                      sub-ciphertext under its own exponent, and updates
                      re-randomize each node independently.  Correct and
                      rollback-resistant.

Ciphertext update supports two delegation modes.  The published update
formula multiplies the stored tail elements for every new label position,
which only matches the time-hash structure when the added bits are all 1;
BIT_CORRECTED applies tail elements only at 1-bits.  VERBATIM reproduces the
published formula.  CORRECTED_PARALLEL always delegates bit-corrected (the
verbatim formula would break its correctness).

Group layout (Type-3): ciphertext-side values live in G1, key-side values in
G2, and all shared bases are published in both groups.  The base point g is
the backend's canonical generator, so in the mock backend dlog(g) = 1 and
every white-box identity reads off the trace directly.
"""

import enum
import hashlib
from dataclasses import dataclass, field

from .errors import (
    IdentityMismatch,
    InvalidParameter,
    InvalidTime,
    InvalidUpdate,
    Rejected,
    Revoked,
)
from .groups import (
    BackendConfig,
    Group,
    GroupElement,
    RandomSource,
    make_backend,
)
from .trees import (
    RevocationList,
    RevocationTree,
    ct_nodes,
    find_prefix_ancestor,
    ku_nodes,
    leaf_label,
    parse_identity,
    path,
    validate_time,
)


class SchemeVariant(enum.Enum):
    WEI_ORIGINAL = "wei"
    NAIVE_SHARED_S = "naive"
    CORRECTED_PARALLEL = "corrected"


class DelegationMode(enum.Enum):
    VERBATIM = "verbatim"
    BIT_CORRECTED = "bit-corrected"


@dataclass(frozen=True)
class DualElem:
    """The same logical group element published in both source groups."""

    g1: GroupElement
    g2: GroupElement

    def side(self, group: Group) -> GroupElement:
        return self.g1 if group is Group.G1 else self.g2


@dataclass
class PublicParams:
    config: BackendConfig
    n: int
    ell: int
    g: DualElem
    g1: GroupElement          # g^alpha, ciphertext side
    g2: GroupElement          # random base, key side
    u: tuple                  # n+1 dual bases for the identity hash
    h: tuple                  # ell+1 dual bases for the time hash
    e_g1_g2: GroupElement     # cached pairing of g1 against g2
    backend: object = field(repr=False, default=None)

    @property
    def n_max(self) -> int:
        return 1 << self.n

    @property
    def t_max(self) -> int:
        return 1 << self.ell


@dataclass
class MasterKey:
    msk: GroupElement         # g2^alpha
    alpha: int | None = None  # retained only when mock tracing is on


@dataclass
class NodeSecret:
    """Per-node split of g2: gx0 = g2^d and gx1 = g2^(1-d).

    Keeping the exponent d lets key generation raise the split to alpha via
    msk^d without ever handling alpha itself.
    """

    split: int
    gx0: GroupElement
    gx1: GroupElement


@dataclass
class PrivateKey:
    identity: str
    leaf_index: int
    entries: dict            # node label -> (K0, K1), one per path node
    trace: dict | None = None


@dataclass
class KeyUpdate:
    t: int
    entries: dict            # node label -> (U0, U1), one per cover node
    trace: dict | None = None


@dataclass
class DecryptionKey:
    identity: str
    t: int
    d1: GroupElement
    d2: GroupElement
    d3: GroupElement
    node: str = ""           # the path/cover node the key was combined at
    trace: dict | None = None


@dataclass
class NodeComponent:
    """Ciphertext component attached to one time-tree node.

    c0 binds the node's label prefix under the node exponent; tail[j] holds
    h_j under the same exponent for each undetermined label position, which
    is exactly what delegation to a descendant consumes.  The parallel
    variant adds a full message encryption (a, b, c) per node.
    """

    label: str
    c0: GroupElement
    tail: dict               # position j (1-based, len(label) < j <= ell) -> G1
    a: GroupElement | None = None
    b: GroupElement | None = None
    c: GroupElement | None = None


@dataclass
class CiphertextBase:
    c0: GroupElement         # GT: message * e(g1, g2)^s
    c1: GroupElement         # G1: g^-s
    c2: GroupElement         # G1: F_u(ID)^s


@dataclass
class Ciphertext:
    variant: SchemeVariant
    identity: str
    t: int
    base: CiphertextBase | None
    nodes: dict              # node label -> NodeComponent over ct_nodes(ell, t)
    trace: dict | None = None


def _attach_trace(rng: RandomSource):
    return dict(rng.trace) if rng.trace is not None else None


def f_u(pp: PublicParams, identity: str, side: Group = Group.G1) -> GroupElement:
    """Identity hash u_0 * prod u_i over the 1-bits of the identity."""
    parse_identity(identity, pp.n)
    acc = pp.u[0].side(side)
    for i, bit in enumerate(identity, start=1):
        if bit == "1":
            acc = pp.backend.op(acc, pp.u[i].side(side))
    return acc


def f_h_prefix(pp: PublicParams, label: str, side: Group = Group.G1) -> GroupElement:
    """Time hash restricted to a node label: h_0 * prod h_j over its 1-bits."""
    acc = pp.h[0].side(side)
    for j, bit in enumerate(label, start=1):
        if bit == "1":
            acc = pp.backend.op(acc, pp.h[j].side(side))
    return acc


def f_h(pp: PublicParams, t: int, side: Group = Group.G1) -> GroupElement:
    validate_time(t, pp.ell)
    return f_h_prefix(pp, leaf_label(t, pp.ell), side)


def setup(n_max: int, t_max: int, config: BackendConfig, rng: RandomSource):
    """Generate master key, public parameters, and fresh system state.

    Returns (MasterKey, PublicParams, RevocationTree, RevocationList).
    """
    if n_max < 2 or n_max & (n_max - 1):
        raise InvalidParameter(f"user capacity must be a power of two >= 2, got {n_max}")
    if t_max < 2 or t_max & (t_max - 1):
        raise InvalidParameter(f"time capacity must be a power of two >= 2, got {t_max}")
    n = n_max.bit_length() - 1
    ell = t_max.bit_length() - 1
    backend = make_backend(config)

    alpha = rng.draw("setup.alpha")
    gen1 = backend.generator(Group.G1)
    gen2 = backend.generator(Group.G2)
    g = DualElem(gen1, gen2)
    g1 = backend.exp(gen1, alpha)
    g2 = backend.element_from_scalar(Group.G2, rng.draw("setup.g2"))

    def dual(label):
        k = rng.draw(label)
        return DualElem(
            backend.element_from_scalar(Group.G1, k),
            backend.element_from_scalar(Group.G2, k),
        )

    u = tuple(dual(f"setup.u[{i}]") for i in range(n + 1))
    h = tuple(dual(f"setup.h[{j}]") for j in range(ell + 1))

    pp = PublicParams(
        config=config,
        n=n,
        ell=ell,
        g=g,
        g1=g1,
        g2=g2,
        u=u,
        h=h,
        e_g1_g2=backend.pair(g1, g2),
        backend=backend,
    )
    mk = MasterKey(
        msk=backend.exp(g2, alpha),
        alpha=alpha if (config.mock_trace and config.kind.value == "mock") else None,
    )
    return mk, pp, RevocationTree(n), RevocationList()


def _node_secret(st: RevocationTree, label: str, pp: PublicParams, rng: RandomSource) -> NodeSecret:
    secret = st.node_secrets.get(label)
    if secret is None:
        d = rng.draw(f"node_secret[{label}]")
        backend = pp.backend
        gx0 = backend.exp(pp.g2, d)
        secret = NodeSecret(split=d, gx0=gx0, gx1=backend.op(pp.g2, backend.inv(gx0)))
        st.node_secrets[label] = secret
    return secret


def gen_key(identity: str, mk: MasterKey, st: RevocationTree,
            pp: PublicParams, rng: RandomSource) -> PrivateKey:
    """Issue the path-structured private key for a fresh identity."""
    parse_identity(identity, pp.n)
    backend = pp.backend
    leaf_index = st.assign_leaf(identity, rng)
    fu = f_u(pp, identity, Group.G2)
    entries = {}
    for label in path(leaf_label(leaf_index, st.n_levels), st.n_levels):
        secret = _node_secret(st, label, pp, rng)
        r = rng.draw(f"genkey.r[{label}]")
        k0 = backend.op(backend.exp(mk.msk, secret.split), backend.exp(fu, r))
        k1 = backend.exp(pp.g.g2, r)
        entries[label] = (k0, k1)
    return PrivateKey(identity, leaf_index, entries, trace=_attach_trace(rng))


def update_key(t: int, rl: RevocationList, mk: MasterKey, st: RevocationTree,
               pp: PublicParams, rng: RandomSource) -> KeyUpdate:
    """Publish key-update material over the cover of non-revoked leaves."""
    validate_time(t, pp.ell)
    backend = pp.backend
    fh = f_h(pp, t, Group.G2)
    entries = {}
    for label in sorted(ku_nodes(st, rl, t)):
        secret = _node_secret(st, label, pp, rng)
        r = rng.draw(f"updatekey.r[{label}]")
        u0 = backend.op(
            backend.exp(mk.msk, (1 - secret.split) % backend.order),
            backend.exp(fh, r),
        )
        u1 = backend.exp(pp.g.g2, r)
        entries[label] = (u0, u1)
    return KeyUpdate(t, entries, trace=_attach_trace(rng))


def derive_dk(sk: PrivateKey, ku: KeyUpdate, pp: PublicParams,
              rng: RandomSource) -> DecryptionKey:
    """Combine key halves at the common tree node and re-randomize."""
    backend = pp.backend
    common = sorted(set(sk.entries) & set(ku.entries))
    if not common:
        raise Revoked(f"identity {sk.identity} has no cover node at time {ku.t}")
    node = common[0]
    k0, k1 = sk.entries[node]
    u0, u1 = ku.entries[node]
    r0 = rng.draw("derivedk.r0")
    r1 = rng.draw("derivedk.r1")
    d1 = backend.op(
        backend.op(k0, u0),
        backend.op(
            backend.exp(f_u(pp, sk.identity, Group.G2), r0),
            backend.exp(f_h(pp, ku.t, Group.G2), r1),
        ),
    )
    d2 = backend.op(k1, backend.exp(pp.g.g2, r0))
    d3 = backend.op(u1, backend.exp(pp.g.g2, r1))
    return DecryptionKey(sk.identity, ku.t, d1, d2, d3, node=node,
                         trace=_attach_trace(rng))


def _node_component(pp: PublicParams, label: str, s_v: int) -> NodeComponent:
    backend = pp.backend
    c0 = backend.exp(f_h_prefix(pp, label, Group.G1), s_v)
    tail = {
        j: backend.exp(pp.h[j].side(Group.G1), s_v)
        for j in range(len(label) + 1, pp.ell + 1)
    }
    return NodeComponent(label=label, c0=c0, tail=tail)


def encrypt(identity: str, t: int, message: GroupElement, pp: PublicParams,
            variant: SchemeVariant, rng: RandomSource) -> Ciphertext:
    """Encrypt a GT message to (identity, t) under the chosen variant."""
    parse_identity(identity, pp.n)
    validate_time(t, pp.ell)
    if message.group is not Group.GT:
        raise InvalidParameter("message must be a GT element")
    backend = pp.backend
    leaf = leaf_label(t, pp.ell)
    labels = sorted(ct_nodes(pp.ell, t))
    fu1 = f_u(pp, identity, Group.G1)

    base = None
    nodes = {}
    if variant is SchemeVariant.CORRECTED_PARALLEL:
        for label in labels:
            s_v = rng.draw(f"encrypt.s_v[{label}]")
            comp = _node_component(pp, label, s_v)
            comp.a = backend.op(message, backend.exp(pp.e_g1_g2, s_v))
            comp.b = backend.exp(pp.g.g1, -s_v)
            comp.c = backend.exp(fu1, s_v)
            nodes[label] = comp
    else:
        s = rng.draw("encrypt.s")
        base = CiphertextBase(
            c0=backend.op(message, backend.exp(pp.e_g1_g2, s)),
            c1=backend.exp(pp.g.g1, -s),
            c2=backend.exp(fu1, s),
        )
        for label in labels:
            if variant is SchemeVariant.NAIVE_SHARED_S or label == leaf:
                s_v = s
            else:
                s_v = rng.draw(f"encrypt.s_v[{label}]")
            nodes[label] = _node_component(pp, label, s_v)
    return Ciphertext(variant, identity, t, base, nodes, trace=_attach_trace(rng))


def _delegate_c0(pp: PublicParams, src: NodeComponent, target: str,
                 mode: DelegationMode) -> GroupElement:
    """Push a node component down to a descendant label (before re-randomizing).

    VERBATIM multiplies every stored tail element across the extended label
    range, as published; BIT_CORRECTED multiplies only where the target label
    bit is 1, which is what actually reproduces the time-hash structure.
    """
    backend = pp.backend
    acc = src.c0
    for j in range(len(src.label) + 1, len(target) + 1):
        if mode is DelegationMode.VERBATIM or target[j - 1] == "1":
            acc = backend.op(acc, src.tail[j])
    return acc


def update_ct(ct: Ciphertext, t_new: int, pp: PublicParams, rng: RandomSource,
              mode: DelegationMode = DelegationMode.BIT_CORRECTED) -> Ciphertext:
    """Publicly re-target a ciphertext to a later time period."""
    validate_time(t_new, pp.ell)
    if t_new < ct.t:
        raise InvalidUpdate(f"cannot update from time {ct.t} back to {t_new}")
    backend = pp.backend
    leaf = leaf_label(t_new, pp.ell)
    labels = sorted(ct_nodes(pp.ell, t_new))
    fu1 = f_u(pp, ct.identity, Group.G1)
    corrected = ct.variant is SchemeVariant.CORRECTED_PARALLEL

    base = None
    if not corrected:
        s_new = rng.draw("updatect.s")
        base = CiphertextBase(
            c0=backend.op(ct.base.c0, backend.exp(pp.e_g1_g2, s_new)),
            c1=backend.op(ct.base.c1, backend.exp(pp.g.g1, -s_new)),
            c2=backend.op(ct.base.c2, backend.exp(fu1, s_new)),
        )

    nodes = {}
    for label in labels:
        src = ct.nodes[find_prefix_ancestor(ct.nodes, label)]
        if corrected:
            s_v = rng.draw(f"updatect.s_v[{label}]")
            # the parallel variant must delegate bit-correctly to stay coherent
            c0 = _delegate_c0(pp, src, label, DelegationMode.BIT_CORRECTED)
        else:
            if ct.variant is SchemeVariant.NAIVE_SHARED_S or label == leaf:
                s_v = s_new
            else:
                s_v = rng.draw(f"updatect.s_v[{label}]")
            c0 = _delegate_c0(pp, src, label, mode)
        comp = NodeComponent(
            label=label,
            c0=backend.op(c0, backend.exp(f_h_prefix(pp, label, Group.G1), s_v)),
            tail={
                j: backend.op(src.tail[j], backend.exp(pp.h[j].side(Group.G1), s_v))
                for j in range(len(label) + 1, pp.ell + 1)
            },
        )
        if corrected:
            comp.a = backend.op(src.a, backend.exp(pp.e_g1_g2, s_v))
            comp.b = backend.op(src.b, backend.exp(pp.g.g1, -s_v))
            comp.c = backend.op(src.c, backend.exp(fu1, s_v))
        nodes[label] = comp
    return Ciphertext(ct.variant, ct.identity, t_new, base, nodes,
                      trace=_attach_trace(rng))


def decrypt(ct: Ciphertext, dk: DecryptionKey, pp: PublicParams,
            rng: RandomSource,
            mode: DelegationMode = DelegationMode.BIT_CORRECTED) -> GroupElement:
    """Evaluate the decryption pairing product.

    Returns whatever GT element the product yields; recovering the message is
    a property of the variant, not of this routine.  Raises Rejected when the
    key's period predates the ciphertext and IdentityMismatch when the key is
    bound to someone else.
    """
    if ct.identity != dk.identity:
        raise IdentityMismatch(f"ciphertext for {ct.identity}, key for {dk.identity}")
    if dk.t < ct.t:
        raise Rejected(f"key time {dk.t} predates ciphertext time {ct.t}")
    backend = pp.backend
    current = update_ct(ct, dk.t, pp, rng, mode)
    comp = current.nodes[leaf_label(dk.t, pp.ell)]
    if ct.variant is SchemeVariant.CORRECTED_PARALLEL:
        gt0, b, c = comp.a, comp.b, comp.c
    else:
        gt0, b, c = current.base.c0, current.base.c1, current.base.c2
    return backend.op(
        backend.op(gt0, backend.pair(b, dk.d1)),
        backend.op(backend.pair(c, dk.d2), backend.pair(comp.c0, dk.d3)),
    )


def revoke(identity: str, t: int, rl: RevocationList, st: RevocationTree) -> RevocationList:
    """Mark an identity revoked from period t onward."""
    st.leaf_of(identity)  # raises UnknownIdentity
    rl.add(identity, t)
    return rl


def derive_message(pp: PublicParams, seed: bytes) -> GroupElement:
    """Deterministic GT message from a byte seed (same exponent on any backend)."""
    k = int.from_bytes(hashlib.sha256(b"rsibe-message" + seed).digest(), "big")
    k %= pp.backend.order
    return pp.backend.exp(pp.backend.generator(Group.GT), k)
