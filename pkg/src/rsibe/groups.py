"""Bilinear group abstraction with two interchangeable backends.

* MockBackend: group elements are their discrete logarithms modulo the group
  order, relative to a fixed generator per group.  Ops are exponent-space
  arithmetic, the pairing is a field multiplication, and ``dlog`` is exact.
  This makes every scheme equation assertable as an integer identity.
* CurveBackend: BLS12-381.  G1/G2 are the curve subgroups (G2 in twist
  coordinates), GT the order-r subgroup of Fq12.  No dlog oracle.

Both backends share the scalar field Z_r of BLS12-381, so a seeded scalar
stream drives identical protocol runs on either backend.

Scalars are plain ints in [0, ORDER).  Randomness comes from RandomSource,
which hands out labeled nonzero scalars and can record a (label -> value)
trace for white-box tests.
"""

import enum
import hashlib
import secrets
from dataclasses import dataclass, field

from . import bls12381 as curve
from .errors import DecodeError, GroupMismatch, RequiresMockBackend

ORDER = int(curve.R)


class Group(enum.Enum):
    G1 = "G1"
    G2 = "G2"
    GT = "GT"


class BackendKind(enum.Enum):
    MOCK = "mock"
    CURVE = "curve"


@dataclass(frozen=True)
class BackendConfig:
    kind: BackendKind = BackendKind.MOCK
    security_parameter: int = 128
    mock_trace: bool = False


@dataclass(frozen=True)
class GroupElement:
    """Element of G1, G2 or GT; payload representation is backend-specific."""

    group: Group
    payload: object

    def __repr__(self):
        return f"<{self.group.value} elem>"


class RandomSource:
    """Labeled scalar sampler: uniform over [1, ORDER-1].

    Seeded instances derive scalars from a SHA-256 counter stream, so the
    same seed yields the same draw sequence on any backend.  Unseeded
    instances use the OS RNG.  With ``trace=True`` every draw is recorded
    under its label; labels must be unique within one instance.
    """

    def __init__(self, seed: bytes | None = None, trace: bool = False):
        self._seed = seed
        self._counter = 0
        self.trace = {} if trace else None

    @classmethod
    def from_seed(cls, seed, trace: bool = False):
        if isinstance(seed, str):
            seed = bytes.fromhex(seed) if seed else b""
        elif isinstance(seed, int):
            seed = seed.to_bytes(16, "big", signed=False)
        return cls(seed=seed, trace=trace)

    def child(self, tag: str) -> "RandomSource":
        """Derive an independent stream (same trace setting)."""
        if self._seed is None:
            return RandomSource(None, trace=self.trace is not None)
        seed = hashlib.sha256(self._seed + b"/" + tag.encode()).digest()
        return RandomSource(seed, trace=self.trace is not None)

    def draw(self, label: str) -> int:
        if self._seed is None:
            value = 1 + secrets.randbelow(ORDER - 1)
        else:
            block = hashlib.sha256(
                self._seed + self._counter.to_bytes(8, "big")
            ).digest()
            block += hashlib.sha256(block).digest()
            self._counter += 1
            value = 1 + int.from_bytes(block, "big") % (ORDER - 1)
        if self.trace is not None:
            if label in self.trace:
                raise ValueError(f"duplicate trace label: {label}")
            self.trace[label] = value
        return value


def sample_scalar(rng: RandomSource, label: str = "scalar") -> int:
    """Uniform nonzero scalar from the caller's randomness source."""
    return rng.draw(label)


_MOCK_TAGS = {Group.G1: 1, Group.G2: 2, Group.GT: 3}
_MOCK_TAG_TO_GROUP = {v: k for k, v in _MOCK_TAGS.items()}


class MockBackend:
    """Exponent-space group: payload is the element's dlog mod ORDER."""

    kind = BackendKind.MOCK
    order = ORDER

    def __init__(self, config: BackendConfig | None = None):
        self.config = config or BackendConfig(kind=BackendKind.MOCK)

    def generator(self, group: Group) -> GroupElement:
        return GroupElement(group, 1)

    def identity(self, group: Group) -> GroupElement:
        return GroupElement(group, 0)

    def element_from_scalar(self, group: Group, k: int) -> GroupElement:
        """generator^k; the canonical way scheme code creates fresh elements."""
        return GroupElement(group, k % ORDER)

    def op(self, a: GroupElement, b: GroupElement) -> GroupElement:
        if a.group is not b.group:
            raise GroupMismatch(f"{a.group} vs {b.group}")
        return GroupElement(a.group, (a.payload + b.payload) % ORDER)

    def exp(self, a: GroupElement, k: int) -> GroupElement:
        return GroupElement(a.group, a.payload * k % ORDER)

    def inv(self, a: GroupElement) -> GroupElement:
        return GroupElement(a.group, -a.payload % ORDER)

    def pair(self, a: GroupElement, b: GroupElement) -> GroupElement:
        if a.group is not Group.G1 or b.group is not Group.G2:
            raise GroupMismatch("pairing expects (G1, G2)")
        return GroupElement(Group.GT, a.payload * b.payload % ORDER)

    def eq(self, a: GroupElement, b: GroupElement) -> bool:
        return a.group is b.group and a.payload == b.payload

    def dlog(self, a: GroupElement) -> int:
        return a.payload

    def serialize(self, a: GroupElement) -> bytes:
        return bytes([_MOCK_TAGS[a.group]]) + a.payload.to_bytes(32, "big")

    def deserialize(self, data: bytes, group: Group) -> GroupElement:
        if len(data) != 33:
            raise DecodeError(f"mock element must be 33 bytes, got {len(data)}")
        tag = data[0]
        if _MOCK_TAG_TO_GROUP.get(tag) is not group:
            raise DecodeError(f"group tag {tag} does not match {group.value}")
        value = int.from_bytes(data[1:], "big")
        if value >= ORDER:
            raise DecodeError("exponent not reduced mod group order")
        return GroupElement(group, value)


class CurveBackend:
    """BLS12-381 backend; payloads are affine points / canonical Fq12 tuples."""

    kind = BackendKind.CURVE
    order = ORDER

    def __init__(self, config: BackendConfig | None = None):
        self.config = config or BackendConfig(kind=BackendKind.CURVE)
        self._gt_gen = None

    def _gt_generator_payload(self):
        if self._gt_gen is None:
            self._gt_gen = curve.gt_canonical(
                curve.pairing(curve.G1_GEN, curve.G2_GEN)
            )
        return self._gt_gen

    def generator(self, group: Group) -> GroupElement:
        if group is Group.G1:
            return GroupElement(group, curve.G1_GEN)
        if group is Group.G2:
            return GroupElement(group, curve.G2_GEN)
        return GroupElement(group, self._gt_generator_payload())

    def identity(self, group: Group) -> GroupElement:
        if group is Group.GT:
            return GroupElement(group, curve.ONE12)
        return GroupElement(group, curve.INFINITY)

    def element_from_scalar(self, group: Group, k: int) -> GroupElement:
        return self.exp(self.generator(group), k)

    def op(self, a: GroupElement, b: GroupElement) -> GroupElement:
        if a.group is not b.group:
            raise GroupMismatch(f"{a.group} vs {b.group}")
        if a.group is Group.G1:
            return GroupElement(a.group, curve.g1_add(a.payload, b.payload))
        if a.group is Group.G2:
            return GroupElement(a.group, curve.g2_add(a.payload, b.payload))
        return GroupElement(
            a.group, curve.gt_canonical(curve.fq12_mul(a.payload, b.payload))
        )

    def exp(self, a: GroupElement, k: int) -> GroupElement:
        k = k % ORDER
        if a.group is Group.G1:
            return GroupElement(a.group, curve.g1_mul(a.payload, k))
        if a.group is Group.G2:
            return GroupElement(a.group, curve.g2_mul(a.payload, k))
        return GroupElement(a.group, curve.gt_canonical(curve.fq12_pow(a.payload, k)))

    def inv(self, a: GroupElement) -> GroupElement:
        if a.group is Group.G1:
            return GroupElement(a.group, curve.g1_neg(a.payload))
        if a.group is Group.G2:
            return GroupElement(a.group, curve.g2_neg(a.payload))
        # GT elements here always have order dividing r, so p^6-conjugation
        # is the inverse.
        return GroupElement(a.group, curve.gt_canonical(curve.fq12_conj(a.payload)))

    def pair(self, a: GroupElement, b: GroupElement) -> GroupElement:
        if a.group is not Group.G1 or b.group is not Group.G2:
            raise GroupMismatch("pairing expects (G1, G2)")
        return GroupElement(
            Group.GT, curve.gt_canonical(curve.pairing(a.payload, b.payload))
        )

    def eq(self, a: GroupElement, b: GroupElement) -> bool:
        return a.group is b.group and a.payload == b.payload

    def dlog(self, a: GroupElement) -> int:
        raise RequiresMockBackend("curve backend has no dlog oracle")

    def serialize(self, a: GroupElement) -> bytes:
        if a.group is Group.G1:
            return curve.g1_compress(a.payload)
        if a.group is Group.G2:
            return curve.g2_compress(a.payload)
        return curve.gt_to_bytes(a.payload)

    def deserialize(self, data: bytes, group: Group) -> GroupElement:
        if group is Group.G1:
            pt = curve.g1_decompress(data)
        elif group is Group.G2:
            pt = curve.g2_decompress(data)
        else:
            pt = curve.gt_from_bytes(data)
        if pt is None:
            raise DecodeError(f"invalid {group.value} encoding")
        return GroupElement(group, pt)


def make_backend(config: BackendConfig):
    if config.kind is BackendKind.MOCK:
        return MockBackend(config)
    return CurveBackend(config)
