"""Exception types shared across the package.

Every error raised by the library derives from RsibeError so the CLI can map
failures to diagnostics uniformly.
"""


class RsibeError(Exception):
    """Base class for all library errors."""


class GroupMismatch(RsibeError):
    """Operands belong to different groups, or the wrong group for an op."""


class DecodeError(RsibeError):
    """Malformed, non-canonical, or out-of-group serialized element."""


class InvalidNode(RsibeError):
    """A node label violates the constraints of the operation."""


class InvalidTime(RsibeError):
    """Time period outside [0, T_max)."""


class InvalidIdentity(RsibeError):
    """Identity string has the wrong length or alphabet."""


class InvalidParameter(RsibeError):
    """Bad setup parameter (e.g. non power-of-two capacity)."""


class CapacityExceeded(RsibeError):
    """No free leaf remains in the revocation tree."""


class AlreadyAssigned(RsibeError):
    """Identity already holds a leaf in the revocation tree."""


class UnknownIdentity(RsibeError):
    """Identity has no leaf assignment."""


class NoAncestor(RsibeError):
    """No candidate node is a prefix of the target label."""


class Revoked(RsibeError):
    """Key derivation failed: path and key-update cover are disjoint."""


class InvalidUpdate(RsibeError):
    """Ciphertext update targets an earlier time period."""


class Rejected(RsibeError):
    """Decryption refused: the key's time period predates the ciphertext."""


class IdentityMismatch(RsibeError):
    """Ciphertext and decryption key are bound to different identities."""


class VariantMismatch(RsibeError):
    """Operation received artifacts produced under different scheme variants."""


class RequiresMockBackend(RsibeError):
    """White-box check invoked on a backend without a dlog oracle."""


class InvalidTarget(RsibeError):
    """Rollback target is not strictly in the past of the ciphertext."""


class AttackFailed(RsibeError):
    """No combination of public ciphertext components reaches the target."""
