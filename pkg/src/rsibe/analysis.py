"""Executable reproductions of the scheme's negative results.

* reproduce_failure: sweeps every (encrypt time, key time) pair and records
  which cells decrypt to the message.  Under the mock backend it additionally
  verifies, cell by cell, that the leftover factor of a failed decryption is
  exactly gt^((s_anc - s) * rho1 * dlog(F_h(t'))) -- the algebraic residue of
  delegating from a node whose exponent differs from the message exponent.
* rollback_attack: rebuilds ciphertext components for a past period out of
  nothing but public parameters and ciphertext elements.  Each available
  component is, structurally, prod_j h_j^(c_j * s) for a known 0/1 vector c,
  so reaching F_h(target)^s is a linear-algebra question mod the group order.
  The chain recovers the message against the shared-exponent variant and
  produces mixed-exponent garbage against the other two.
* check_rerandomization: white-box verifier that an updated ciphertext has
  the exponent structure of a fresh encryption at its new time.
* size_census: exact group-element counts per artifact.
* run_scenario: seeded mixed-operation scripts whose outcome sequences must
  agree across backends.
"""

import random
import time
from dataclasses import dataclass, field

from .errors import AttackFailed, InvalidTarget, Rejected, RequiresMockBackend, Revoked
from .groups import (
    ORDER,
    BackendConfig,
    BackendKind,
    Group,
    RandomSource,
)
from .scheme import (
    Ciphertext,
    DelegationMode,
    NodeComponent,
    PublicParams,
    SchemeVariant,
    decrypt,
    derive_dk,
    derive_message,
    encrypt,
    f_h,
    f_h_prefix,
    f_u,
    gen_key,
    revoke,
    setup,
    update_ct,
    update_key,
)
from .trees import ct_nodes, find_prefix_ancestor, leaf_label

RECOVERED = "MESSAGE_RECOVERED"
WRONG = "WRONG_RESULT"


# ---------------------------------------------------------------------------
# Decryption-failure matrix
# ---------------------------------------------------------------------------

@dataclass
class FailureReport:
    params: dict
    matrix: list            # cells {"t", "t_prime", "outcome"}
    residual_checks: list   # cells {"t", "t_prime", "ok"} for failing pairs
    summary: dict
    elapsed_seconds: float = 0.0
    schema: str = "rsibe.failure-report/1"

    def to_dict(self):
        return {
            "schema": self.schema,
            "params": self.params,
            "matrix": self.matrix,
            "residual_checks": self.residual_checks,
            "summary": self.summary,
            "elapsed_seconds": round(self.elapsed_seconds, 3),
        }


def reproduce_failure(n: int = 3, ell: int = 4, seed="00",
                      variant: SchemeVariant = SchemeVariant.WEI_ORIGINAL,
                      mode: DelegationMode = DelegationMode.BIT_CORRECTED,
                      config: BackendConfig | None = None) -> FailureReport:
    """Exhaustive decrypt-outcome matrix over all t <= t' pairs.

    The expected pattern is diagonal-only recovery for the original scheme
    and full recovery for the other variants; the report records the actual
    outcomes, and (mock backend, bit-corrected mode) the exact residual check
    for every failing cell.
    """
    start = time.time()
    if config is None:
        config = BackendConfig(kind=BackendKind.MOCK, mock_trace=True)
    mock = config.kind is BackendKind.MOCK
    tracing = mock and config.mock_trace
    rng = RandomSource.from_seed(seed, trace=tracing)

    mk, pp, st, rl = setup(1 << n, 1 << ell, config, rng.child("setup"))
    backend = pp.backend
    identity = leaf_label(1, n)
    sk = gen_key(identity, mk, st, pp, rng.child("genkey"))
    message = derive_message(pp, b"failure-demo")

    keys = {}
    for tp in range(1 << ell):
        ku = update_key(tp, rl, mk, st, pp, rng.child(f"updatekey[{tp}]"))
        dk = derive_dk(sk, ku, pp, rng.child(f"derivedk[{tp}]"))
        keys[tp] = (ku, dk)

    # the residual formula describes the original scheme's delegation mismatch
    check_residuals = (tracing and mode is DelegationMode.BIT_CORRECTED
                       and variant is SchemeVariant.WEI_ORIGINAL)
    matrix = []
    residual_checks = []
    for t in range(1 << ell):
        for tp in range(t, 1 << ell):
            ct = encrypt(identity, t, message, pp, variant,
                         rng.child(f"encrypt[{t},{tp}]"))
            ku, dk = keys[tp]
            result = decrypt(ct, dk, pp, rng.child(f"decrypt[{t},{tp}]"), mode)
            outcome = RECOVERED if result == message else WRONG
            matrix.append({"t": t, "t_prime": tp, "outcome": outcome})
            if outcome == WRONG and check_residuals:
                anc = find_prefix_ancestor(ct_nodes(ell, t), leaf_label(tp, ell))
                s = ct.trace["encrypt.s"]
                s_anc = ct.trace[f"encrypt.s_v[{anc}]"]
                rho1 = (ku.trace[f"updatekey.r[{dk.node}]"]
                        + dk.trace["derivedk.r1"])
                expected = (s_anc - s) * rho1 * backend.dlog(f_h(pp, tp, Group.G2))
                actual = backend.dlog(result) - backend.dlog(message)
                residual_checks.append({
                    "t": t,
                    "t_prime": tp,
                    "ok": actual % ORDER == expected % ORDER,
                })

    recovered = sum(1 for cell in matrix if cell["outcome"] == RECOVERED)
    if variant is SchemeVariant.WEI_ORIGINAL:
        expected_ok = all(
            (cell["outcome"] == RECOVERED) == (cell["t"] == cell["t_prime"])
            for cell in matrix
        )
    else:
        expected_ok = recovered == len(matrix)
    return FailureReport(
        params={
            "n": n,
            "ell": ell,
            "seed": seed if isinstance(seed, str) else str(seed),
            "variant": variant.value,
            "mode": mode.value,
            "backend": config.kind.value,
        },
        matrix=matrix,
        residual_checks=residual_checks,
        summary={
            "pairs": len(matrix),
            "recovered": recovered,
            "wrong": len(matrix) - recovered,
            "residuals_verified": sum(1 for c in residual_checks if c["ok"]),
            "residuals_failed": sum(1 for c in residual_checks if not c["ok"]),
            "matches_expected_pattern": expected_ok,
        },
        elapsed_seconds=time.time() - start,
    )


# ---------------------------------------------------------------------------
# Rollback attack on the shared-exponent fix
# ---------------------------------------------------------------------------

def _solve_mod_p(vectors, target, p=ORDER):
    """Coefficients x with sum x_i * v_i = target over Z_p, or None.

    Plain Gaussian elimination on the (dim x count) system; free variables
    are pinned to zero.
    """
    if not vectors:
        return None
    dim = len(target)
    count = len(vectors)
    aug = [[vectors[c][r] % p for c in range(count)] + [target[r] % p]
           for r in range(dim)]
    pivots = []
    row = 0
    for col in range(count):
        pivot = next((i for i in range(row, dim) if aug[i][col]), None)
        if pivot is None:
            continue
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = pow(aug[row][col], -1, p)
        aug[row] = [v * inv % p for v in aug[row]]
        for i in range(dim):
            if i != row and aug[i][col]:
                factor = aug[i][col]
                aug[i] = [(a - factor * b) % p for a, b in zip(aug[i], aug[row])]
        pivots.append((row, col))
        row += 1
        if row == dim:
            break
    if any(aug[i][count] for i in range(row, dim)):
        return None
    solution = [0] * count
    for r, c in pivots:
        solution[c] = aug[r][count]
    return solution


def _label_vector(label: str, ell: int):
    vec = [0] * (ell + 1)
    vec[0] = 1
    for j, bit in enumerate(label, start=1):
        if bit == "1":
            vec[j] = 1
    return vec


def _public_components(ct: Ciphertext, ell: int):
    """(reference, exponent-vector, element) for every h-based G1 component."""
    entries = []
    for label in sorted(ct.nodes):
        comp = ct.nodes[label]
        entries.append((f"c0[{label}]", _label_vector(label, ell), comp.c0))
        for j in sorted(comp.tail):
            vec = [0] * (ell + 1)
            vec[j] = 1
            entries.append((f"tail[{label}][{j}]", vec, comp.tail[j]))
    return entries


@dataclass
class ForgedCiphertext:
    ciphertext: Ciphertext
    transcript: list        # per forged element: the combination used

    @property
    def leaf_component(self) -> NodeComponent:
        depth = max(len(label) for label in self.ciphertext.nodes)
        return self.ciphertext.nodes[leaf_label(self.ciphertext.t, depth)]


def rollback_attack(ct: Ciphertext, target_t: int, pp: PublicParams) -> ForgedCiphertext:
    """Forge a ciphertext for a past period from public data only.

    Treats all node components as if they shared one exponent (true for the
    shared-exponent variant) and solves for each component of the past-time
    cover as a product of available components.  Raises AttackFailed when the
    target vectors are outside the span; raises InvalidTarget unless
    target_t < ct.t.  The returned transcript references only ciphertext
    component names and public coefficients.
    """
    if target_t >= ct.t:
        raise InvalidTarget(f"target {target_t} is not before ciphertext time {ct.t}")
    backend = pp.backend
    ell = pp.ell
    available = _public_components(ct, ell)
    vectors = [vec for _, vec, _ in available]

    def combine(target_vec, element_name):
        coeffs = _solve_mod_p(vectors, target_vec)
        if coeffs is None:
            raise AttackFailed(f"no public combination reaches {element_name}")
        acc = backend.identity(Group.G1)
        used = []
        for (ref, _, elem), coeff in zip(available, coeffs):
            if coeff:
                acc = backend.op(acc, backend.exp(elem, coeff))
                used.append({"component": ref, "exponent": coeff})
        return acc, {"element": element_name, "combination": used}

    transcript = []
    nodes = {}
    donor = ct.nodes[leaf_label(ct.t, ell)] if ct.variant is SchemeVariant.CORRECTED_PARALLEL else None
    for label in sorted(ct_nodes(ell, target_t)):
        c0, entry = combine(_label_vector(label, ell), f"c0[{label}]")
        transcript.append(entry)
        tail = {}
        for j in range(len(label) + 1, ell + 1):
            vec = [0] * (ell + 1)
            vec[j] = 1
            tail[j], entry = combine(vec, f"tail[{label}][{j}]")
            transcript.append(entry)
        comp = NodeComponent(label=label, c0=c0, tail=tail)
        if donor is not None:
            comp.a, comp.b, comp.c = donor.a, donor.b, donor.c
        nodes[label] = comp
    forged = Ciphertext(ct.variant, ct.identity, target_t, ct.base, nodes)
    return ForgedCiphertext(ciphertext=forged, transcript=transcript)


@dataclass
class AttackReport:
    params: dict
    attacked_variant: str
    outcome: dict           # attacked-variant result
    controls: dict          # variant -> result for the other two
    transcript: list
    schema: str = "rsibe.attack-report/1"

    def to_dict(self):
        return {
            "schema": self.schema,
            "params": self.params,
            "attacked_variant": self.attacked_variant,
            "outcome": self.outcome,
            "controls": self.controls,
            "transcript": self.transcript,
        }


def _attack_once(pp, mk, st, rl, sk, message, variant, ct_time, target_t, rng):
    """Encrypt under `variant`, run the rollback chain, decrypt the forgery."""
    ct = encrypt(sk.identity, ct_time, message, pp, variant, rng.child("encrypt"))
    try:
        forged = rollback_attack(ct, target_t, pp)
    except AttackFailed as exc:
        return {"forged": False, "recovered": False, "detail": str(exc)}, None
    ku = update_key(target_t, rl, mk, st, pp, rng.child("updatekey"))
    dk = derive_dk(sk, ku, pp, rng.child("derivedk"))
    result = decrypt(forged.ciphertext, dk, pp, rng.child("decrypt"))
    return (
        {"forged": True, "recovered": result == message},
        forged.transcript,
    )


def run_rollback_demo(n: int = 3, ell: int = 3, ct_time: int = 3,
                      target_t: int = 0, seed="00",
                      config: BackendConfig | None = None) -> AttackReport:
    """Full rollback demonstration with control runs on the other variants."""
    if config is None:
        config = BackendConfig(kind=BackendKind.MOCK)
    rng = RandomSource.from_seed(seed)
    mk, pp, st, rl = setup(1 << n, 1 << ell, config, rng.child("setup"))
    identity = leaf_label(1, n)
    sk = gen_key(identity, mk, st, pp, rng.child("genkey"))
    message = derive_message(pp, b"attack-demo")

    outcome, transcript = _attack_once(
        pp, mk, st, rl, sk, message, SchemeVariant.NAIVE_SHARED_S,
        ct_time, target_t, rng.child("attack.naive"))
    controls = {}
    for variant in (SchemeVariant.WEI_ORIGINAL, SchemeVariant.CORRECTED_PARALLEL):
        controls[variant.value], _ = _attack_once(
            pp, mk, st, rl, sk, message, variant,
            ct_time, target_t, rng.child(f"attack.{variant.value}"))
    return AttackReport(
        params={
            "n": n,
            "ell": ell,
            "ct_time": ct_time,
            "target_t": target_t,
            "seed": seed if isinstance(seed, str) else str(seed),
            "backend": config.kind.value,
        },
        attacked_variant=SchemeVariant.NAIVE_SHARED_S.value,
        outcome=outcome,
        controls=controls,
        transcript=transcript or [],
    )


# ---------------------------------------------------------------------------
# Re-randomization structure check
# ---------------------------------------------------------------------------

def _component_exponent(pp, comp, dlog):
    """Extract the node exponent and verify c0/tail coherence; None if mixed."""
    candidates = []
    for j in sorted(comp.tail):
        base = dlog(pp.h[j].side(Group.G1))
        candidates.append(dlog(comp.tail[j]) * pow(base, -1, ORDER) % ORDER)
    base_c0 = dlog(f_h_prefix(pp, comp.label, Group.G1))
    candidates.append(dlog(comp.c0) * pow(base_c0, -1, ORDER) % ORDER)
    if len(set(candidates)) != 1:
        return None
    return candidates[0]


def check_rerandomization(ct_before: Ciphertext, ct_after: Ciphertext,
                          pp: PublicParams) -> bool:
    """True iff ct_after has the exponent structure of a fresh encryption.

    Mock backend only.  Checks, per variant: node components internally
    coherent; the GT parts consistent with the delegation ancestors in
    ct_before (so the hidden message is unchanged); and for the shared-base
    variants, the leaf exponent equal to the base exponent (all node
    exponents, for the shared-exponent variant).
    """
    backend = pp.backend
    if backend.kind is not BackendKind.MOCK:
        raise RequiresMockBackend("re-randomization check needs the dlog oracle")
    dlog = backend.dlog
    ell = pp.ell
    if set(ct_after.nodes) != ct_nodes(ell, ct_after.t):
        return False

    exponents = {}
    for label, comp in ct_after.nodes.items():
        s_v = _component_exponent(pp, comp, dlog)
        if s_v is None:
            return False
        exponents[label] = s_v

    gt_base = dlog(pp.e_g1_g2)
    fu = dlog(f_u(pp, ct_after.identity, Group.G1))
    if ct_after.variant is SchemeVariant.CORRECTED_PARALLEL:
        for label, comp in ct_after.nodes.items():
            s_v = exponents[label]
            if dlog(comp.b) != -s_v % ORDER or dlog(comp.c) != s_v * fu % ORDER:
                return False
            anc_label = find_prefix_ancestor(ct_before.nodes, label)
            anc = ct_before.nodes[anc_label]
            s_anc = _component_exponent(pp, anc, dlog)
            if s_anc is None:
                return False
            delta = (s_v - s_anc) * gt_base % ORDER
            if (dlog(comp.a) - dlog(anc.a)) % ORDER != delta:
                return False
        return True

    # shared-base variants
    s = -dlog(ct_after.base.c1) % ORDER
    if dlog(ct_after.base.c2) != s * fu % ORDER:
        return False
    s_before = -dlog(ct_before.base.c1) % ORDER
    delta = (s - s_before) * gt_base % ORDER
    if (dlog(ct_after.base.c0) - dlog(ct_before.base.c0)) % ORDER != delta:
        return False
    leaf = leaf_label(ct_after.t, ell)
    if exponents[leaf] != s:
        return False
    if ct_after.variant is SchemeVariant.NAIVE_SHARED_S:
        return all(s_v == s for s_v in exponents.values())
    return True


# ---------------------------------------------------------------------------
# Size census
# ---------------------------------------------------------------------------

def size_census(n: int, ell: int, variant: SchemeVariant) -> dict:
    """Exact element counts per artifact; ciphertext counts for every t."""
    per_time = []
    for t in range(1 << ell):
        labels = sorted(ct_nodes(ell, t))
        node_counts = {}
        for label in labels:
            count = ell - len(label) + 1  # c0 plus one tail element per open bit
            if variant is SchemeVariant.CORRECTED_PARALLEL:
                count += 3  # per-node message part (a, b, c)
            node_counts[label if label else "ε"] = count
        base = 0 if variant is SchemeVariant.CORRECTED_PARALLEL else 3
        per_time.append({
            "t": t,
            "nodes": node_counts,
            "base_elements": base,
            "gt_elements": (len(labels) if variant is SchemeVariant.CORRECTED_PARALLEL else 1),
            "total_elements": base + sum(node_counts.values()),
        })
    return {
        "schema": "rsibe.size-census/1",
        "params": {"n": n, "ell": ell, "variant": variant.value},
        "private_key": {"entries": n + 1, "elements": 2 * (n + 1)},
        "key_update_no_revocations": {"entries": 1, "elements": 2},
        "decryption_key": {"elements": 3},
        "ciphertext": per_time,
    }


# ---------------------------------------------------------------------------
# Cross-backend scenario scripts
# ---------------------------------------------------------------------------

def run_scenario(seed: int, config: BackendConfig) -> list[str]:
    """Seeded mixed-operation script; returns the outcome sequence.

    The script shape depends only on the seed, and every scalar draw comes
    from the shared seeded stream, so two backends given the same seed must
    produce identical outcome sequences.
    """
    script = random.Random(seed)
    rng = RandomSource.from_seed(seed)
    outcomes = []

    mk, pp, st, rl = setup(4, 4, config, rng.child("setup"))
    variant = script.choice(list(SchemeVariant))
    outcomes.append(f"variant:{variant.value}")
    message = derive_message(pp, b"scenario")

    identities = ["00", "01", "10", "11"]
    script.shuffle(identities)
    keys = {}
    for identity in identities[: script.randint(1, 3)]:
        keys[identity] = gen_key(identity, mk, st, pp, rng.child(f"genkey[{identity}]"))
        outcomes.append(f"keygen:{identity}")

    if script.random() < 0.5:
        victim = script.choice(sorted(keys))
        t_rev = script.randrange(4)
        revoke(victim, t_rev, rl, st)
        outcomes.append(f"revoke:{victim}@{t_rev}")

    updates = {
        t: update_key(t, rl, mk, st, pp, rng.child(f"updatekey[{t}]"))
        for t in range(4)
    }

    for step in range(script.randint(2, 3)):
        identity = script.choice(sorted(keys))
        t_enc = script.randrange(4)
        t_key = script.randrange(4)
        ct = encrypt(identity, t_enc, message, pp, variant,
                     rng.child(f"encrypt[{step}]"))
        if script.random() < 0.5 and t_enc < 3:
            t_up = script.randrange(t_enc, 4)
            ct = update_ct(ct, t_up, pp, rng.child(f"updatect[{step}]"))
            outcomes.append(f"update:{t_enc}->{t_up}")
        try:
            dk = derive_dk(keys[identity], updates[t_key], pp,
                           rng.child(f"derivedk[{step}]"))
        except Revoked:
            outcomes.append(f"derive:{identity}@{t_key}:revoked")
            continue
        outcomes.append(f"derive:{identity}@{t_key}:ok")
        try:
            result = decrypt(ct, dk, pp, rng.child(f"decrypt[{step}]"))
        except Rejected:
            outcomes.append("decrypt:rejected")
            continue
        outcomes.append(
            "decrypt:recovered" if result == message else "decrypt:wrong"
        )
    return outcomes
