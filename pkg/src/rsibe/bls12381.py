"""Self-contained BLS12-381 arithmetic: field tower, G1/G2 groups, optimal ate pairing.

Implements just enough of the curve for a Type-3 pairing backend:

* Fq, Fq2 = Fq[u]/(u^2+1), Fq6 = Fq2[v]/(v^3 - xi), Fq12 = Fq6[w]/(w^2 - v),
  with xi = u + 1.
* Jacobian-coordinate group law on E: y^2 = x^3 + 4 over Fq (G1) and the
  twist E': y^2 = x^3 + 4(u+1) over Fq2 (G2).
* Optimal ate pairing with an affine Miller loop over Fq12 (the G2 point is
  untwisted into E(Fq12)) and a Frobenius-assisted final exponentiation.
* ZCash-style compressed point encodings for G1/G2 and a fixed canonical
  coefficient layout for GT.

Field elements are plain tuples of gmpy2.mpz; points are affine pairs (or the
INFINITY sentinel).  Everything here is constant-structure but NOT constant
time; this backend exists for functional experiments, not production use.
"""

from gmpy2 import mpz, invert, powmod

# Base field, subgroup order, and curve parameter (the standard constants).
P = mpz(0x1A0111EA397FE69A4B1BA7B6434BACD764774B84F38512BF6730D2A0F6B0F6241EABFFFEB153FFFFB9FEFFFFFFFFAAAB)
R = mpz(0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001)
BLS_X = -0xD201000000010000  # curve parameter; negative for BLS12-381

G1_GEN = (
    mpz(0x17F1D3A73197D7942695638C4FA9AC0FC3688C4F9774B905A14E3A3F171BAC586C55E83FF97A1AEFFB3AF00ADB22C6BB),
    mpz(0x08B3F481E3AAA0F1A09E30ED741D8AE4FCF5E095D5D00AF600DB18CB2C04B3EDD03CC744A2888AE40CAA232946C5E7E1),
)
G2_GEN = (
    (
        mpz(352701069587466618187139116011060144890029952792775240219908644239793785735715026873347600343865175952761926303160),
        mpz(3059144344244213709971259814753781636986470325476647558659373206291635324768958432433509563104347017837885763365758),
    ),
    (
        mpz(1985150602287291935568054521177171638300868978215655730859378665066344726373823718423869104263333984641494340347905),
        mpz(927553665492332455747201965776037880757740193453592970025027978793976877002675564980949289727957565575433344219582),
    ),
)

INFINITY = "inf"  # sentinel for the point at infinity (shared by G1/G2)

ZERO2 = (mpz(0), mpz(0))
ONE2 = (mpz(1), mpz(0))


# ---------------------------------------------------------------------------
# Fq2 = Fq[u] / (u^2 + 1)
# ---------------------------------------------------------------------------

def fq2(c0, c1):
    return (mpz(c0) % P, mpz(c1) % P)


def fq2_add(a, b):
    return ((a[0] + b[0]) % P, (a[1] + b[1]) % P)


def fq2_sub(a, b):
    return ((a[0] - b[0]) % P, (a[1] - b[1]) % P)


def fq2_neg(a):
    return (-a[0] % P, -a[1] % P)


def fq2_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    t0 = a0 * b0
    t1 = a1 * b1
    return ((t0 - t1) % P, ((a0 + a1) * (b0 + b1) - t0 - t1) % P)


def fq2_sqr(a):
    a0, a1 = a
    return ((a0 + a1) * (a0 - a1) % P, 2 * a0 * a1 % P)


def fq2_scalar(a, k):
    return (a[0] * k % P, a[1] * k % P)


def fq2_inv(a):
    a0, a1 = a
    norm = (a0 * a0 + a1 * a1) % P
    ninv = invert(norm, P)
    return (a0 * ninv % P, -a1 * ninv % P)


def fq2_conj(a):
    return (a[0], -a[1] % P)


def fq2_mul_xi(a):
    # multiply by xi = 1 + u
    a0, a1 = a
    return ((a0 - a1) % P, (a0 + a1) % P)


def fq2_pow(a, e):
    result = ONE2
    base = a
    e = int(e)
    while e:
        if e & 1:
            result = fq2_mul(result, base)
        base = fq2_sqr(base)
        e >>= 1
    return result


# ---------------------------------------------------------------------------
# Fq6 = Fq2[v] / (v^3 - xi)
# ---------------------------------------------------------------------------

ZERO6 = (ZERO2, ZERO2, ZERO2)
ONE6 = (ONE2, ZERO2, ZERO2)


def fq6_add(a, b):
    return (fq2_add(a[0], b[0]), fq2_add(a[1], b[1]), fq2_add(a[2], b[2]))


def fq6_sub(a, b):
    return (fq2_sub(a[0], b[0]), fq2_sub(a[1], b[1]), fq2_sub(a[2], b[2]))


def fq6_neg(a):
    return (fq2_neg(a[0]), fq2_neg(a[1]), fq2_neg(a[2]))


def fq6_mul(a, b):
    a0, a1, a2 = a
    b0, b1, b2 = b
    v0 = fq2_mul(a0, b0)
    v1 = fq2_mul(a1, b1)
    v2 = fq2_mul(a2, b2)
    # Karatsuba-style cubic multiplication (6 Fq2 multiplications total)
    t1 = fq2_sub(fq2_sub(fq2_mul(fq2_add(a1, a2), fq2_add(b1, b2)), v1), v2)
    c0 = fq2_add(v0, fq2_mul_xi(t1))
    t2 = fq2_sub(fq2_sub(fq2_mul(fq2_add(a0, a1), fq2_add(b0, b1)), v0), v1)
    c1 = fq2_add(t2, fq2_mul_xi(v2))
    t3 = fq2_sub(fq2_sub(fq2_mul(fq2_add(a0, a2), fq2_add(b0, b2)), v0), v2)
    c2 = fq2_add(t3, v1)
    return (c0, c1, c2)


def fq6_mul_by_v(a):
    return (fq2_mul_xi(a[2]), a[0], a[1])


def fq6_inv(a):
    a0, a1, a2 = a
    c0 = fq2_sub(fq2_sqr(a0), fq2_mul_xi(fq2_mul(a1, a2)))
    c1 = fq2_sub(fq2_mul_xi(fq2_sqr(a2)), fq2_mul(a0, a1))
    c2 = fq2_sub(fq2_sqr(a1), fq2_mul(a0, a2))
    t = fq2_add(
        fq2_mul(a0, c0),
        fq2_mul_xi(fq2_add(fq2_mul(a1, c2), fq2_mul(a2, c1))),
    )
    tinv = fq2_inv(t)
    return (fq2_mul(c0, tinv), fq2_mul(c1, tinv), fq2_mul(c2, tinv))


# ---------------------------------------------------------------------------
# Fq12 = Fq6[w] / (w^2 - v)
# ---------------------------------------------------------------------------

ZERO12 = (ZERO6, ZERO6)
ONE12 = (ONE6, ZERO6)


def fq12_add(a, b):
    return (fq6_add(a[0], b[0]), fq6_add(a[1], b[1]))


def fq12_sub(a, b):
    return (fq6_sub(a[0], b[0]), fq6_sub(a[1], b[1]))


def fq12_neg(a):
    return (fq6_neg(a[0]), fq6_neg(a[1]))


def fq12_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    t0 = fq6_mul(a0, b0)
    t1 = fq6_mul(a1, b1)
    c1 = fq6_sub(fq6_sub(fq6_mul(fq6_add(a0, a1), fq6_add(b0, b1)), t0), t1)
    return (fq6_add(t0, fq6_mul_by_v(t1)), c1)


def fq12_sqr(a):
    a0, a1 = a
    t = fq6_mul(a0, a1)
    c0 = fq6_sub(
        fq6_sub(fq6_mul(fq6_add(a0, a1), fq6_add(a0, fq6_mul_by_v(a1))), t),
        fq6_mul_by_v(t),
    )
    return (c0, fq6_add(t, t))


def fq12_inv(a):
    a0, a1 = a
    t = fq6_inv(fq6_sub(fq6_mul(a0, a0), fq6_mul_by_v(fq6_mul(a1, a1))))
    return (fq6_mul(a0, t), fq6_neg(fq6_mul(a1, t)))


def fq12_conj(a):
    return (a[0], fq6_neg(a[1]))


def fq12_pow(a, e):
    e = int(e)
    if e < 0:
        a = fq12_inv(a)
        e = -e
    result = ONE12
    base = a
    while e:
        if e & 1:
            result = fq12_mul(result, base)
        base = fq12_sqr(base)
        e >>= 1
    return result


# Frobenius: for c * w^k the p-power maps c -> conj(c) and w^k picks up
# xi^(k(p-1)/6).  Basis order (w^0, w^2, w^4 | w^1, w^3, w^5).
_FROB_W = [fq2_pow(fq2(1, 1), k * (int(P) - 1) // 6) for k in range(6)]


def fq12_frobenius(a):
    (x0, x1, x2), (y0, y1, y2) = a
    return (
        (
            fq2_conj(x0),
            fq2_mul(fq2_conj(x1), _FROB_W[2]),
            fq2_mul(fq2_conj(x2), _FROB_W[4]),
        ),
        (
            fq2_mul(fq2_conj(y0), _FROB_W[1]),
            fq2_mul(fq2_conj(y1), _FROB_W[3]),
            fq2_mul(fq2_conj(y2), _FROB_W[5]),
        ),
    )


def fq12_scalar_embed(n):
    """Embed an Fq element as an Fq12 constant."""
    return (((mpz(n) % P, mpz(0)), ZERO2, ZERO2), ZERO6)


# ---------------------------------------------------------------------------
# Curve groups (affine coordinates externally, Jacobian internally)
# ---------------------------------------------------------------------------

# Per-field operation tables so one Jacobian implementation serves G1 and G2.
_FQ_OPS = {
    "mul": lambda a, b: a * b % P,
    "sqr": lambda a: a * a % P,
    "add": lambda a, b: (a + b) % P,
    "sub": lambda a, b: (a - b) % P,
    "neg": lambda a: -a % P,
    "dbl": lambda a: 2 * a % P,
    "inv": lambda a: invert(a, P),
    "zero": mpz(0),
    "one": mpz(1),
    "b": mpz(4),
}
_FQ2_OPS = {
    "mul": fq2_mul,
    "sqr": fq2_sqr,
    "add": fq2_add,
    "sub": fq2_sub,
    "neg": fq2_neg,
    "dbl": lambda a: fq2_add(a, a),
    "inv": fq2_inv,
    "zero": ZERO2,
    "one": ONE2,
    "b": fq2(4, 4),
}


def _jac_double(pt, ops):
    x, y, z = pt
    if y == ops["zero"]:
        return None
    mul, sqr, add, sub, dbl = ops["mul"], ops["sqr"], ops["add"], ops["sub"], ops["dbl"]
    a = sqr(x)
    b = sqr(y)
    c = sqr(b)
    d = dbl(sub(sub(sqr(add(x, b)), a), c))
    e = add(dbl(a), a)
    f = sqr(e)
    x3 = sub(f, dbl(d))
    y3 = sub(mul(e, sub(d, x3)), dbl(dbl(dbl(c))))
    z3 = dbl(mul(y, z))
    return (x3, y3, z3)


def _jac_add(p1, p2, ops):
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    mul, sqr, add, sub, dbl = ops["mul"], ops["sqr"], ops["add"], ops["sub"], ops["dbl"]
    x1, y1, z1 = p1
    x2, y2, z2 = p2
    z1z1 = sqr(z1)
    z2z2 = sqr(z2)
    u1 = mul(x1, z2z2)
    u2 = mul(x2, z1z1)
    s1 = mul(mul(y1, z2), z2z2)
    s2 = mul(mul(y2, z1), z1z1)
    h = sub(u2, u1)
    if h == ops["zero"]:
        if s1 == s2:
            return _jac_double(p1, ops)
        return None
    i = sqr(dbl(h))
    j = mul(h, i)
    r = dbl(sub(s2, s1))
    v = mul(u1, i)
    x3 = sub(sub(sqr(r), j), dbl(v))
    y3 = sub(mul(r, sub(v, x3)), dbl(mul(s1, j)))
    z3 = mul(sub(sub(sqr(add(z1, z2)), z1z1), z2z2), h)
    return (x3, y3, z3)


def _jac_to_affine(pt, ops):
    if pt is None:
        return INFINITY
    x, y, z = pt
    zinv = ops["inv"](z)
    zinv2 = ops["sqr"](zinv)
    return (ops["mul"](x, zinv2), ops["mul"](ops["mul"](y, zinv), zinv2))


def _affine_to_jac(pt, ops):
    if pt is INFINITY:
        return None
    return (pt[0], pt[1], ops["one"])


def _point_mul(pt, k, ops):
    k = int(k) % int(R)
    if k == 0 or pt is INFINITY:
        return INFINITY
    acc = None
    base = _affine_to_jac(pt, ops)
    for bit in bin(k)[2:]:
        acc = _jac_double(acc, ops) if acc is not None else acc
        if bit == "1":
            acc = _jac_add(acc, base, ops)
    return _jac_to_affine(acc, ops)


def _point_add(p1, p2, ops):
    return _jac_to_affine(
        _jac_add(_affine_to_jac(p1, ops), _affine_to_jac(p2, ops), ops), ops
    )


def _point_neg(pt, ops):
    if pt is INFINITY:
        return INFINITY
    return (pt[0], ops["neg"](pt[1]))


def g1_add(p1, p2):
    return _point_add(p1, p2, _FQ_OPS)


def g1_mul(pt, k):
    return _point_mul(pt, k, _FQ_OPS)


def g1_neg(pt):
    return _point_neg(pt, _FQ_OPS)


def g2_add(p1, p2):
    return _point_add(p1, p2, _FQ2_OPS)


def g2_mul(pt, k):
    return _point_mul(pt, k, _FQ2_OPS)


def g2_neg(pt):
    return _point_neg(pt, _FQ2_OPS)


def g1_on_curve(pt):
    if pt is INFINITY:
        return True
    x, y = pt
    return (y * y - (x * x * x + 4)) % P == 0


def g2_on_curve(pt):
    if pt is INFINITY:
        return True
    x, y = pt
    return fq2_sqr(y) == fq2_add(fq2_mul(fq2_sqr(x), x), _FQ2_OPS["b"])


def g1_in_subgroup(pt):
    return g1_on_curve(pt) and g1_mul(pt, R) is INFINITY


def g2_in_subgroup(pt):
    return g2_on_curve(pt) and g2_mul(pt, R) is INFINITY


# ---------------------------------------------------------------------------
# Pairing
# ---------------------------------------------------------------------------

def _untwist(pt):
    """Map a twist point E'(Fq2) into E(Fq12): (x, y) -> (x/w^2, y/w^3)."""
    x, y = pt
    # w^6 = xi, w^2 = v, so 1/w^2 = v^2/xi and 1/w^3 = (v/xi) * w.
    xi_inv = fq2_inv(fq2(1, 1))
    x12 = ((ZERO2, ZERO2, fq2_mul(x, xi_inv)), ZERO6)
    y12 = (ZERO6, (ZERO2, fq2_mul(y, xi_inv), ZERO2))
    return (x12, y12)


def _line(t, q, p12):
    """Evaluate the line through points t, q of E(Fq12) at the embedded G1
    point p12 = (x, y); returns (line value, t + q)."""
    xt, yt = t
    xq, yq = q
    xp, yp = p12
    if xt == xq and fq12_add(yt, yq) == ZERO12:
        # vertical line
        return fq12_sub(xp, xt), INFINITY
    if t == q:
        num = fq12_mul(fq12_sqr(xt), fq12_scalar_embed(3))
        den = fq12_add(yt, yt)
    else:
        num = fq12_sub(yq, yt)
        den = fq12_sub(xq, xt)
    lam = fq12_mul(num, fq12_inv(den))
    val = fq12_sub(fq12_sub(yp, yt), fq12_mul(lam, fq12_sub(xp, xt)))
    x3 = fq12_sub(fq12_sub(fq12_sqr(lam), xt), xq)
    y3 = fq12_sub(fq12_mul(lam, fq12_sub(xt, x3)), yt)
    return val, (x3, y3)


def _miller_loop(p, q):
    """f_{|x|,Q}(P) for P in G1 affine, Q a twist point; both not infinity."""
    q12 = _untwist(q)
    p12 = (fq12_scalar_embed(p[0]), fq12_scalar_embed(p[1]))
    t = q12
    f = ONE12
    for bit in bin(abs(BLS_X))[3:]:
        val, t = _line(t, t, p12)
        f = fq12_mul(fq12_sqr(f), val)
        if bit == "1":
            val, t = _line(t, q12, p12)
            f = fq12_mul(f, val)
    return f


def _final_exponentiation(f):
    # easy part: f^((p^6 - 1)(p^2 + 1))
    f = fq12_mul(fq12_conj(f), fq12_inv(f))
    f = fq12_mul(fq12_frobenius(fq12_frobenius(f)), f)
    # hard part: exponent (p^4 - p^2 + 1)/r decomposed in base p so that the
    # p^i factors become Frobenius maps; 4-way simultaneous exponentiation.
    p = int(P)
    d = (p ** 4 - p ** 2 + 1) // int(R)
    digits = []
    for _ in range(4):
        digits.append(d % p)
        d //= p
    assert d == 0
    powers = [f]
    for _ in range(3):
        powers.append(fq12_frobenius(powers[-1]))
    table = {}
    for mask in range(1, 16):
        acc = ONE12
        for i in range(4):
            if mask & (1 << i):
                acc = fq12_mul(acc, powers[i])
        table[mask] = acc
    result = ONE12
    for bitpos in range(max(dig.bit_length() for dig in digits) - 1, -1, -1):
        result = fq12_sqr(result)
        mask = 0
        for i in range(4):
            if (digits[i] >> bitpos) & 1:
                mask |= 1 << i
        if mask:
            result = fq12_mul(result, table[mask])
    return result


def pairing(p, q):
    """Optimal ate pairing e(P, Q) -> Fq12 for P in G1, Q in G2 (twist coords)."""
    if p is INFINITY or q is INFINITY:
        return ONE12
    f = _final_exponentiation(_miller_loop(p, q))
    if BLS_X < 0:
        f = fq12_conj(f)
    return f


# ---------------------------------------------------------------------------
# Square roots and encodings
# ---------------------------------------------------------------------------

_HALF_P = (int(P) - 1) // 2


def _sqrt_fq(a):
    a = a % P
    s = powmod(a, (P + 1) // 4, P)
    if s * s % P != a:
        return None
    return s


def _sqrt_fq2(a):
    a0, a1 = a
    if a1 == 0:
        s = _sqrt_fq(a0)
        if s is not None:
            return (s, mpz(0))
        s = _sqrt_fq(-a0 % P)
        if s is None:
            return None
        return (mpz(0), s)
    # complex method for p = 3 mod 4
    n = (a0 * a0 + a1 * a1) % P
    t = _sqrt_fq(n)
    if t is None:
        return None
    inv2 = invert(mpz(2), P)
    delta = (a0 + t) * inv2 % P
    x0 = _sqrt_fq(delta)
    if x0 is None:
        delta = (a0 - t) * inv2 % P
        x0 = _sqrt_fq(delta)
        if x0 is None:
            return None
    x1 = a1 * invert(2 * x0 % P, P) % P
    cand = (x0, x1)
    if fq2_sqr(cand) != (a0 % P, a1 % P):
        return None
    return cand


def _fq2_sign(a):
    """Lexicographic largest-y flag used by the compressed encoding."""
    a0, a1 = a
    if a1 != 0:
        return int(a1) > _HALF_P
    return int(a0) > _HALF_P


def g1_compress(pt):
    if pt is INFINITY:
        return bytes([0xC0] + [0] * 47)
    x, y = pt
    data = bytearray(int(x).to_bytes(48, "big"))
    data[0] |= 0x80
    if int(y) > _HALF_P:
        data[0] |= 0x20
    return bytes(data)


def g1_decompress(data):
    if len(data) != 48:
        return None
    flags = data[0]
    if not flags & 0x80:
        return None
    if flags & 0x40:
        if flags & 0x20 or any(data[1:]) or (flags & 0x1F):
            return None
        return INFINITY
    x = mpz(int.from_bytes(bytes([flags & 0x1F]) + data[1:], "big"))
    if x >= P:
        return None
    y = _sqrt_fq((x * x * x + 4) % P)
    if y is None:
        return None
    if (int(y) > _HALF_P) != bool(flags & 0x20):
        y = -y % P
    pt = (x, y)
    if not g1_in_subgroup(pt):
        return None
    return pt


def g2_compress(pt):
    if pt is INFINITY:
        return bytes([0xC0] + [0] * 95)
    (x0, x1), y = pt
    data = bytearray(int(x1).to_bytes(48, "big") + int(x0).to_bytes(48, "big"))
    data[0] |= 0x80
    if _fq2_sign(y):
        data[0] |= 0x20
    return bytes(data)


def g2_decompress(data):
    if len(data) != 96:
        return None
    flags = data[0]
    if not flags & 0x80:
        return None
    if flags & 0x40:
        if flags & 0x20 or any(data[1:]) or (flags & 0x1F):
            return None
        return INFINITY
    x1 = mpz(int.from_bytes(bytes([flags & 0x1F]) + data[1:48], "big"))
    x0 = mpz(int.from_bytes(data[48:], "big"))
    if x0 >= P or x1 >= P:
        return None
    x = (x0, x1)
    y = _sqrt_fq2(fq2_add(fq2_mul(fq2_sqr(x), x), _FQ2_OPS["b"]))
    if y is None:
        return None
    if _fq2_sign(y) != bool(flags & 0x20):
        y = fq2_neg(y)
    pt = (x, y)
    if not g2_in_subgroup(pt):
        return None
    return pt


def gt_to_bytes(a):
    out = bytearray()
    for half in a:
        for coeff in half:
            for c in coeff:
                out += int(c).to_bytes(48, "big")
    return bytes(out)


def gt_from_bytes(data):
    if len(data) != 576:
        return None
    vals = []
    for i in range(12):
        v = mpz(int.from_bytes(data[48 * i : 48 * (i + 1)], "big"))
        if v >= P:
            return None
        vals.append(v)
    elem = (
        ((vals[0], vals[1]), (vals[2], vals[3]), (vals[4], vals[5])),
        ((vals[6], vals[7]), (vals[8], vals[9]), (vals[10], vals[11])),
    )
    if fq12_pow(elem, R) != ONE12:
        return None
    return elem


def gt_canonical(a):
    """Re-normalize an Fq12 tuple to canonical mpz-mod-P entries."""
    return tuple(
        tuple((c[0] % P, c[1] % P) for c in half) for half in a
    )
