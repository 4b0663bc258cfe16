# Dense univariate polynomials over F_p as coefficient lists, lowest degree
# first, with no trailing zeros (the zero polynomial is []).


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a):
    return len(a) - 1 if a else -1


def add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return trim(out)


def neg(a, p):
    return [(-c) % p for c in a]


def sub(a, b, p):
    return add(a, neg(b, p), p)


def scale(a, c, p):
    c %= p
    if c == 0:
        return []
    return [x * c % p for x in a]


def mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim([c % p for c in out])


def divmod_(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], trim(a)
    inv = pow(b[-1], -1, p)
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % p
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return trim(q), trim(a[:db])


def mod(a, b, p):
    return divmod_(a, b, p)[1]


def monic(a, p):
    if not a:
        return []
    return scale(a, pow(a[-1], -1, p), p)


def xgcd(a, b, p):
    """Return (g, s, t) with s*a + t*b = g, g monic (or zero)."""
    r0, r1 = trim(a), trim(b)
    s0, s1, t0, t1 = [1], [], [], [1]
    while r1:
        q, r = divmod_(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, p), p)
        t0, t1 = t1, sub(t0, mul(q, t1, p), p)
    if r0:
        inv = pow(r0[-1], -1, p)
        r0, s0, t0 = scale(r0, inv, p), scale(s0, inv, p), scale(t0, inv, p)
    return r0, s0, t0


def gcd(a, b, p):
    return xgcd(a, b, p)[0]


def evaluate(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def powmod(a, e, m, p):
    result = [1]
    base = mod(a, m, p)
    while e:
        if e & 1:
            result = mod(mul(result, base, p), m, p)
        base = mod(mul(base, base, p), m, p)
        e >>= 1
    return result


def from_rationals(coeffs, p):
    """Reduce rational coefficients mod p; None if a denominator vanishes."""
    out = []
    for c in coeffs:
        num, den = c.numerator, c.denominator
        if den % p == 0:
            return None
        out.append(num * pow(den, -1, p) % p)
    return trim(out)


def derivative(a, p):
    return trim([i * c % p for i, c in enumerate(a)][1:])
