"""High-precision Mittag-Leffler reference values.

Series summed in extended precision where the cancellation is affordable;
otherwise the algebraic asymptotic expansion, used only when its pole term
and smallest term are far below double precision. Prints
`alpha beta re(z) im(z) re(E) im(E)` per line.
"""
import sys

import mpmath as mp


def ml_series(alpha, beta, z):
    r = abs(z)
    growth = float(r) ** (1.0 / alpha) if r > 0 else 0.0
    mp.mp.dps = int(growth / 2.3) + 40
    z = mp.mpc(z)
    a = mp.mpf(alpha)
    b = mp.mpf(beta)
    s = mp.mpf(0)
    k = 0
    while True:
        term = z**k / mp.gamma(a * k + b)
        s += term
        if k > 10 and abs(term) < mp.mpf(10) ** (-mp.mp.dps + 5) * max(abs(s), 1):
            break
        k += 1
    return s


def ml_asymptotic(alpha, beta, z):
    mp.mp.dps = 40
    z = mp.mpc(z)
    az = abs(z)
    argz = mp.arg(z)
    total = mp.mpc(0)
    a = mp.mpf(alpha)
    b = mp.mpf(beta)
    if abs(argz) < a * mp.pi:
        s = z ** (1 / a)
        total += s ** (1 - b) * mp.exp(s) / a
    last = mp.inf
    for k in range(1, 4000):
        x = b - a * k
        term = -z ** (-k) * mp.rgamma(x)
        # 1/Gamma vanishes near the poles; such terms say nothing about the
        # growth of the series
        regular = x > 0 or abs(x - mp.nint(x)) > mp.mpf("1e-6")
        if regular and abs(term) > last:
            break
        total += term
        if regular:
            last = abs(term)
            if last < mp.mpf(10) ** (-45) * abs(total):
                break
    return total, last


def reference(alpha, beta, z):
    growth = abs(z) ** (1.0 / alpha)
    if growth < 3000:
        return ml_series(alpha, beta, z)
    value, err = ml_asymptotic(alpha, beta, z)
    assert err < 1e-25 * abs(value), (alpha, beta, z)
    return value


if __name__ == "__main__":
    for line in sys.stdin:
        a, b, x, y = map(float, line.split())
        try:
            v = reference(a, b, complex(x, y))
        except AssertionError:
            print(f"skipped {a} {b} {x} {y}: expansion not accurate enough", file=sys.stderr)
            continue
        print(f"{a!r} {b!r} {x!r} {y!r} {mp.nstr(v.real, 20)} {mp.nstr(v.imag, 20)}")
