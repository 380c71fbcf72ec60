#!/usr/bin/env python3
"""Generate classical modular polynomial tables for small primes.

Method: power sums of the p+1 conjugate functions j(p*tau), j((tau+k)/p)
extracted from the integer q-expansion of j (every p-th coefficient trick),
Newton's identities to elementary symmetric functions, then greedy peeling
of each symmetric function into a Z-polynomial in j.

Every table is certified before it is written:
  * each peel leaves a remainder that must vanish on the full checked window
  * elementary symmetric functions must collapse to degree <= p+1 in j
  * coefficient matrix must be symmetric, monic, with zero X^(p+1)Y^k tails
  * Kronecker congruence  Phi_p == (X^p - Y)(X - Y^p) mod p
  * CM vanishing/non-vanishing values for j = 0 and j = 1728
  * Phi_p(j(q), j(q^p)) == 0 through ~200 q-coefficients
  * p = 2, 3 compared literally against the published coefficients

Output format (one file per prime):
  p <p> degree <p+1> convention symmetric-upper
  <i> <j> <coeff>          with i >= j, zero entries omitted
"""

import sys
from pathlib import Path

PRIMES = [2, 3, 5, 7, 13]
MARGIN = 8          # zero-checked exponents above the constant term per peel
CHECK_LEN = 200     # q-precision of the final functional identity check


def smul(a, b, L):
    out = [0] * L
    for i, ai in enumerate(a):
        if ai == 0 or i >= L:
            continue
        top = min(len(b), L - i)
        for k in range(top):
            bk = b[k]
            if bk:
                out[i + k] += ai * bk
    return out


def sinv(a, L):
    # a[0] must be 1
    assert a[0] == 1
    out = [0] * L
    out[0] = 1
    for n in range(1, L):
        s = 0
        for k in range(1, min(n, len(a) - 1) + 1):
            if a[k]:
                s += a[k] * out[n - k]
        out[n] = -s
    return out


def j_series(L):
    """Coefficients of J(q) = q*j(q), a power series with J[0] = 1."""
    s3 = [0] * L
    for d in range(1, L):
        d3 = d * d * d
        for m in range(d, L, d):
            s3[m] += d3
    e4 = [1] + [240 * s3[n] for n in range(1, L)]
    # eta(q)^24 / q via pentagonal number theorem and one square-and-multiply
    pent = [0] * L
    pent[0] = 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 >= L:
            break
        sgn = -1 if k % 2 else 1
        pent[g1] += sgn
        if g2 < L:
            pent[g2] += sgn
        k += 1
    p2 = smul(pent, pent, L)
    p4 = smul(p2, p2, L)
    p8 = smul(p4, p4, L)
    p16 = smul(p8, p8, L)
    p24 = smul(p16, p8, L)
    e8 = smul(e4, e4, L)
    e12 = smul(e8, e4, L)
    J = smul(e12, sinv(p24, L), L)
    assert J[:5] == [1, 744, 196884, 21493760, 864299970]
    return J


def phi_poly(p, J):
    """Return c with c[i][j] = coefficient of X^i Y^j of Phi_p."""
    m = MARGIN
    deg = p + 1
    # J^t for t <= p+1 at full length (power-sum extraction + final check)
    JP = [[1] + [0] * (CHECK_LEN - 1)]
    for t in range(1, deg + 1):
        JP.append(smul(JP[-1], J, CHECK_LEN))

    # J^d for d <= p*(p+1) on the short windows the peel needs
    peel_len = m + p * deg + 1
    JD = [[1] + [0] * (peel_len - 1)]
    for d in range(1, p * deg + 1):
        JD.append(smul(JD[-1], J, peel_len))

    def jpow_coeff(t, e):
        # coefficient of q^e in j(q)^t, from the full-length tables
        i = e + t
        if i < 0 or i >= CHECK_LEN:
            raise IndexError
        return JP[t][i]

    # power sums S_t on exponents [-p*t, m]
    def power_sum(t):
        lo = -p * t
        T = [0] * (m - lo + 1)
        for k in range(len(T)):
            e = lo + k
            if e % p == 0:
                ep = e // p
                if ep >= -t:
                    T[k] += jpow_coeff(t, ep)
            if p * e >= -t:
                T[k] += p * jpow_coeff(t, p * e)
        return lo, T

    # peel a Laurent window (lo, T, valid through exponent m) into a
    # Z-polynomial in j; remainder must vanish identically
    def peel(lo, T):
        D = -lo
        poly = [0] * (D + 1)
        for d in range(D, -1, -1):
            c = T[D - d]
            if c == 0:
                continue
            poly[d] = c
            for i in range(0, m + d + 1):
                T[D - d + i] -= c * JD[d][i]
        assert all(x == 0 for x in T), "peel remainder is nonzero"
        while poly and poly[-1] == 0:
            poly.pop()
        return poly

    spolys = [None]
    for t in range(1, deg + 1):
        lo, T = power_sum(t)
        st = peel(lo, T)
        assert len(st) - 1 == p * t and st[-1] == 1
        spolys.append(st)

    def padd(a, b):
        out = [0] * max(len(a), len(b))
        for i, v in enumerate(a):
            out[i] += v
        for i, v in enumerate(b):
            out[i] += v
        return out

    def pmul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for k, bk in enumerate(b):
                    if bk:
                        out[i + k] += ai * bk
        return out

    # Newton's identities; cancellation must pull every e_i down to
    # degree p + floor((i-1)/p)
    es = [[1]]
    for i in range(1, deg + 1):
        acc = []
        for t in range(1, i + 1):
            term = pmul(es[i - t], spolys[t])
            if t % 2 == 0:
                term = [-v for v in term]
            acc = padd(acc, term)
        assert all(v % i == 0 for v in acc)
        ei = [v // i for v in acc]
        while ei and ei[-1] == 0:
            ei.pop()
        assert len(ei) - 1 <= p + (i - 1) // p, "symmetric function failed to collapse"
        es.append(ei)

    c = [[0] * (deg + 1) for _ in range(deg + 1)]
    c[deg][0] = 1
    for i in range(1, deg + 1):
        sgn = -1 if i % 2 else 1
        for d, v in enumerate(es[i]):
            c[deg - i][d] = sgn * v

    validate(p, c, J, JP)
    return c


PHI2 = {
    (3, 0): 1, (2, 2): -1, (2, 1): 1488, (2, 0): -162000,
    (1, 1): 40773375, (1, 0): 8748000000, (0, 0): -157464000000000,
}
PHI3 = {
    (4, 0): 1, (3, 3): -1, (3, 2): 2232, (3, 1): -1069956, (3, 0): 36864000,
    (2, 2): 2587918086, (2, 1): 8900222976000, (2, 0): 452984832000000,
    (1, 1): -770845966336000000, (1, 0): 1855425871872000000000,
}


def phi_eval(c, x, y):
    deg = len(c) - 1
    acc = 0
    for i in range(deg, -1, -1):
        row = 0
        for j in range(deg, -1, -1):
            row = row * y + c[i][j]
        acc = acc * x + row
    return acc


def validate(p, c, J, JP):
    deg = p + 1
    for i in range(deg + 1):
        for j in range(deg + 1):
            assert c[i][j] == c[j][i], "not symmetric"
    assert c[deg][0] == 1
    assert all(c[deg][b] == 0 for b in range(1, deg + 1)), "not monic in X"

    # Kronecker congruence: (X^p - Y)(X - Y^p) = X^{p+1} - X^p Y^p - XY + Y^{p+1}
    k = [[0] * (deg + 1) for _ in range(deg + 1)]
    k[deg][0] = 1
    k[p][p] = -1
    k[1][1] = -1
    k[0][deg] = 1
    for i in range(deg + 1):
        for j in range(deg + 1):
            assert (c[i][j] - k[i][j]) % p == 0, "Kronecker congruence fails"

    # CM values: split primes give isogenies j -> j, inert ones must not
    if p % 3 == 1:
        assert phi_eval(c, 0, 0) == 0
    if p % 3 == 2:
        assert phi_eval(c, 0, 0) != 0
    if p % 4 == 1:
        assert phi_eval(c, 1728, 1728) == 0
    if p == 2:
        assert phi_eval(c, 1728, 1728) == 0   # 2 ramifies in Z[i]
    if p % 4 == 3:
        assert phi_eval(c, 1728, 1728) != 0

    if p == 2:
        ref = PHI2
    elif p == 3:
        ref = PHI3
    else:
        ref = None
    if ref is not None:
        for i in range(deg + 1):
            for j in range(i + 1):
                assert c[i][j] == ref.get((i, j), 0), "published table mismatch"

    # functional identity Phi_p(j(q), j(q^p)) == 0 through CHECK_LEN coefficients
    shift = deg + p * deg          # max pole order
    top = 3
    L = shift + top + 1
    assert CHECK_LEN >= L, "raise CHECK_LEN"

    def lmul(a, b):
        out = [0] * L
        for i, ai in enumerate(a):
            if ai:
                hi = min(L - i, len(b))
                for k in range(hi):
                    if b[k]:
                        out[i + k] += ai * b[k]
        return out

    total = [0] * L
    for a in range(deg + 1):
        # C_a(j(q^p)) on exponents [-p*deg + ... ] aligned at lo = -p*deg
        Ca = [0] * L
        nonzero = False
        for b in range(deg + 1):
            v = c[a][b]
            if v == 0:
                continue
            nonzero = True
            for i in range(len(JP[b])):
                e = p * (i - b)
                k = e + p * deg
                if 0 <= k < L:
                    Ca[k] += v * JP[b][i]
        if not nonzero:
            continue
        # j(q)^a aligned at lo = -deg
        Ja = [0] * L
        for i in range(len(JP[a])):
            k = (i - a) + deg
            if 0 <= k < L:
                Ja[k] += JP[a][i]
        total = [t + v for t, v in zip(total, lmul(Ja, Ca))]
    assert all(v == 0 for v in total), "q-expansion identity fails"


def write_table(path, p, c):
    deg = p + 1
    lines = [f"p {p} degree {deg} convention symmetric-upper"]
    for i in range(deg, -1, -1):
        for j in range(min(i, deg), -1, -1):
            if c[i][j]:
                lines.append(f"{i} {j} {c[i][j]}")
    path.write_text("\n".join(lines) + "\n")


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data"
    outdir.mkdir(parents=True, exist_ok=True)
    J = j_series(CHECK_LEN)
    for p in PRIMES:
        c = phi_poly(p, J)
        write_table(outdir / f"phi_{p}.txt", p, c)
        print(f"phi_{p}: ok")


if __name__ == "__main__":
    main()
