#!/usr/bin/env python3
"""Bitpacked exhaustive check of the n = p1*p2, even q criterion on F_{2^15}/F_2.

Adjudicates the exponent reading: S_c = sum over class members a of alpha^{q^a},
versus the alternative flat reading S'_c = sum_{r<f} alpha^{q^r} style variants.
"""

def pmulmod2(a, b, m, d):
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> d & 1:
            a ^= m
    return r

def find_irr2(d):
    # x^d + ... irreducible over F2: test via x^(2^d) == x and gcd conditions
    from math import gcd as _g
    def mulmod(a, b):
        return pmulmod2(a, b, m, d)
    def powmod(a, e, m):
        r = 1
        while e:
            if e & 1: r = mulmod(r, a)
            a = mulmod(a, a)
            e >>= 1
        return r
    def modsq_iter(t, m, k):
        for _ in range(k):
            t = mulmod(t, t)
        return t
    def polygcd(a, b):
        while b:
            a, b = b, polymod(a, b)
        return a
    def polymod(a, b):
        db = b.bit_length()-1
        while a.bit_length()-1 >= db and a:
            a ^= b << (a.bit_length()-1-db)
        return a
    def primes(n):
        out, dd = [], 2
        while dd*dd <= n:
            while n % dd == 0:
                out.append(dd); n //= dd
            dd += 1
        if n > 1: out.append(n)
        return set(out)
    for cand in range(1 << d, 1 << (d+1)):
        if not (cand & 1):
            continue
        m = cand
        t = 2  # x
        ok = True
        tt = t
        for _ in range(d):
            tt = mulmod(tt, tt)
        if tt != 2:
            continue
        for l in primes(d):
            tt = 2
            for _ in range(d // l):
                tt = mulmod(tt, tt)
            if polygcd(tt ^ 2, m) != 1:
                ok = False; break
        if ok:
            return m
    raise RuntimeError

N = 15
MOD = find_irr2(N)
print("modulus bits:", bin(MOD), flush=True)

def mul(a, b):
    return pmulmod2(a, b, MOD, N)

SQ = [mul(1 << i, 1 << i) for i in range(N)]
def frob(a):
    r = 0
    i = 0
    while a:
        if a & 1:
            r ^= SQ[i]
        a >>= 1; i += 1
    return r

def conjs(a):
    out = [a]
    for _ in range(N-1):
        out.append(frob(out[-1]))
    return out

def rank15(rows):
    rank = 0
    for col in range(N):
        bit = 1 << col
        piv = None
        for r in range(rank, len(rows)):
            if rows[r] & bit:
                piv = r; break
        if piv is None: continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r] & bit:
                rows[r] ^= rows[rank]
        rank += 1
    return rank

def oracle(a):
    return rank15(conjs(a)) == N


def xor_all(vals):
    r = 0
    for v in vals: r ^= v
    return r
