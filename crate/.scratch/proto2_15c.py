#!/usr/bin/env python3
"""Ground truth: orthogonal idempotents of F_2[x]/(x^15-1) via CRT, then the
E_i(alpha) != 0 criterion exhaustively vs oracle, then compare e_1 supports
with the closed-form claim."""
from proto2_15_lib import *

P = 2

def ptrim(c):
    c = list(c)
    while c and c[-1] == 0: c.pop()
    return tuple(c)

def padd(a, b):
    n = max(len(a), len(b))
    return ptrim([((a[i] if i < len(a) else 0) ^ (b[i] if i < len(b) else 0)) for i in range(n)])

def pmul(a, b):
    if not a or not b: return ()
    out = [0]*(len(a)+len(b)-1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i+j] ^= y
    return ptrim(out)

def pdivmod(a, b):
    a = list(a)
    q = [0]*max(0, len(a)-len(b)+1)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop(); continue
        k = len(a)-len(b)
        q[k] = 1
        for i, y in enumerate(b):
            a[k+i] ^= y
        a.pop()
    return ptrim(q), ptrim(a)

def pgcd(a, b):
    while b:
        a, b = b, pdivmod(a, b)[1]
    return a

def pinvmod(a, m):
    # extended euclid over F2[x]
    r0, r1 = m, a
    s0, s1 = (), (1,)
    while r1:
        q, r = pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, padd(s0, pmul(q, s1))
    assert r0 == (1,), r0
    return s0

# x^15 - 1 and its cyclotomic classes under q=2
n = 15
xn1 = ptrim([1] + [0]*14 + [1])
classes = []
seen = set()
for a in range(n):
    if a in seen: continue
    orb = []
    b = a
    while b not in orb:
        orb.append(b); seen.add(b)
        b = b*2 % n
    classes.append(sorted(orb))
print("classes:", classes, flush=True)

# factor x^15-1 by gcd with orbit polynomials over F_16 -- instead, direct:
# build F_16 = F_2[z]/(z^4+z+1), zeta = z (order 15), p_C(x) = prod (x - zeta^a)
MODZ = 0b10011
def zmul(a, b):
    r = 0
    while b:
        if b & 1: r ^= a
        b >>= 1
        a <<= 1
        if a & 0b10000: a ^= MODZ
    return r
zpow = [1]
for _ in range(15):
    zpow.append(zmul(zpow[-1], 2))
assert zpow[15] == 1 and len(set(zpow[:15])) == 15

def factor_for(cls):
    # prod_{a in cls} (x - zeta^a) with coeffs in F_16, lands in F_2
    poly = [1]  # coeffs in F_16, ascending
    for a in cls:
        root = zpow[a]
        new = [0]*(len(poly)+1)
        for i, c in enumerate(poly):
            new[i+1] ^= c
            new[i] ^= zmul(c, root)
        poly = new
    assert all(c in (0, 1) for c in poly), poly
    return ptrim(poly)

factors = [factor_for(c) for c in classes]
print("factors:", factors, flush=True)
prod = (1,)
for f in factors: prod = pmul(prod, f)
assert prod == xn1

idems = []
for f in factors:
    M = pdivmod(xn1, f)[0]
    Ninv = pinvmod(pdivmod(M, f)[1], f)
    e = pdivmod(pmul(M, Ninv), xn1)[1]
    idems.append(e)

# verify idempotent identities
tot = ()
for e in idems:
    tot = padd(tot, e)
    assert pdivmod(pmul(e, e), xn1)[1] == e
for i in range(len(idems)):
    for j in range(i+1, len(idems)):
        assert pdivmod(pmul(idems[i], idems[j]), xn1)[1] == ()
assert tot == (1,)
print("idempotent identities OK", flush=True)
for cls, e in zip(classes, idems):
    print("class", cls, "-> e support:", [i for i, c in enumerate(e) if c], flush=True)

# exhaustive: E_i(alpha) != 0 for all i  vs oracle
supports = [[i for i, c in enumerate(e) if c] for e in idems]
mis = 0
cnt = 0
for k in range(1 << N):
    c = conjs(k)
    o = rank15(list(c)) == N
    cnt += o
    v = all(xor_all(c[s] for s in sup) != 0 for sup in supports)
    if v != o:
        mis += 1
print("E-criterion mismatches:", mis, "count:", cnt, flush=True)
