#!/usr/bin/env python3
"""Ground-truth idempotents of F_17[x]/(x^15-1) via CRT; compare with the
printed odd-q closed forms term by term."""
import functools
print = functools.partial(print, flush=True)
from proto import (Fq, Ext, find_zeta, coerce_fq, ptrim, padd, pmul, pdivmod,
                   pgcd, prime_factors, conjugates, oracle, thm7_odd)
import random

P = 17
n = 15
base = Fq(P, 1)

# classes under q=17 (=2 mod 15)
classes = []
seen = set()
for a in range(n):
    if a in seen: continue
    orb = []
    b = a
    while b not in orb:
        orb.append(b); seen.add(b)
        b = b * P % n
    classes.append(sorted(orb))
print("classes:", classes)

Es, z = find_zeta(base, n, seed=29)

def zpow(k):
    return Es.pow(z, k % n)

def factor_for(cls):
    poly = [Es.one()]
    for a in cls:
        root = zpow(a)
        new = [Es.zero()]*(len(poly)+1)
        for i, c in enumerate(poly):
            new[i+1] = Es.add(new[i+1], c)
            new[i] = Es.sub(new[i], Es.mul(c, root))
        poly = new
    return ptrim(tuple(coerce_fq(Es, c)[0] for c in poly))

xn1 = ptrim((P-1,) + (0,)*(n-1) + (1,))
factors = [factor_for(c) for c in classes]
prod = (1,)
for f in factors:
    prod = pmul(prod, f, P)
assert prod == xn1, (prod, xn1)
print("factorization OK")

def pinvmod(a, m, p):
    r0, r1 = m, a
    s0, s1 = (), (1,)
    while r1:
        q, r = pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, ptrim([( (s0[i] if i < len(s0) else 0) - sum(q[j]*(s1[i-j] if 0 <= i-j < len(s1) else 0) for j in range(len(q))) ) % p for i in range(max(len(s0), len(q)+len(s1)))])
    # normalize r0 to 1
    c = pow(r0[0], p-2, p) if len(r0) == 1 else None
    assert c is not None, r0
    return ptrim(tuple(x*c % p for x in s0))

idems = []
for f in factors:
    M = pdivmod(xn1, f, P)[0]
    Ninv = pinvmod(pdivmod(M, f, P)[1], f, P)
    e = pdivmod(pmul(M, Ninv, P), xn1, P)[1]
    idems.append(e)

tot = ()
for e in idems:
    tot = padd(tot, e, P)
    assert pdivmod(pmul(e, e, P), xn1, P)[1] == e, "not idempotent"
assert tot == (1,)
print("idempotent identities OK")

def vec(e):
    return tuple((e[i] if i < len(e) else 0) for i in range(n))

for cls, e in zip(classes, idems):
    print("class", cls, "-> n*e:", tuple(15*c % P for c in vec(e)))

# closed-form claim, odd q:
# n e_1 = 2m1m2 + coeff*(chi_1 - chi_g) + (1/2)(chi_1 + chi_g) - m1*chi_3 - m2*chi_5
# where chi_C is the characteristic vector of class C, coeff = n/(2(e1-e2)).
p1, p2 = 3, 5
m1, m2 = 1, 2
C1 = sorted(set(pow(P, r, n) for r in range(4)))
Cg = sorted(set(7 * pow(P, r, n) % n for r in range(4)))
C3 = sorted(set(3 * pow(P, r, n) % n for r in range(4)))
C5 = sorted(set(5 * pow(P, r, n) % n for r in range(4)))
print("C1,Cg,C3,C5:", C1, Cg, C3, C5)

def chi(C):
    return tuple(1 if i in C else 0 for i in range(n))

e1v = coerce_fq(Es, sum((Es.pow(z, a) for a in C1[1:]), Es.pow(z, C1[0])) if False else None) if False else None
# compute eps1, eps2 in F_17
def period(C):
    s = Es.zero()
    for a in C:
        s = Es.add(s, Es.pow(z, a))
    return coerce_fq(Es, s)[0]
eps1, eps2 = period(C1), period(Cg)
print("eps1, eps2:", eps1, eps2)

half = pow(2, P-2, P)
coeff = n * pow(2*(eps1-eps2) % P, P-2, P) % P

def lincomb(*pairs):
    out = [0]*n
    for c, v in pairs:
        for i in range(n):
            out[i] = (out[i] + c*v[i]) % P
    return tuple(out)

one0 = tuple(1 if i == 0 else 0 for i in range(n))
claim_ne1 = lincomb((2*m1*m2 % P, one0), (coeff, chi(C1)), ((-coeff) % P, chi(Cg)),
                    (half, chi(C1)), (half, chi(Cg)),
                    ((-m1) % P, chi(C3)), ((-m2) % P, chi(C5)))
claim_ne2 = lincomb((2*m1*m2 % P, one0), ((-coeff) % P, chi(C1)), (coeff, chi(Cg)),
                    (half, chi(C1)), (half, chi(Cg)),
                    ((-m1) % P, chi(C3)), ((-m2) % P, chi(C5)))
claim_ne3 = lincomb(((-1) % P, tuple([1]*n)), (p2 % P, chi([0]+C3)))
claim_ne4 = lincomb(((-1) % P, tuple([1]*n)), (p1 % P, chi([0]+C5)))
claim_ne0 = tuple([1]*n)

true_by_class = {tuple(c): tuple(n*x % P for x in vec(e)) for c, e in zip(classes, idems)}
claims = {
    (0,): claim_ne0,
    tuple(C1): claim_ne1,
    tuple(Cg): claim_ne2,
    tuple(C3): claim_ne3,
    tuple(C5): claim_ne4,
}
for cls, cl in claims.items():
    tv = true_by_class[cls]
    tag = "OK " if tv == cl else "DIFF"
    print(f"{tag} class {cls}")
    if tv != cl:
        print("   true :", tv)
        print("   claim:", cl)
        # also try swapped eps pairing
