#!/usr/bin/env python3
"""Three-way thm7-even side-condition comparison at (2,15):
   (a) subfield: a not in F_{2^3}, F_{2^5}
   (b) trace same-index: Tr != p2*Tr_{p2}, Tr != p1*Tr_{p1}  (coeffs 1 mod 2)
   (c) none (main exclusions only)
Main exclusions fixed: lhs = m1(Tr_{p1}+a)+m2(Tr_{p2}+a) not in {S1, Sg}, class-member sums."""
from proto2_15_lib import *

p1, p2, g, f = 3, 5, 7, 4
C1 = [pow(2, r, 15) for r in range(f)]
Cg = [g * pow(2, r, 15) % 15 for r in range(f)]
m1, m2 = 1, 2  # (p1-1)/2, (p2-1)/2 -> mod 2: 1, 0

mis = [0,0,0]; cnt = 0
for k in range(1 << N):
    c = conjs(k)
    o = rank15(list(c)) == N
    cnt += o
    tr = xor_all(c)
    tr1 = xor_all(c[i*p1 % N] for i in range(N//p1))
    tr2 = xor_all(c[i*p2 % N] for i in range(N//p2))
    in_p1 = c[p1 % N] == k  # a^{q^{p1}} == a
    in_p2 = c[p2 % N] == k
    lhs = (tr1 ^ k) if m1 & 1 else 0
    if m2 & 1: lhs ^= tr2 ^ k
    S1 = xor_all(c[a % N] for a in C1)
    Sg = xor_all(c[a % N] for a in Cg)
    main = lhs != S1 and lhs != Sg
    va = (tr != 0) and (not in_p1) and (not in_p2) and main
    vb = (tr != 0) and (tr != tr2) and (tr != tr1) and main
    vc = (tr != 0) and main
    for i, v in enumerate((va, vb, vc)):
        if v != o: mis[i] += 1

print("count:", cnt, flush=True)
print("subfield:", mis[0], " trace:", mis[1], " none:", mis[2], flush=True)
