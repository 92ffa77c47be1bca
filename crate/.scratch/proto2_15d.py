#!/usr/bin/env python3
"""V4: corrected side conditions (Tr != Tr+Tr_{p_i} forms) + class-member sums.
   V5: corrected side conditions + flat-reading sums.
Expect V4 = 0 mismatches, V5 > 0 (adjudicates the exponent reading)."""
from proto2_15_lib import *

p1, p2, g, f = 3, 5, 7, 4
C1 = [pow(2, r, 15) for r in range(f)]
Cg = [g * pow(2, r, 15) % 15 for r in range(f)]

cnt = mis4 = mis5 = 0
for k in range(1 << N):
    c = conjs(k)
    o = rank15(list(c)) == N
    cnt += o
    tr = xor_all(c)
    tr1 = xor_all(c[i*p1 % N] for i in range(N//p1))
    tr2 = xor_all(c[i*p2 % N] for i in range(N//p2))
    # side conditions: Tr != 0, Tr != p2*Tr_{p1}, Tr != p1*Tr_{p2}; p1,p2 odd -> coeff 1 in F_2
    side = tr != 0 and tr != tr1 and tr != tr2
    lhs = tr1 ^ k
    S1 = xor_all(c[a % N] for a in C1)
    Sg = xor_all(c[a % N] for a in Cg)
    v4 = side and lhs != S1 and lhs != Sg
    S1f = xor_all(c[r % N] for r in range(f))
    Sgf = xor_all(c[g * r % N] for r in range(f))
    v5 = side and lhs != S1f and lhs != Sgf
    if v4 != o: mis4 += 1
    if v5 != o: mis5 += 1

print("count:", cnt, flush=True)
print("V4 corrected+class-member mismatches:", mis4, flush=True)
print("V5 corrected+flat mismatches:", mis5, flush=True)
