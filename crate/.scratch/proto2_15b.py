#!/usr/bin/env python3
"""Compare three variants of the n=p1*p2 even-q criterion on F_{2^15}:
   V1: as printed (Tr != 0, alpha notin F_{q^{p_i}}, LHS != S_c)
   V2: E-version   (Tr != 0, Tr_{p1} != 0, Tr_{p2} != 0, LHS != S_c)
   V3: both sets of side conditions
"""
from proto2_15_lib import *

p1, p2, g, f = 3, 5, 7, 4
C1 = [pow(2, r, 15) for r in range(f)]
Cg = [g * pow(2, r, 15) % 15 for r in range(f)]

cnt = 0
mis = [0, 0, 0]
examples = [[], [], []]
for k in range(1 << N):
    c = conjs(k)
    o = rank15(list(c)) == N
    cnt += o
    tr = xor_all(c)
    tr1 = xor_all(c[i*p1 % N] for i in range(N//p1))
    tr2 = xor_all(c[i*p2 % N] for i in range(N//p2))
    t = k
    for _ in range(p1): t = frob(t)
    in_p1 = (t == k)
    t = k
    for _ in range(p2): t = frob(t)
    in_p2 = (t == k)
    lhs = tr1 ^ k          # m1=1, m2=2=0 mod 2
    S1 = xor_all(c[a % N] for a in C1)
    Sg = xor_all(c[a % N] for a in Cg)
    main = (lhs != S1) and (lhs != Sg)
    v1 = tr != 0 and not in_p1 and not in_p2 and main
    v2 = tr != 0 and tr1 != 0 and tr2 != 0 and main
    v3 = v1 and v2
    for i, v in enumerate((v1, v2, v3)):
        if v != o:
            mis[i] += 1
            if len(examples[i]) < 3:
                examples[i].append((k, o, v, tr, tr1, tr2, in_p1, in_p2, lhs, S1, Sg))

print("NBG count:", cnt, flush=True)
print("V1 (printed) mismatches:", mis[0], flush=True)
print("V2 (E-based) mismatches:", mis[1], flush=True)
print("V3 (both)    mismatches:", mis[2], flush=True)
for i in range(3):
    for ex in examples[i]:
        print(f"  V{i+1} ex:", ex, flush=True)
