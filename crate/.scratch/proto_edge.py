#!/usr/bin/env python3
"""Edge cases hit by the unanimity grid: thm5 omega branch (4,5), thm5 odd with
m=2 (9,5), thm6 degenerate e>1,f=1,s=1 (7,3) and (4,3)."""
import functools, random
print = functools.partial(print, flush=True)
from proto import (Fq, Ext, find_zeta, coerce_fq, conjugates, oracle,
                   thm5_even, thm5_odd, thm6, mult_order, legendre)

def run_4_5():
    base = Fq(2, 2)      # F_4
    n, l = 5, 2
    assert mult_order(4, 5) == 2
    E = Ext(base, n, seed=31)
    bad = cnt = 0
    for k in range(4**5):
        a = E.from_index(k)
        o = oracle(E, a)
        t = thm5_even(E, a, l, n)
        if o != t:
            bad += 1
            if bad <= 3: print("  (4,5) mismatch at", k, o, t)
        cnt += o
    print(f"(4,5) thm5 even omega-branch: count={cnt}, mismatches={bad}")

def run_9_5():
    base = Fq(3, 2, seed=5)  # F_9
    n, l = 5, 2
    assert mult_order(9, 5) == 2
    E = Ext(base, n, seed=37)
    Es, z = find_zeta(base, n, seed=41)
    B = Es.zero(); C = Es.zero()
    for r in range(1, n):
        if legendre(r, n) == 1:
            C = Es.add(C, Es.pow(z, r))
        else:
            B = Es.add(B, Es.pow(z, r))
    BmC = coerce_fq(Es, Es.sub(B, C))
    print("(9,5) B-C =", BmC)
    rng = random.Random(45)
    bad = cnt = 0
    for _ in range(500):
        a = E.from_index(rng.randrange(9**5))
        o = oracle(E, a)
        t = thm5_odd(E, a, l, n, BmC)
        if o != t: bad += 1
        cnt += o
    print(f"(9,5) thm5 odd (m=2): nbg={cnt}/500, mismatches={bad}")

def run_thm6_deg(p, m, n, seed):
    base = Fq(p, m, seed=seed)
    q = base.q
    f = mult_order(q, n)
    e = (n - 1) // f
    g = None
    for cand in range(1, n):
        if mult_order(cand, n) == n - 1 and pow(cand, e, n) == q % n:
            g = cand; break
    E = Ext(base, n, seed=seed + 1)
    Es, z = find_zeta(base, n, seed=seed + 2)
    eps = []
    for i in range(e):
        s = Es.zero()
        for j in range(f):
            s = Es.add(s, Es.pow(z, pow(g, i + e * j, n)))
        eps.append(coerce_fq(Es, s))
    bad = cnt = 0
    for k in range(q**n):
        a = E.from_index(k)
        o = oracle(E, a)
        t = thm6(E, a, n, g, e, f, eps)
        if o != t:
            bad += 1
            if bad <= 3: print(f"  ({q},{n}) mismatch at", k, o, t)
        cnt += o
    print(f"({q},{n}) thm6 e={e} f={f} s={mult_order(q,n)}: count={cnt}, mismatches={bad}, g={g}, eps={eps}")

if __name__ == "__main__":
    run_4_5()
    run_9_5()
    run_thm6_deg(7, 1, 3, 51)
    run_thm6_deg(2, 2, 3, 53)
    run_thm6_deg(2, 3, 7, 57)   # (8,7): e=3? ord_7(8)=1 -> f=1, e=6
