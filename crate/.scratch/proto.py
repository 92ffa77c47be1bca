#!/usr/bin/env python3
"""Prototype of the NBG criteria to adjudicate formula readings before the Rust build.

GF(p^k) with dense coefficient tuples mod p; modulus found by random search.
"""
import random
from math import gcd
from functools import lru_cache

# ---------- basic GF(p)[x] ----------

def ptrim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)

def padd(a, b, p):
    n = max(len(a), len(b))
    return ptrim([( (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) ) % p for i in range(n)])

def pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0]*(len(a)+len(b)-1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i+j] = (out[i+j] + x*y) % p
    return ptrim(out)

def pdivmod(a, b, p):
    a = list(a); b = list(b)
    assert b
    inv = pow(b[-1], p-2, p)
    q = [0]*max(0, len(a)-len(b)+1)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop(); continue
        k = len(a)-len(b)
        c = a[-1]*inv % p
        q[k] = c
        for i, y in enumerate(b):
            a[k+i] = (a[k+i] - c*y) % p
        a.pop()
    return ptrim(q), ptrim(a)

def pmulmod(a, b, m, p):
    return pdivmod(pmul(a, b, p), m, p)[1]

def ppowmod(a, e, m, p):
    r = (1,)
    while e:
        if e & 1:
            r = pmulmod(r, a, m, p)
        a = pmulmod(a, a, m, p)
        e >>= 1
    return r

def is_irreducible(f, p):
    d = len(f)-1
    if d < 1: return False
    x = (0,1)
    # x^(p^d) == x mod f, and gcd-free at proper prime divisors of d
    t = x
    for _ in range(d):
        t = ppowmod(t, p, f, p)
    if t != pdivmod(x, f, p)[1]:
        return False
    for l in set(prime_factors(d)):
        t = x
        for _ in range(d // l):
            t = ppowmod(t, p, f, p)
        g = pgcd(padd(t, tuple(-c % p for c in x), p), f, p)
        if len(g) > 1:
            return False
    return True

def pgcd(a, b, p):
    while b:
        a, b = b, pdivmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p-2, p)
        a = tuple(c*inv % p for c in a)
    return a

def prime_factors(n):
    out = []
    d = 2
    while d*d <= n:
        while n % d == 0:
            out.append(d); n //= d
        d += 1
    if n > 1: out.append(n)
    return out

def find_irreducible(p, d, seed=0):
    rng = random.Random(seed)
    while True:
        f = tuple(rng.randrange(p) for _ in range(d)) + (1,)
        if is_irreducible(f, p):
            return f

# ---------- GF(q^n) tower: base q=p^m as GF(p)[y]/g, ext as GF(q)[t]/h ----------

class Fq:
    """F_{p^m}; elements are coeff tuples over F_p, length m."""
    def __init__(self, p, m, seed=0):
        self.p, self.m = p, m
        self.q = p**m
        self.g = (0,1) if m == 1 else find_irreducible(p, m, seed)
        if m == 1:
            self.g = None
    def zero(self): return (0,)*self.m
    def one(self): return (1,) + (0,)*(self.m-1)
    def from_int(self, k):
        # base-p digits
        out = []
        for _ in range(self.m):
            out.append(k % self.p); k //= self.p
        return tuple(out)
    def to_int(self, a):
        k = 0
        for c in reversed(a):
            k = k*self.p + c
        return k
    def add(self, a, b): return tuple((x+y) % self.p for x, y in zip(a, b))
    def sub(self, a, b): return tuple((x-y) % self.p for x, y in zip(a, b))
    def neg(self, a): return tuple((-x) % self.p for x in a)
    def smul(self, c, a): return tuple(c*x % self.p for x in a)
    def mul(self, a, b):
        if self.m == 1:
            return (a[0]*b[0] % self.p,)
        r = pmulmod(ptrim(a), ptrim(b), self.g, self.p)
        return r + (0,)*(self.m-len(r))
    def inv(self, a):
        e = self.q - 2
        r, x = self.one(), a
        while e:
            if e & 1: r = self.mul(r, x)
            x = self.mul(x, x); e >>= 1
        return r
    def is_zero(self, a): return all(c == 0 for c in a)

class Ext:
    """F_{q^n} over Fq; elements are tuples of n Fq-elements."""
    def __init__(self, base, n, seed=1):
        self.base, self.n = base, n
        if n == 1:
            self.h = None
        else:
            self.h = self._find_irr(n, seed)
    def _find_irr(self, d, seed):
        rng = random.Random(seed)
        while True:
            f = tuple(self.base.from_int(rng.randrange(self.base.q)) for _ in range(d)) + (self.base.one(),)
            if self._irr(f):
                return f
    # polynomial helpers over Fq
    def _trim(self, c):
        c = list(c)
        while c and self.base.is_zero(c[-1]): c.pop()
        return tuple(c)
    def _pmul(self, a, b):
        if not a or not b: return ()
        out = [self.base.zero()]*(len(a)+len(b)-1)
        for i, x in enumerate(a):
            if not self.base.is_zero(x):
                for j, y in enumerate(b):
                    out[i+j] = self.base.add(out[i+j], self.base.mul(x, y))
        return self._trim(out)
    def _pdivmod(self, a, b):
        a = list(a); b = list(b)
        inv = self.base.inv(b[-1])
        while len(a) >= len(b) and any(not self.base.is_zero(c) for c in a):
            if self.base.is_zero(a[-1]):
                a.pop(); continue
            k = len(a)-len(b)
            c = self.base.mul(a[-1], inv)
            for i, y in enumerate(b):
                a[k+i] = self.base.sub(a[k+i], self.base.mul(c, y))
            a.pop()
        return self._trim(a)
    def _pmulmod(self, a, b, m): return self._pdivmod(self._pmul(a, b), m)
    def _ppowmod(self, a, e, m):
        r = (self.base.one(),)
        while e:
            if e & 1: r = self._pmulmod(r, a, m)
            a = self._pmulmod(a, a, m); e >>= 1
        return r
    def _irr(self, f):
        d = len(f)-1
        x = (self.base.zero(), self.base.one())
        t = x
        for _ in range(d):
            t = self._ppowmod(t, self.base.q, f)
        if t != self._pdivmod(list(x), f):
            return False
        for l in set(prime_factors(d)):
            t = x
            for _ in range(d // l):
                t = self._ppowmod(t, self.base.q, f)
            diff = self._trim([self.base.sub(t[i] if i < len(t) else self.base.zero(),
                                             x[i] if i < len(x) else self.base.zero()) for i in range(max(len(t), len(x)))])
            g = self._gcd(diff, f)
            if len(g) > 1:
                return False
        return True
    def _gcd(self, a, b):
        while b:
            a, b = b, self._pdivmod(list(a), b)
        return a
    # element ops (tuples of length n)
    def zero(self): return (self.base.zero(),)*self.n
    def one(self): return (self.base.one(),) + (self.base.zero(),)*(self.n-1)
    def from_index(self, k):
        out = []
        for _ in range(self.n):
            out.append(self.base.from_int(k % self.base.q)); k //= self.base.q
        return tuple(out)
    def add(self, a, b): return tuple(self.base.add(x, y) for x, y in zip(a, b))
    def sub(self, a, b): return tuple(self.base.sub(x, y) for x, y in zip(a, b))
    def smul(self, c, a): return tuple(self.base.mul(c, x) for x in a)  # c in Fq
    def mul(self, a, b):
        if self.n == 1:
            return (self.base.mul(a[0], b[0]),)
        r = self._pmulmod(self._trim(a), self._trim(b), self.h)
        return r + (self.base.zero(),)*(self.n-len(r))
    def pow(self, a, e):
        r = self.one()
        while e:
            if e & 1: r = self.mul(r, a)
            a = self.mul(a, a); e >>= 1
        return r
    def frob(self, a):
        """a^q"""
        return self.pow(a, self.base.q)
    def is_zero(self, a): return all(self.base.is_zero(c) for c in a)
    def embed(self, c):
        return (c,) + (self.base.zero(),)*(self.n-1)

def conjugates(E, a):
    out = [a]
    for _ in range(E.n-1):
        out.append(E.frob(out[-1]))
    return out

def oracle(E, a):
    """rank of conjugate coords over Fq == n?"""
    q = E.base
    rows = [list(sum((list(c) for c in conj), [])) for conj in conjugates(E, a)]
    # rank over Fq: each entry is an Fq element (tuple) -- need Fq-rank of n x n matrix of Fq elems
    mat = [[conj[j] for j in range(E.n)] for conj in conjugates(E, a)]
    n = E.n
    rank = 0
    for col in range(n):
        piv = None
        for r in range(rank, n):
            if not q.is_zero(mat[r][col]):
                piv = r; break
        if piv is None: continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = q.inv(mat[rank][col])
        mat[rank] = [q.mul(inv, x) for x in mat[rank]]
        for r in range(n):
            if r != rank and not q.is_zero(mat[r][col]):
                c = mat[r][col]
                mat[r] = [q.sub(mat[r][j], q.mul(c, mat[rank][j])) for j in range(n)]
        rank += 1
    return rank == n

def mult_order(q, n):
    if n == 1: return 1
    assert gcd(q, n) == 1
    s, t = 1, q % n
    while t != 1:
        t = t*q % n; s += 1
    return s

def legendre(r, n):
    v = pow(r, (n-1)//2, n)
    return 1 if v == 1 else -1

def trace(E, a, m=1):
    """Tr^n_m: sum of a^{q^{m i}}, i in [0, n/m)."""
    n = E.n
    out = E.zero()
    t = a
    for i in range(n // m):
        out = E.add(out, t)
        for _ in range(m):
            t = E.frob(t)
    return out

def find_zeta(base, n, seed=2):
    s = mult_order(base.q, n)
    Es = Ext(base, s, seed=seed+100)
    rng = random.Random(seed)
    target = (base.q**s - 1)//n
    pf = set(prime_factors(n))
    while True:
        a = Es.from_index(rng.randrange(1, base.q**s))
        z = Es.pow(a, target)
        if E_is_order_n(Es, z, n, pf):
            return Es, z

def E_is_order_n(Es, z, n, pf):
    if Es.is_zero(z): return False
    if Es.pow(z, n) != Es.one(): return False
    for l in pf:
        if Es.pow(z, n//l) == Es.one():
            return False
    return True

def coerce_fq(Es, v):
    """element of F_{q^s} that lies in Fq -> Fq element"""
    assert all(Es.base.is_zero(c) for c in v[1:]), v
    return v[0]

# ---------------- Theorem 5 ----------------

def thm5_even(E, a, l, n):
    """p=2 branch; n odd prime, ord_n(q) = l = (n-1)/2."""
    q = E.base
    tr = trace(E, a)
    if E.is_zero(tr): return False
    conj = conjugates(E, a)
    A = E.zero()
    for r in range(1, n):
        if legendre(r, n) == 1:
            A = E.add(A, conj[r % E.n])
    lm = l % q.p
    # n = +-1 mod 8: A != l*Tr, (l+1)*Tr + a
    if n % 8 in (1, 7):
        c1 = E.smul(q.from_int(lm), tr)
        c2 = E.add(E.smul(q.from_int((l+1) % q.p), tr), a)
        return A != c1 and A != c2
    else:
        # omega in Fq with w^2+w+1=0
        w = None
        for k in range(q.q):
            cand = q.from_int(k)
            if q.is_zero(q.add(q.add(q.mul(cand, cand), cand), q.one())):
                w = cand; break
        assert w is not None
        w1 = q.add(w, q.one())
        c1 = E.add(E.smul(q.from_int(lm), tr), E.smul(w, E.add(tr, a)))
        c2 = E.add(E.smul(q.from_int(lm), tr), E.smul(w1, E.add(tr, a)))
        return A != c1 and A != c2

def thm5_odd(E, a, l, n, BmC):
    """p>=3 branch: Tr != 0 and (B-C)(n a - Tr) != +- n * sum legendre(r) a^{q^r}. BmC is Fq elt."""
    q = E.base
    tr = trace(E, a)
    if E.is_zero(tr): return False
    conj = conjugates(E, a)
    S = E.zero()
    for r in range(1, n):
        t = conj[r % E.n]
        if legendre(r, n) == 1:
            S = E.add(S, t)
        else:
            S = E.sub(S, t)
    nm = q.from_int(n % q.p)
    lhs = E.smul(BmC, E.sub(E.smul(nm, a), tr))
    rhs = E.smul(nm, S)
    return lhs != rhs and lhs != E.neg_(rhs) if hasattr(E, 'neg_') else (lhs != rhs and lhs != tuple(q.neg(c) for c in rhs))

# ---------------- Theorem 6 ----------------

def thm6(E, a, n, g, e, f, eps):
    """eps: list of e Fq elements (Gauss periods). classes C_i = {g^{i+ej} mod n}."""
    q = E.base
    tr = trace(E, a)
    if E.is_zero(tr): return False
    conj = conjugates(E, a)
    T = []
    for i in range(e):
        s = E.zero()
        for j in range(f):
            aexp = pow(g, i+e*j, n)
            s = E.add(s, conj[aexp % E.n])
        T.append(s)
    fneg = q.neg(q.from_int(f % q.p))
    target = E.smul(fneg, a)  # -f*a
    for j in range(e):
        s = E.zero()
        for i in range(e):
            s = E.add(s, E.smul(eps[(i+j) % e], T[i]))
        if s == target:
            return False
    return True

# ---------------- Theorem 7 ----------------

def thm7_even(E, a, n, p1, p2, g, f):
    q = E.base
    tr = trace(E, a)
    if E.is_zero(tr): return False
    # a notin F_{q^{p_i}}
    t = a
    for _ in range(p1): t = E.frob(t)
    if t == a: return False
    t = a
    for _ in range(p2): t = E.frob(t)
    if t == a: return False
    conj = conjugates(E, a)
    m1, m2 = (p1-1)//2 % q.p, (p2-1)//2 % q.p
    tr1 = trace(E, a, p1)
    tr2 = trace(E, a, p2)
    lhs = E.add(E.smul(q.from_int(m1), E.add(tr1, a)), E.smul(q.from_int(m2), E.add(tr2, a)))
    S1 = E.zero(); Sg = E.zero()
    for r in range(f):
        c1 = pow(q.q, r, n)           # class member a = q^r mod n
        cg = g * pow(q.q, r, n) % n
        S1 = E.add(S1, conj[c1 % E.n])
        Sg = E.add(Sg, conj[cg % E.n])
    return lhs != S1 and lhs != Sg

def thm7_odd(E, a, n, p1, p2, g, f, eps1, eps2):
    q = E.base
    tr = trace(E, a)
    if E.is_zero(tr): return False
    tr1 = trace(E, a, p1)
    tr2 = trace(E, a, p2)
    # corrected: Tr != p2 Tr_{p2}, Tr != p1 Tr_{p1}
    if tr == E.smul(q.from_int(p2 % q.p), tr2): return False
    if tr == E.smul(q.from_int(p1 % q.p), tr1): return False
    conj = conjugates(E, a)
    m1, m2 = (p1-1)//2, (p2-1)//2
    # X = 2 m1 m2 a + (1/2) sum_{(r,n)=1} a^{q^r} - m1(Tr_{p1} - a) - m2(Tr_{p2} - a)
    half = q.from_int(pow(2, q.p-2, q.p))
    U = E.zero()
    for r in range(1, n):
        if gcd(r, n) == 1:
            U = E.add(U, conj[r % E.n])
    X = E.smul(q.from_int(2*m1*m2 % q.p), a)
    X = E.add(X, E.smul(half, U))
    X = E.sub(X, E.smul(q.from_int(m1 % q.p), E.sub(tr1, a)))
    X = E.sub(X, E.smul(q.from_int(m2 % q.p), E.sub(tr2, a)))
    # D = S1 - Sg over class members
    S1 = E.zero(); Sg = E.zero()
    for r in range(f):
        c1 = pow(q.q, r, n)
        cg = g * pow(q.q, r, n) % n
        S1 = E.add(S1, conj[c1 % E.n])
        Sg = E.add(Sg, conj[cg % E.n])
    D = E.sub(S1, Sg)
    # coeff = n / (2 (eps1-eps2)) in Fq
    dd = q.sub(eps1, eps2)
    assert not q.is_zero(dd), "epsilon collision"
    coeff = q.mul(q.from_int(n % q.p), q.inv(q.add(dd, dd)))
    R = E.smul(coeff, D)
    negR = tuple(q.neg(c) for c in R)
    return X != R and X != negR

# ---------------- runs ----------------

def run_2_7():
    base = Fq(2, 1)
    E = Ext(base, 7, seed=11)
    n, l = 7, 3
    bad = 0; cnt = 0
    for k in range(2**7):
        a = E.from_index(k)
        o = oracle(E, a)
        t5 = thm5_even(E, a, l, n)
        if o != t5:
            bad += 1
            if bad < 4: print("  thm5 mismatch at", k, o, t5)
        cnt += o
    print(f"(2,7) thm5 even: oracle count={cnt}, mismatches={bad}")

    # thm6: e=2, f=3, g: prim root mod 7 with g^2 = 2: g=3? 3^2=2 mod 7 yes
    g, e, f = 3, 2, 3
    Es, z = find_zeta(base, 7, seed=5)
    eps = []
    for i in range(e):
        s = Es.zero()
        for j in range(f):
            s = Es.add(s, Es.pow(z, pow(g, i+e*j, n)))
        eps.append(coerce_fq(Es, s))
    bad = 0
    for k in range(2**7):
        a = E.from_index(k)
        if oracle(E, a) != thm6(E, a, n, g, e, f, eps):
            bad += 1
    print(f"(2,7) thm6: mismatches={bad}, eps={eps}")

def run_3_11():
    base = Fq(3, 1)
    n = 11
    l = mult_order(3, 11)
    print("ord_11(3) =", l, "(n-1)/2 =", (n-1)//2)
    E = Ext(base, 11, seed=7)
    Es, z = find_zeta(base, n, seed=9)
    B = Es.zero(); C = Es.zero()
    for r in range(1, n):
        if legendre(r, n) == 1:
            C = Es.add(C, Es.pow(z, r))
        else:
            B = Es.add(B, Es.pow(z, r))
    BmC = coerce_fq(Es, Es.sub(B, C))
    print("B-C =", BmC)
    rng = random.Random(42)
    bad = 0; cnt = 0; tested = 0
    for _ in range(1500):
        a = E.from_index(rng.randrange(3**11))
        o = oracle(E, a)
        t = thm5_odd(E, a, l, n, BmC)
        tested += 1
        if o != t:
            bad += 1
            if bad < 4: print("  mismatch", o, t)
        cnt += o
    print(f"(3,11) thm5 odd: sampled {tested}, nbg={cnt}, mismatches={bad}")

def run_3_13():
    base = Fq(3, 1)
    n = 13
    f = mult_order(3, 13)
    e = (n-1)//f
    print("ord_13(3) =", f, "e =", e)
    # g: prim root mod 13 with g^e = q = 3 mod 13
    g = None
    for cand in range(2, n):
        if mult_order(cand, n) == n-1 and pow(cand, e, n) == 3:
            g = cand; break
    print("g =", g)
    E = Ext(base, 13, seed=13)
    Es, z = find_zeta(base, n, seed=17)
    eps = []
    for i in range(e):
        s = Es.zero()
        for j in range(f):
            s = Es.add(s, Es.pow(z, pow(g, i+e*j, n)))
        eps.append(coerce_fq(Es, s))
    print("eps =", eps)
    rng = random.Random(43)
    bad = 0; cnt = 0
    for _ in range(1200):
        a = E.from_index(rng.randrange(3**13))
        o = oracle(E, a)
        t = thm6(E, a, n, g, e, f, eps)
        if o != t: bad += 1
        cnt += o
    print(f"(3,13) thm6: nbg={cnt}/1200 sampled, mismatches={bad}")

def run_2_15():
    base = Fq(2, 1)
    n, p1, p2 = 15, 3, 5
    f = (p1-1)*(p2-1)//2
    assert mult_order(2, 15) == f
    g = 7  # smallest unit not in <2> = {1,2,4,8}
    E = Ext(base, 15, seed=3)
    bad = 0; cnt = 0
    for k in range(2**15):
        a = E.from_index(k)
        o = oracle(E, a)
        t = thm7_even(E, a, n, p1, p2, g, f)
        if o != t:
            bad += 1
            if bad <= 5: print("  thm7 mismatch at", k, o, t)
        cnt += o
    print(f"(2,15) thm7 even: oracle count={cnt} (expect 10125), mismatches={bad}")

def run_17_15():
    base = Fq(17, 1)
    n, p1, p2 = 15, 3, 5
    assert mult_order(17, 3) == 2 and mult_order(17, 5) == 4
    f = 4
    assert mult_order(17, 15) == f
    # g not in <17 mod 15> = <2> = {1,2,4,8}
    g = 7
    E = Ext(base, 15, seed=23)
    Es, z = find_zeta(base, n, seed=29)
    S1 = Es.zero(); Sg = Es.zero()
    for r in range(f):
        S1 = Es.add(S1, Es.pow(z, pow(17, r, n)))
        Sg = Es.add(Sg, Es.pow(z, g*pow(17, r, n) % n))
    e1 = coerce_fq(Es, S1); e2 = coerce_fq(Es, Sg)
    print("eps1, eps2 =", e1, e2)
    rng = random.Random(44)
    bad = 0; cnt = 0
    for _ in range(1200):
        a = E.from_index(rng.randrange(17**15))
        o = oracle(E, a)
        t = thm7_odd(E, a, n, p1, p2, g, f, e1, e2)
        if o != t: bad += 1
        cnt += o
    print(f"(17,15) thm7 odd: nbg={cnt}/1200 sampled, mismatches={bad}")

import functools
print = functools.partial(print, flush=True)
if __name__ == "__main__":
    run_17_15()
