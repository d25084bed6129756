"""Slow, independent reference implementations used to cross-check the library.

Nothing here imports the algorithms under test; only the table-backed
structure type and the scalar arithmetic are shared.
"""

from __future__ import annotations

from itertools import combinations, product


# -- filters and homomorphisms -----------------------------------------------------------

def brute_filters(M):
    """Every zero-free subset F with a + b in F iff a in F and b in F."""
    nz = [a for a in M.elements if a != M.zero]
    out = []
    for r in range(len(nz) + 1):
        for S in combinations(nz, r):
            S = frozenset(S)
            if all((M.add(a, b) in S) == (a in S and b in S)
                   for a in M.elements for b in M.elements):
                out.append(S)
    return out


def brute_homs(M1, M2, algebra=False):
    """All maps preserving zero, addition, negation, scalars (and product/unit)."""
    n = M1.size
    found = []
    f = [None] * n

    def ok_upto(k):
        # every constraint whose elements are all assigned
        for a in range(k + 1):
            for lam in M1.units:
                b = M1.act(lam, a)
                if f[b] is not None and f[b] != M2.act(M2.base.embed(lam), f[a]):
                    return False
            for b in range(k + 1):
                c = M1.add(a, b)
                if f[c] is not None and f[c] != M2.add(f[a], f[b]):
                    return False
                if algebra:
                    c = M1.mul(a, b)
                    if f[c] is not None and f[c] != M2.mul(f[a], f[b]):
                        return False
        return True

    def rec(k):
        if k == n:
            found.append(tuple(f))
            return
        for v in M2.elements:
            if k == M1.zero and v != M2.zero:
                continue
            if algebra and k == M1.one and v != M2.one:
                continue
            f[k] = v
            if ok_upto(k):
                rec(k + 1)
            f[k] = None

    rec(0)
    return found


# -- congruences -----------------------------------------------------------------------

def _unary_images(A, a):
    out = [A.neg(a)]
    out += [A.act(lam, a) for lam in A.units]
    out += [A.add(a, c) for c in A.elements]
    if A.is_algebra:
        out += [A.mul(a, c) for c in A.elements]
        out += [A.mul(c, a) for c in A.elements]
    return out


def fixpoint_closure(A, pairs):
    """Smallest congruence containing ``pairs`` by naive saturation of a pair set.

    Returns block labels (least element of each block).
    """
    R = {(a, a) for a in A.elements}
    for a, b in pairs:
        R.add((a, b))
        R.add((b, a))
    changed = True
    while changed:
        changed = False
        new = set()
        for a, b in R:
            for x, y in zip(_unary_images(A, a), _unary_images(A, b)):
                if (x, y) not in R:
                    new.add((x, y))
        for a, b in R:
            for c, d in R:
                if b == c and (a, d) not in R:
                    new.add((a, d))
        if new:
            R |= new
            changed = True
    return tuple(min(b for b in A.elements if (a, b) in R) for a in A.elements)


def set_partitions(n):
    def rec(i, label, k):
        if i == n:
            yield tuple(label)
            return
        for j in range(k + 1):
            label.append(j)
            yield from rec(i + 1, label, max(k, j + 1))
            label.pop()

    yield from rec(0, [], 0)


def is_compatible(A, label):
    for a in A.elements:
        for b in A.elements:
            if label[a] != label[b]:
                continue
            for x, y in zip(_unary_images(A, a), _unary_images(A, b)):
                if label[x] != label[y]:
                    return False
    return True


def normalize(label):
    first = {}
    out = []
    for i, l in enumerate(label):
        out.append(first.setdefault(l, i))
    return tuple(out)


def partition_congruences(A):
    """All congruences as normalized label tuples (least element of each block)."""
    return sorted(normalize(p) for p in set_partitions(A.size) if is_compatible(A, p))


# -- prime-type conditions evaluated directly on A ----------------------------------------

def brute_flags(A, label):
    """Prime (second form), radical and cancellative flags for the congruence ``label``."""
    r = lambda x, y: label[x] == label[y]
    m, s, z = A.mul, A.add, A.zero
    E = A.elements
    proper = len(set(label)) > 1
    prime = proper
    for a, b, c, d in product(E, repeat=4):
        L, R = s(m(a, c), m(b, d)), s(m(a, d), m(b, c))
        if r(L, R) and not (r(a, b) or r(c, d) or r(L, z) or r(R, z)):
            prime = False
            break
    if prime:
        for a, b, c in product(E, repeat=3):
            if r(m(a, c), m(b, c)) and not (r(a, b) or r(c, z)):
                prime = False
                break
    radical = all(
        not r(s(m(a, a), m(b, b)), s(m(a, b), m(b, a)))
        or r(a, b) or r(s(m(a, a), m(b, b)), z) or r(m(a, b), z)
        for a, b in product(E, repeat=2))
    cancellative = all(not r(m(a, b), m(a, c)) or r(a, z) or r(b, c)
                       for a, b, c in product(E, repeat=3))
    return {"is_prime": prime, "is_radical": radical, "is_cancellative": cancellative}


# -- polynomials over F_inf as dicts --------------------------------------------------------

def dpoly_add(p, q):
    """Sum in F_inf[x1..xn]: ``None`` is zero; any cancelling monomial zeroes everything."""
    if p is None or q is None:
        return None
    out = dict(p)
    for m, c in q.items():
        if m in out and out[m] != c:
            return None
        out[m] = c
    return out


def dpoly_mul(p, q):
    if p is None or q is None:
        return None
    out = None
    first = True
    for (m1, c1), (m2, c2) in product(p.items(), q.items()):
        t = {tuple(a + b for a, b in zip(m1, m2)): c1 * c2}
        out = t if first else dpoly_add(out, t)
        first = False
        if out is None:
            return None
    return out


def dpoly_from(p):
    """Library polynomial over F_inf to dict form (+1/-1 coefficients)."""
    if p.is_zero:
        return None
    return {m: (1 if str(c) == "1" else -1) for m, c in p.terms}


# -- orders and chains -------------------------------------------------------------------

def longest_chain_length(n, less):
    """Length (number of elements) of a longest chain, by exhaustive path search."""
    best = 0

    def dfs(i, length):
        nonlocal best
        best = max(best, length)
        for j in range(n):
            if (i, j) in less:
                dfs(j, length + 1)

    for i in range(n):
        dfs(i, 1)
    return best


def is_isomorphism(M, N, f, algebra=False):
    if sorted(f) != list(N.elements):
        return False
    for a in M.elements:
        if f[M.neg(a)] != N.neg(f[a]):
            return False
        for lam in M.units:
            if f[M.act(lam, a)] != N.act(lam, f[a]):
                return False
        for b in M.elements:
            if f[M.add(a, b)] != N.add(f[a], f[b]):
                return False
            if algebra and f[M.mul(a, b)] != N.mul(f[a], f[b]):
                return False
    return f[M.zero] == N.zero


def count_bilinear(M1, M2):
    """Maps M1 x M2 -> F_inf that are homomorphisms in each argument."""
    from finfty.scalars import FINF

    units = FINF.elements()
    tuples = list(product(M1.elements, M2.elements))
    idx = {t: i for i, t in enumerate(tuples)}
    count = 0
    vals = [None] * len(tuples)

    def consistent(k):
        a, b = tuples[k]
        v = vals[k]
        for lam in M1.units:
            j = idx[(M1.act(lam, a), b)]
            if vals[j] is not None and vals[j] != lam * v:
                return False
            j = idx[(a, M2.act(lam, b))]
            if vals[j] is not None and vals[j] != lam * v:
                return False
        for c in M1.elements:
            s, o = idx[(M1.add(a, c), b)], idx[(c, b)]
            if vals[s] is not None and vals[o] is not None and vals[s] != v + vals[o]:
                return False
        for c in M2.elements:
            s, o = idx[(a, M2.add(b, c))], idx[(a, c)]
            if vals[s] is not None and vals[o] is not None and vals[s] != v + vals[o]:
                return False
        # constraints where this value is the sum
        for c in M1.elements:
            for d in M1.elements:
                if M1.add(c, d) == a:
                    x, y = vals[idx[(c, b)]], vals[idx[(d, b)]]
                    if x is not None and y is not None and x + y != v:
                        return False
        for c in M2.elements:
            for d in M2.elements:
                if M2.add(c, d) == b:
                    x, y = vals[idx[(a, c)]], vals[idx[(a, d)]]
                    if x is not None and y is not None and x + y != v:
                        return False
        return True

    def rec(k):
        nonlocal count
        if k == len(tuples):
            count += 1
            return
        a, b = tuples[k]
        choices = [FINF.zero] if (a == M1.zero or b == M2.zero) else units
        for v in choices:
            vals[k] = v
            if consistent(k):
                rec(k + 1)
            vals[k] = None

    rec(0)
    return count
