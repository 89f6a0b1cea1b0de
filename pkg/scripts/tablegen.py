"""Character-table generation for the bundled fixtures.

Builds ordinary tables with Dixon's modular method from explicit group
generators, Brauer tables by chopping GF(p)-modules with a small MeatAxe and
lifting eigenvalues, and defect-1 block data from the resulting decomposition
matrices.  Everything here is offline tooling: the engine only reads the JSON
tables this produces.

Requires numpy, scipy and sympy.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from sympy import isprime, primitive_root
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor_sqf, gf_irreducible_p

from helpcore.cyclo import CycNum, divisors, factorize, lcm


# ---------------------------------------------------------------------------
# groups given by generators


class PermOps:
    """Permutations as image arrays; (a*b)(x) = b(a(x))."""

    def __init__(self, degree: int):
        self.degree = degree
        self.width = degree

    def identity(self):
        return np.arange(self.degree, dtype=np.int64)

    def mul(self, a, b):
        return np.take_along_axis(b, a, axis=1)

    def matrix(self, elem, p):
        m = np.zeros((self.degree, self.degree), dtype=np.int64)
        m[np.arange(self.degree), elem] = 1
        return m


class MatOps:
    """d x d matrices over GF(q), q prime, stored flattened."""

    def __init__(self, d: int, q: int):
        self.d = d
        self.q = q
        self.width = d * d

    def identity(self):
        return np.eye(self.d, dtype=np.int64).reshape(-1)

    def mul(self, a, b):
        d = self.d
        prod = np.einsum("nij,njk->nik", a.reshape(-1, d, d), b.reshape(-1, d, d)) % self.q
        return prod.reshape(-1, d * d)

    def matrix(self, elem, p):
        if p != self.q:
            raise ValueError("matrix group elements only reduce in their own characteristic")
        return elem.reshape(self.d, self.d) % p


class ElementIndex:
    """Exact lookup of group elements via a random 64-bit projection."""

    def __init__(self, elems: np.ndarray, seed: int = 1):
        rng = np.random.default_rng(seed)
        self.R = rng.integers(1, 2**63, size=elems.shape[1], dtype=np.uint64) | np.uint64(1)
        self.elems = elems
        h = self.hash(elems)
        self.order = np.argsort(h, kind="stable")
        self.sorted = h[self.order]
        if np.any(self.sorted[1:] == self.sorted[:-1]):
            raise RuntimeError("hash collision between distinct elements")

    def hash(self, rows):
        with np.errstate(over="ignore"):
            return (rows.astype(np.uint64) * self.R).sum(axis=1, dtype=np.uint64)

    def lookup(self, rows):
        h = self.hash(rows)
        pos = np.searchsorted(self.sorted, h)
        pos = np.minimum(pos, len(self.sorted) - 1)
        idx = self.order[pos]
        if not np.array_equal(self.elems[idx], rows):
            raise KeyError("element not in group")
        return idx


@dataclass
class Group:
    ops: object
    gens: list
    elems: np.ndarray = None
    parent: np.ndarray = None
    via: np.ndarray = None
    index: ElementIndex = None
    order_of: np.ndarray = None
    inverse: np.ndarray = None
    cls: np.ndarray = None
    classes: list = field(default_factory=list)

    @property
    def size(self):
        return len(self.elems)

    def enumerate(self, limit: int = 10**6):
        ident = self.ops.identity()[None, :]
        gens = np.array(self.gens, dtype=np.int64)
        seen = {}
        elems = [ident[0]]
        parent, via = [-1], [-1]
        seen[ident[0].tobytes()] = 0
        frontier = np.array([0])
        store = ident.copy()
        while len(frontier):
            new_idx = []
            batch = store[frontier]
            for gi in range(len(gens)):
                prods = self.ops.mul(batch, np.repeat(gens[gi][None, :], len(batch), axis=0))
                for src, row in zip(frontier, prods):
                    key = row.tobytes()
                    if key not in seen:
                        seen[key] = len(elems)
                        elems.append(row)
                        parent.append(src)
                        via.append(gi)
                        new_idx.append(len(elems) - 1)
                if len(elems) > limit:
                    raise RuntimeError("group too large")
            store = np.array(elems)
            frontier = np.array(new_idx, dtype=np.int64)
        self.elems = np.array(elems, dtype=np.int64)
        self.parent = np.array(parent)
        self.via = np.array(via)
        self.index = ElementIndex(self.elems)
        self._orders_and_inverses()
        self._classes()
        return self

    def _orders_and_inverses(self):
        n = self.size
        ident = self.ops.identity()
        order = np.zeros(n, dtype=np.int64)
        inv = np.full(n, -1, dtype=np.int64)
        power = self.elems.copy()
        prev = None
        k = 1
        while (order == 0).any():
            is_id = (power == ident).all(axis=1) & (order == 0)
            order[is_id] = k
            k += 1
            power = self.ops.mul(power, self.elems)
            if k > 10**4:
                raise RuntimeError("element order too large")
        # g^-1 = g^(o-1)
        power = self.ops.mul(self.elems, np.repeat(ident[None, :], n, axis=0))
        inv[order == 1] = np.nonzero(order == 1)[0]
        for k in range(1, order.max()):
            mask = order == k + 1
            if mask.any():
                inv[mask] = self.index.lookup(power[mask])
            power = self.ops.mul(power, self.elems)
        self.order_of = order
        self.inverse = inv

    def _classes(self):
        n = self.size
        rows, cols = [], []
        for g in self.gens:
            g = np.asarray(g, dtype=np.int64)[None, :]
            ginv = self.elems[self.index.lookup(g)[0]]
            ginv = self.elems[self.inverse[self.index.lookup(g)[0]]][None, :]
            conj = self.ops.mul(self.ops.mul(np.repeat(ginv, n, axis=0), self.elems), np.repeat(g, n, axis=0))
            rows.append(np.arange(n))
            cols.append(self.index.lookup(conj))
        graph = coo_matrix((np.ones(sum(len(r) for r in rows)), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
        _, labels = connected_components(graph, directed=True, connection="weak")
        self.cls = labels

    def word(self, idx: int) -> list[int]:
        out = []
        while self.parent[idx] >= 0:
            out.append(int(self.via[idx]))
            idx = int(self.parent[idx])
        return out[::-1]

    def power_index(self, idx: int, k: int) -> int:
        row = self.ops.identity()[None, :]
        g = self.elems[idx][None, :]
        for _ in range(k % int(self.order_of[idx])):
            row = self.ops.mul(row, g)
        return int(self.index.lookup(row)[0])


def perm_from_cycles(degree: int, cycles) -> np.ndarray:
    img = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a - 1] = b - 1
    return np.array(img, dtype=np.int64)


def alternating_group(n: int) -> Group:
    three = perm_from_cycles(n, [[1, 2, 3]])
    long = perm_from_cycles(n, [list(range(1, n + 1))] if n % 2 else [list(range(2, n + 1))])
    return Group(PermOps(n), [three, long]).enumerate()


# ---------------------------------------------------------------------------
# class data


@dataclass
class ClassData:
    reps: list[int]
    sizes: list[int]
    orders: list[int]
    names: list[str]
    power: dict  # (class, k) -> class
    inverse: list[int]


def class_data(G: Group, prefer=None) -> ClassData:
    """Order classes by element order, then size, then the `prefer` hints.

    `prefer` maps an element order to a list of element indices; a class
    containing an earlier hint sorts first among classes of that order and size.
    """
    prefer = prefer or {}
    labels = G.cls
    raw = sorted(set(labels.tolist()))
    rep_of = {c: int(np.nonzero(labels == c)[0][0]) for c in raw}
    size_of = {c: int((labels == c).sum()) for c in raw}
    ord_of = {c: int(G.order_of[rep_of[c]]) for c in raw}

    def hint_rank(c):
        hints = prefer.get(ord_of[c], [])
        for pos, h in enumerate(hints):
            if labels[h] == c:
                return pos
        return len(hints)

    groups: dict[tuple[int, int], list[int]] = {}
    for c in raw:
        groups.setdefault((ord_of[c], size_of[c]), []).append(c)
    ordered = []
    for key in sorted(groups):
        members = sorted(groups[key], key=lambda c: (hint_rank(c), rep_of[c]))
        # algebraic conjugates follow their leader ordered by the power exponent
        out = []
        while members:
            lead = members.pop(0)
            out.append(lead)
            o = ord_of[lead]
            for k in range(2, o):
                if gcd(k, o) != 1:
                    continue
                c = labels[G.power_index(rep_of[lead], k)]
                if c in members:
                    members.remove(c)
                    out.append(c)
        ordered.extend(out)
    pos = {c: i for i, c in enumerate(ordered)}
    reps = [rep_of[c] for c in ordered]
    names = []
    count: dict[int, int] = {}
    for c in ordered:
        o = ord_of[c]
        names.append(f"{o}{chr(ord('a') + count.get(o, 0))}")
        count[o] = count.get(o, 0) + 1
    power = {}
    for i, r in enumerate(reps):
        o = ord_of[ordered[i]]
        for k in range(o):
            power[(i, k)] = pos[labels[G.power_index(r, k)]]
    inverse = [pos[labels[G.inverse[r]]] for r in reps]
    return ClassData(reps, [size_of[c] for c in ordered], [ord_of[c] for c in ordered], names, power, inverse)


def class_power(cd: ClassData, i: int, k: int) -> int:
    return cd.power[(i, k % cd.orders[i])]


def class_coefficients(G: Group, cd: ClassData) -> np.ndarray:
    """c[i, j, k] = #{x in C_i : x^-1 z_k in C_j} for a fixed z_k in C_k."""
    r = len(cd.reps)
    pos = {int(G.cls[rep]): i for i, rep in enumerate(cd.reps)}
    cls_pos = np.array([pos[int(c)] for c in G.cls])
    inv_elems = G.elems[G.inverse]
    c = np.zeros((r, r, r), dtype=np.int64)
    for k, rep in enumerate(cd.reps):
        z = np.repeat(G.elems[rep][None, :], G.size, axis=0)
        y = G.index.lookup(G.ops.mul(inv_elems, z))
        np.add.at(c[:, :, k], (cls_pos, cls_pos[y]), 1)
    return c


# ---------------------------------------------------------------------------
# linear algebra mod a prime


def rref_mod(M, p):
    M = np.array(M, dtype=np.int64) % p
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        M[r] = (M[r] * pow(int(M[r, c]), -1, p)) % p
        others = np.nonzero(M[:, c])[0]
        others = others[others != r]
        if len(others):
            M[others] = (M[others] - np.outer(M[others, c], M[r])) % p
        pivots.append(c)
        r += 1
    return M[:r], pivots


def right_nullspace_mod(M, p):
    """Basis (as rows) of {x : M x = 0}."""
    M = np.array(M, dtype=np.int64) % p
    n = M.shape[1]
    R, piv = rref_mod(M, p)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = (-R[i, f]) % p
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), n)


def left_nullspace_mod(M, p):
    return right_nullspace_mod(np.asarray(M).T, p)


def inverse_mod(M, p):
    n = M.shape[0]
    R, piv = rref_mod(np.hstack([M % p, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)):
        raise ArithmeticError("singular matrix")
    return R[:, n:]


def poly_eval_matrix(coeffs, A, p):
    """coeffs highest degree first."""
    n = A.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    for c in coeffs:
        out = (out @ A + int(c) * np.eye(n, dtype=np.int64)) % p
    return out


def charpoly_mod(A, p):
    """Characteristic polynomial (highest first) via Hessenberg reduction."""
    H = [[int(x) % p for x in row] for row in A]
    n = len(H)
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if H[i][m - 1]), None)
        if piv is None:
            continue
        if piv != m:
            H[m], H[piv] = H[piv], H[m]
            for row in H:
                row[m], row[piv] = row[piv], row[m]
        inv = pow(H[m][m - 1], -1, p)
        for i in range(m + 1, n):
            u = H[i][m - 1] * inv % p
            if u:
                H[i] = [(a - u * b) % p for a, b in zip(H[i], H[m])]
                for row in H:
                    row[m] = (row[m] + u * row[i]) % p
    # recurrence on leading principal submatrices
    polys = [[1]]
    for k in range(1, n + 1):
        # p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_{ik} * prod h_{j,j-1} * p_{i-1}
        prev = polys[-1]
        cur = [0] + prev
        cur = [(a - H[k - 1][k - 1] * b) % p for a, b in zip(cur, prev + [0])]
        t = 1
        for i in range(k - 1, 0, -1):
            t = t * H[i][i - 1] % p
            coef = H[i - 1][k - 1] * t % p
            if coef:
                q = polys[i - 1]
                q = q + [0] * (len(cur) - len(q))
                cur = [(a - coef * b) % p for a, b in zip(cur, q)]
        polys.append(cur)
    low_first = polys[-1]
    return [int(c) for c in reversed(low_first)]


def irreducible_factors(poly_high_first, p):
    """Distinct monic irreducible factors over GF(p), lowest degree first."""
    f = [int(c) % p for c in poly_high_first]
    facs = set()
    from sympy.polys.galoistools import gf_sqf_list

    _, sqf = gf_sqf_list(f, p, ZZ)
    for g, _ in sqf:
        for h in gf_factor_sqf(g, p, ZZ)[1]:
            facs.add(tuple(int(c) for c in h))
    return sorted(facs, key=lambda h: (len(h), h))


# ---------------------------------------------------------------------------
# MeatAxe over GF(p) (row vectors, right action)


def spin(vectors, gens, p, record=False):
    """Echelon basis of the submodule generated by `vectors`."""
    d = gens[0].shape[0]
    basis: list[np.ndarray] = []  # reduced rows
    pivots: list[int] = []
    raw: list[np.ndarray] = []
    trail: list[tuple[int, int]] = []

    def reduce(v):
        v = v % p
        for b, c in zip(basis, pivots):
            if v[c]:
                v = (v - v[c] * b) % p
        return v

    def add(v, origin):
        w = reduce(v)
        nz = np.nonzero(w)[0]
        if len(nz) == 0:
            return False
        c = nz[0]
        w = (w * pow(int(w[c]), -1, p)) % p
        basis.append(w)
        pivots.append(c)
        raw.append(v % p)
        trail.append(origin)
        return True

    for v in vectors:
        add(np.asarray(v, dtype=np.int64), (-1, -1))
    i = 0
    while i < len(raw) and len(raw) < d:
        for gi, g in enumerate(gens):
            add(raw[i] @ g % p, (i, gi))
            if len(raw) == d:
                break
        i += 1
    if record:
        return np.array(raw), trail
    R, _ = rref_mod(np.array(basis), p) if basis else (np.zeros((0, d), dtype=np.int64), [])
    return R


def split_module(gens, W, p):
    """Action on a submodule (rows of W, echelon) and on the quotient."""
    d = gens[0].shape[0]
    s = W.shape[0]
    _, piv = rref_mod(W, p)
    comp = [c for c in range(d) if c not in piv]
    T = np.vstack([W, np.eye(d, dtype=np.int64)[comp]])
    Ti = inverse_mod(T, p)
    sub, quo = [], []
    for g in gens:
        N = (T @ g % p) @ Ti % p
        sub.append(N[:s, :s].copy())
        quo.append(N[s:, s:].copy())
    return sub, quo


def random_algebra_element(gens, p, rng):
    d = gens[0].shape[0]
    words = list(gens)
    for _ in range(3):
        a, b = rng.choice(words), rng.choice(words)
        words.append(a @ b % p)
    out = np.zeros((d, d), dtype=np.int64)
    for w in words:
        out = (out + rng.randrange(p) * w) % p
    return out


@dataclass
class IrreducibleModule:
    gens: list
    p: int
    endo_dim: int
    endo: np.ndarray | None  # generator of End as a field when endo_dim > 1

    @property
    def dim(self):
        return self.gens[0].shape[0]


def _endomorphisms(gens, v, N, p):
    """Basis of End_G(M) given v in ker f(a) and N = ker f(a) (rows)."""
    B, trail = spin([v], gens, p, record=True)
    d = B.shape[0]
    Binv = inverse_mod(B, p)
    homs = []
    for w in N:
        images = [w % p]
        for src, gi in trail[1:]:
            images.append(images[src] @ gens[gi] % p)
        Phi = np.array(images)
        homs.append(Binv @ Phi % p)
    # linear combinations commuting with every generator
    rows = []
    for H in homs:
        rows.append(np.concatenate([((H @ g - g @ H) % p).reshape(-1) for g in gens]))
    coeffs = left_nullspace_mod(np.array(rows), p)
    return [sum(int(c) * H for c, H in zip(vec, homs)) % p for vec in coeffs]


def _min_poly_degree(E, p):
    d = E.shape[0]
    v = np.zeros(d, dtype=np.int64)
    v[0] = 1
    powers = [np.eye(d, dtype=np.int64).reshape(-1)]
    P = np.eye(d, dtype=np.int64)
    while True:
        P = P @ E % p
        stack = np.array(powers + [P.reshape(-1)])
        _, piv = rref_mod(stack.T, p)
        if len(piv) < len(stack):
            return len(powers)
        powers.append(P.reshape(-1))


def meataxe_chop(gens, p, rng, depth=0):
    """Composition factors of the module given by `gens` (list of IrreducibleModule)."""
    d = gens[0].shape[0]
    if d == 1:
        return [IrreducibleModule(gens, p, 1, None)]
    for _attempt in range(200):
        a = random_algebra_element(gens, p, rng)
        cp = charpoly_mod(a, p)
        for f in irreducible_factors(cp, p):
            A = poly_eval_matrix(f, a, p)
            N = left_nullspace_mod(A, p)
            if len(N) == 0:
                continue
            S = spin([N[0]], gens, p)
            if S.shape[0] < d:
                sub, quo = split_module(gens, S, p)
                return meataxe_chop(sub, p, rng, depth + 1) + meataxe_chop(quo, p, rng, depth + 1)
            if len(N) != len(f) - 1:
                continue
            NT = right_nullspace_mod(A, p)
            tg = [g.T.copy() for g in gens]
            S2 = spin([NT[0]], tg, p)
            if S2.shape[0] < d:
                U = right_nullspace_mod(S2, p)
                U, _ = rref_mod(U, p)
                sub, quo = split_module(gens, U, p)
                return meataxe_chop(sub, p, rng, depth + 1) + meataxe_chop(quo, p, rng, depth + 1)
            endo = _endomorphisms(gens, N[0], N, p)
            k = len(endo)
            gen = None
            if k > 1:
                for _ in range(50):
                    cand = sum(rng.randrange(p) * E for E in endo) % p
                    if _min_poly_degree(cand, p) == k:
                        gen = cand
                        break
                if gen is None:
                    raise RuntimeError("no field generator for endomorphism ring")
            return [IrreducibleModule(gens, p, k, gen)]
    raise RuntimeError("MeatAxe failed to decide irreducibility")


# ---------------------------------------------------------------------------
# extension fields GF(p^s) for eigenvalue lifting (log representation)


class ExtField:
    """GF(p^s) with elements encoded as 0 (zero) or 1 + log_w(x)."""

    def __init__(self, p: int, s: int):
        self.p, self.s = p, s
        self.q = p**s
        poly = self._primitive_poly()
        q1 = self.q - 1
        exp_poly = [0] * q1
        log_of = {}
        cur = [1] + [0] * (s - 1)  # polynomial coefficients, low first
        for i in range(q1):
            code = self._encode(cur)
            exp_poly[i] = code
            log_of[code] = i
            # multiply by x
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(c - top * m) % p for c, m in zip(cur, poly[:-1])]
        if len(log_of) != q1:
            raise RuntimeError("polynomial is not primitive")
        self.exp_poly = exp_poly
        self.log_of = log_of
        zech = [-1] * q1
        for n in range(q1):
            digits = self._decode(exp_poly[n])
            digits[0] = (digits[0] + 1) % p
            code = self._encode(digits)
            zech[n] = log_of[code] if code else -1
        self.zech = zech

    def _encode(self, coeffs):
        out = 0
        for c in reversed(coeffs):
            out = out * self.p + c
        return out

    def _decode(self, code):
        out = []
        for _ in range(self.s):
            out.append(code % self.p)
            code //= self.p
        return out

    def _primitive_poly(self):
        p, s = self.p, self.s
        q1 = p**s - 1
        prime_factors = [r for r, _ in factorize(q1)]
        rng = random.Random(7)
        while True:
            f = gf_irreducible_p  # noqa: F841  (imported for the irreducibility check)
            coeffs = [1] + [rng.randrange(p) for _ in range(s)]  # high first, monic
            if coeffs[-1] == 0:
                continue
            if not gf_irreducible_p(coeffs, p, ZZ):
                continue
            # x must have order q-1 modulo f
            low = list(reversed(coeffs))  # low first, monic leading
            if all(self._xpow_is_one(low, q1 // r) is False for r in prime_factors):
                return low

    def _xpow_is_one(self, low, e):
        p, s = self.p, self.s

        def mulmod(a, b):
            prod = [0] * (2 * s - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        prod[i + j] = (prod[i + j] + x * y) % p
            for k in range(len(prod) - 1, s - 1, -1):
                c = prod[k]
                if c:
                    for i in range(s + 1):
                        prod[k - s + i] = (prod[k - s + i] - c * low[i]) % p
            return prod[:s]

        result = [1] + [0] * (s - 1)
        base = [0, 1] + [0] * (s - 2) if s > 1 else [0]
        if s == 1:
            base = [(-low[0]) % p]
        while e:
            if e & 1:
                result = mulmod(result, base)
            base = mulmod(base, base)
            e >>= 1
        return result == [1] + [0] * (s - 1)

    # element operations ---------------------------------------------------

    def from_int(self, c):
        c %= self.p
        return 0 if c == 0 else 1 + self.log_of[c]

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return (a + b - 2) % (self.q - 1) + 1

    def inv(self, a):
        return (-(a - 1)) % (self.q - 1) + 1

    def add(self, a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        z = self.zech[(b - a) % (self.q - 1)]
        if z < 0:
            return 0
        return (a - 1 + z) % (self.q - 1) + 1

    def neg(self, a):
        if a == 0 or self.p == 2:
            return a
        return (a - 1 + (self.q - 1) // 2) % (self.q - 1) + 1

    def root_of_unity(self, o, t):
        """w^((q-1)/o * t) in encoded form."""
        return ((self.q - 1) // o * t) % (self.q - 1) + 1

    def nullity(self, rows):
        """Nullity of a matrix given as a list of encoded rows."""
        M = [list(r) for r in rows]
        ncols = len(M[0])
        rank = 0
        for c in range(ncols):
            piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
            if piv is None:
                continue
            M[rank], M[piv] = M[piv], M[rank]
            inv = self.inv(M[rank][c])
            M[rank] = [self.mul(inv, x) for x in M[rank]]
            for i in range(len(M)):
                if i != rank and M[i][c]:
                    f = self.neg(M[i][c])
                    M[i] = [self.add(x, self.mul(f, y)) for x, y in zip(M[i], M[rank])]
            rank += 1
        return ncols - rank

    def poly_roots_in_subfield(self, low_first, k):
        """Roots of a GF(p) polynomial lying in GF(p^k) (subfield of self)."""
        step = (self.q - 1) // (self.p**k - 1)
        roots = []
        for i in range(self.p**k - 1):
            x = 1 + (i * step) % (self.q - 1)
            acc = 0
            for c in reversed(low_first):
                acc = self.add(self.mul(acc, x), self.from_int(c))
            if acc == 0:
                roots.append(x)
        return roots


def splitting_degree(p: int, orders) -> int:
    m = 1
    for o in orders:
        o_p = o
        while o_p % p == 0:
            o_p //= p
        m = lcm(m, o_p)
    s = 1
    while (p**s - 1) % m:
        s += 1
    return s


def brauer_character(mod: IrreducibleModule, class_mats, class_orders, F: ExtField):
    """Brauer character values (CycNum) of one absolutely irreducible constituent."""
    p = mod.p
    k = mod.endo_dim
    d = mod.dim
    extra = []
    theta = None
    if k > 1:
        # minimal polynomial of the endomorphism generator, then one of its roots
        E = mod.endo
        cp = charpoly_mod(E, p)
        facs = irreducible_factors(cp, p)
        (h,) = [f for f in facs if len(f) - 1 == k]
        if (F.s % k) != 0:
            raise RuntimeError("extension field too small for the endomorphism ring")
        theta = min(F.poly_roots_in_subfield(list(reversed(h)), k))
        neg_theta = F.neg(theta)
        extra = [[F.add(F.from_int(int(E[i, j])), neg_theta if i == j else 0) for j in range(d)] for i in range(d)]
    values = []
    for g, o in zip(class_mats, class_orders):
        gf = [[F.from_int(int(x)) for x in row] for row in g]
        mult = {}
        for t in range(o):
            lam = F.neg(F.root_of_unity(o, t))
            rows = [[F.add(x, lam) if i == j else x for j, x in enumerate(row)] for i, row in enumerate(gf)]
            # rows act on row vectors: v (g - lam) = 0  <=>  (g - lam)^T v^T = 0
            rows_t = [list(col) for col in zip(*rows)]
            if extra:
                rows_t = rows_t + [list(col) for col in zip(*extra)]
            m = F.nullity(rows_t)
            if m:
                mult[t] = m
        if sum(mult.values()) != d // k:
            raise RuntimeError("eigenvalue multiplicities do not add up")
        values.append(CycNum(o, mult))
    return values


# ---------------------------------------------------------------------------
# Dixon's method for the ordinary table


def dixon_table(G: Group, cd: ClassData, coeffs: np.ndarray):
    r = len(cd.reps)
    order = G.size
    exponent = 1
    for o in cd.orders:
        exponent = lcm(exponent, o)
    q = exponent + 1
    bound = 2 * isqrt(order) + 2
    while not (isprime(q) and q > bound and order % q):
        q += exponent
    rng = random.Random(11)
    xs = np.arange(q, dtype=np.int64)
    for _attempt in range(50):
        A = np.zeros((r, r), dtype=object)
        for i in range(r):
            A = A + rng.randrange(1, q) * coeffs[i].astype(object)
        A = np.array(A % q, dtype=np.int64)
        acc = np.zeros(q, dtype=np.int64)
        for c in charpoly_mod(A, q):
            acc = (acc * xs + c) % q
        eigen = np.nonzero(acc == 0)[0]
        if len(eigen) == r:
            break
    else:
        raise RuntimeError(f"Dixon split failed (q={q})")
    root = primitive_root(q)
    chars = []
    for lam in eigen:
        N = right_nullspace_mod((A - lam * np.eye(r, dtype=np.int64)) % q, q)
        if len(N) != 1:
            raise RuntimeError("eigenspace is not one-dimensional")
        w = N[0].astype(object)
        w = [int(x) * pow(int(w[0]), -1, q) % q for x in w]
        s = sum(w[k] * w[cd.inverse[k]] * pow(cd.sizes[k], -1, q) for k in range(r)) % q
        d2 = order * pow(s, -1, q) % q
        deg = next(dd for dd in range(1, isqrt(order) + 1) if dd * dd % q == d2)
        vals_mod = [deg * w[k] * pow(cd.sizes[k], -1, q) % q for k in range(r)]
        row = []
        for k in range(r):
            o = cd.orders[k]
            z = pow(root, (q - 1) // o, q)
            terms = {}
            for t in range(o):
                m = sum(vals_mod[class_power(cd, k, j)] * pow(z, (-j * t) % (q - 1), q) for j in range(o))
                m = m * pow(o, -1, q) % q
                if m > deg:
                    raise RuntimeError("multiplicity lift out of range")
                if m:
                    terms[t] = m
            row.append(CycNum(o, terms))
        chars.append(row)
    return chars


# ---------------------------------------------------------------------------
# checks and derived data


def inner(cd: ClassData, a, b, order, classes=None):
    classes = range(len(cd.reps)) if classes is None else classes
    tot = CycNum.rational(0)
    for k in classes:
        tot = tot + a[k] * b[k].conj() * cd.sizes[k]
    return tot / order


def check_orthogonality(cd, chars, order):
    for i, a in enumerate(chars):
        for j, b in enumerate(chars):
            val = inner(cd, a, b, order)
            if val != (1 if i == j else 0):
                raise AssertionError(f"orthogonality fails for ({i}, {j}): {val}")


def solve_rational(rows, rhs):
    """Solve x * rows = rhs exactly (rows: list of Fraction vectors)."""
    m = len(rows)
    n = len(rows[0])
    # augmented system on columns: rows^T x = rhs
    M = [[Fraction(rows[i][j]) for i in range(m)] + [Fraction(rhs[j])] for j in range(n)]
    piv_cols = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(n):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, n):
        if M[i][-1] != 0:
            raise ArithmeticError("inconsistent system")
    x = [Fraction(0)] * m
    for i, c in enumerate(piv_cols):
        x[c] = M[i][-1]
    return x


def flatten(values, conductor):
    out = []
    for v in values:
        e = v.embed(conductor)
        out.extend(e.coeffs)
    return out


def decomposition_matrix(ordinary, brauer, regular):
    cond = 1
    for row in ordinary:
        for k in regular:
            cond = lcm(cond, row[k].n)
    for row in brauer:
        for v in row:
            cond = lcm(cond, v.n)
    basis = [flatten([row[i] for i in range(len(regular))], cond) for row in brauer]
    D = []
    for chi in ordinary:
        target = flatten([chi[k] for k in regular], cond)
        x = solve_rational(basis, target)
        if any(v.denominator != 1 or v < 0 for v in x):
            raise AssertionError(f"restriction is not a non-negative combination: {x}")
        D.append([int(v) for v in x])
    return D


def defect_one_blocks(cd, ordinary, D, p, group_order):
    """Brauer trees of the defect-1 blocks of an odd prime."""
    nb = len(D[0])
    # connected components of the character/Brauer incidence graph
    parent = list(range(len(ordinary)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for j in range(nb):
        rows = [i for i in range(len(D)) if D[i][j]]
        for a in rows[1:]:
            parent[find(a)] = find(rows[0])
    comps: dict[int, list[int]] = {}
    for i in range(len(ordinary)):
        comps.setdefault(find(i), []).append(i)
    ppart = 1
    while group_order % (ppart * p) == 0:
        ppart *= p
    out = []
    for members in comps.values():
        members.sort()
        min_pp = min(_ppart(int(ordinary[i][0].as_rational()), p) for i in members)
        defect = ppart // min_pp
        if defect != p:
            continue
        cols = [j for j in range(nb) if any(D[i][j] for i in members)]
        # exceptional characters share the same decomposition row
        by_row: dict[tuple, list[int]] = {}
        for i in members:
            by_row.setdefault(tuple(D[i][j] for j in cols), []).append(i)
        vertices = []
        exceptional = []
        for row, chars in by_row.items():
            if len(chars) > 1:
                exceptional = chars
            vertices.append(tuple(chars))
        adj = {v: [] for v in vertices}
        for j in cols:
            ends = [v for v in vertices if D[v[0]][j]]
            if len(ends) != 2 or any(D[v[0]][j] != 1 for v in ends):
                raise AssertionError("not a Brauer tree")
            a, b = ends
            adj[a].append(b)
            adj[b].append(a)
        out.append({"prime": p, "vertices": vertices, "adjacency": adj, "exceptional": exceptional})
    return out


def _ppart(n, p):
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def tree_block_data(tree):
    """One BlockData-style record per non-exceptional leaf of a Brauer tree."""
    adj = tree["adjacency"]
    exc = tuple(tree["exceptional"])
    records = []
    for leaf in adj:
        if len(adj[leaf]) != 1 or leaf == exc:
            continue
        sign = {leaf: 1}
        stack = [leaf]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in sign:
                    sign[w] = -sign[v]
                    stack.append(w)
        if exc:
            exc_vertex = exc
            t = len(exc)
        else:
            # no exceptional vertex: designate the vertex farthest from the leaf
            exc_vertex = _farthest(adj, leaf)
            t = 1
        non_exc = [leaf] + sorted((v for v in adj if v not in (leaf, exc_vertex)), key=lambda v: v[0])
        records.append(
            {
                "prime": tree["prime"],
                "non_exceptional": [v[0] + 1 for v in non_exc],
                "signs": [sign[v] for v in non_exc],
                "exceptional": [i + 1 for i in exc_vertex],
                "exceptional_sign": sign[exc_vertex],
                "multiplicity": t,
            }
        )
    return records


def _farthest(adj, start):
    dist = {start: 0}
    order = [start]
    for v in order:
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                order.append(w)
    return order[-1]
