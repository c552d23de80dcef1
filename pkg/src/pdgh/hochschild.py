"""Koszul model for relative Hochschild homology of graph bimodules.

The symmetric algebra on an alphabet of size k has a small bimodule
resolution: the algebra on a left and a right copy of the alphabet,
tensored with an exterior algebra on generators de_1 .. de_k, where de_i
has internal degree 4i and Hochschild degree 1.  The Koszul differential
contracts de_i against the difference of the two copies of e_i; tensors of
alphabets multiply these resolutions with the usual sign rule.  Two more
operators ride along: the lift of the derivation sending e_i to
e_1 e_i - (i+1) e_{i+1}, acting on both polynomial slots and reshuffling
wedge factors, and the Cautis operator, which contracts a wedge factor
against the left copy of that same element.

Tensoring the resolution with a graph bimodule whose bottom and top carry
the same colors closes the graph up; each (Hochschild degree, internal
degree) slice is a finite integer matrix problem, so the homology groups
come out exact, together with the maps the two extra operators induce.
"""

from itertools import combinations

from .abgrp import FPAbGroup, IntMatrix, induced_map, subquotient
from .symfunc import PolyRing, derive
from .moy import realize


def _insert(w, n):
    """Wedge n onto the front of ascending w: (sorted tuple, sign).

    Returns (None, 0) when n already occurs.
    """
    if n in w:
        return None, 0
    k = 0
    while k < len(w) and w[k] < n:
        k += 1
    return w[:k] + (n,) + w[k:], (-1 if k % 2 else 1)


def _sort_wedge(w):
    # build from the right so each factor is wedged onto the front
    out, sgn = (), 1
    for n in reversed(w):
        out, sg = _insert(out, n)
        if out is None:
            return None, 0
        sgn *= sg
    return out, sgn


def _accum(out, w, p):
    if not p:
        return
    q = out.get(w)
    q = p if q is None else q + p
    if q:
        out[w] = q
    else:
        del out[w]


class KoszulComplex:
    """Bimodule Koszul resolution of a tensor of symmetric algebras.

    Elements are dicts mapping ascending tuples of exterior generator
    positions to polynomials in the doubled ring; operators return fresh
    dicts with zero coefficients pruned, so equality is dict comparison.
    Generator positions run alphabet-major: position n stands for de_i of
    alphabet s where gens[n] == (s, i).
    """

    def __init__(self, sizes):
        self.sizes = tuple(int(k) for k in sizes)
        if not self.sizes or min(self.sizes) < 1:
            raise ValueError("alphabet sizes must be positive")
        names = [("l%d" % s, k) for s, k in enumerate(self.sizes)]
        names += [("r%d" % s, k) for s, k in enumerate(self.sizes)]
        self.ring = PolyRing(names)
        self.gens = tuple((s, i) for s, k in enumerate(self.sizes)
                          for i in range(1, k + 1))
        self.npos = {g: n for n, g in enumerate(self.gens)}

    # -- ring elements -----------------------------------------------------

    def left(self, s, i):
        return self.ring.e("l%d" % s, i)

    def right(self, s, i):
        return self.ring.e("r%d" % s, i)

    def one(self):
        return {(): self.ring.one()}

    def element(self, wedge, poly=None):
        """Single term with the wedge sorted into ascending order."""
        w, sgn = _sort_wedge(tuple(wedge))
        if w is None:
            return {}
        p = self.ring.one() if poly is None else poly
        if sgn < 0:
            p = -p
        return {w: p} if p else {}

    def add(self, a, b):
        out = dict(a)
        for w, p in b.items():
            _accum(out, w, p)
        return out

    def scale(self, elt, c):
        out = {}
        for w, p in elt.items():
            _accum(out, w, p * c)
        return out

    def wedge_degree2(self, w):
        return sum(4 * self.gens[n][1] for n in w)

    def degree2(self, elt):
        """Total internal degree, or None for zero; raises if mixed."""
        degs = set()
        for w, p in elt.items():
            for m in p.terms:
                degs.add(self.wedge_degree2(w) + self.ring.mono_degree(m))
        if len(degs) > 1:
            raise ValueError("element is not homogeneous")
        return degs.pop() if degs else None

    # -- operators ---------------------------------------------------------

    def d_K(self, elt):
        """Koszul differential: Hochschild degree -1, internal degree 0."""
        out = {}
        for w, p in elt.items():
            for j, n in enumerate(w):
                s, i = self.gens[n]
                q = (self.left(s, i) - self.right(s, i)) * p
                _accum(out, w[:j] + w[j + 1:], -q if j % 2 else q)
        return out

    def del_K(self, elt):
        """Lift of the derivation: Hochschild degree 0, internal degree +4.

        Polynomial slots are derived; each wedge factor de_i contributes a
        relabeling to de_{i+1}, a left e_1 multiple, and an e_1 wedge with
        the right copy of e_i as coefficient.
        """
        out = {}
        for w, p in elt.items():
            _accum(out, w, derive(p))
            for j, n in enumerate(w):
                s, i = self.gens[n]
                rest = w[:j] + w[j + 1:]
                n2 = self.npos.get((s, i + 1))
                if n2 is not None:
                    wt, sg = _insert(rest, n2)
                    if wt is not None:
                        c = (i + 1) * sg * (1 if j % 2 else -1)
                        _accum(out, wt, p * c)
                _accum(out, w, self.left(s, 1) * p)
                wt, sg = _insert(rest, self.npos[(s, 1)])
                if wt is not None:
                    c = sg * (-1 if j % 2 else 1)
                    _accum(out, wt, p * self.right(s, i) * c)
        return out

    def d_C(self, elt):
        """Cautis operator: Hochschild degree -1, internal degree +4."""
        out = {}
        for w, p in elt.items():
            for j, n in enumerate(w):
                s, i = self.gens[n]
                c = self.left(s, 1) * self.left(s, i) \
                    - (i + 1) * self.left(s, i + 1)
                q = c * p
                _accum(out, w[:j] + w[j + 1:], -q if j % 2 else q)
        return out


def koszul(sizes):
    """The Koszul resolution for the given alphabet sizes."""
    return KoszulComplex(sizes)


# -- homology of a closed-up bimodule --------------------------------------


class HHResult:
    """Slicewise homology of a graph bimodule tensored with the resolution.

    groups maps (hochschild degree a, internal degree d2) to an FPAbGroup
    for every even d2 in the window; del_op and dc_op hold the matrices
    induced on homology, in canonical coordinates, for the derivation
    (degree (0, +4)) and the Cautis operator (degree (-1, +4)).
    """

    def __init__(self, bim, kz, window2):
        self.bim = bim
        self.koszul = kz
        self.window2 = int(window2)
        self.shift2 = bim.shift2
        self.wedges = {a: list(combinations(range(len(kz.gens)), a))
                       for a in range(len(kz.gens) + 1)}
        self.groups = {}
        self.del_op = {}
        self.dc_op = {}
        self._layouts = {}
        self._chain = {}
        self._trivial = FPAbGroup(0, [])

    @property
    def max_a(self):
        return len(self.koszul.gens)

    def group(self, a, d2):
        if d2 > self.window2:
            raise ValueError("window exceeded")
        return self.groups.get((a, d2), self._trivial)

    def layout(self, a, d2):
        """List of (wedge, offset) pairs describing the chain slice."""
        return self._layouts[(a, d2)][0]

    def dim(self, a, d2):
        ent = self._layouts.get((a, d2))
        return ent[1] if ent else 0

    def offset(self, a, d2, w):
        for wedge, off in self._layouts[(a, d2)][0]:
            if wedge == w:
                return off
        raise KeyError(w)

    def describe(self):
        """Nonzero groups as {(a, d2): {"free_rank", "torsion"}}."""
        out = {}
        for key, g in sorted(self.groups.items()):
            if not g.is_trivial():
                out[key] = g.describe()
        return out

    def signature(self):
        return tuple(sorted((a, d2, g.free_rank(), tuple(g.torsion()))
                            for (a, d2), g in self.groups.items()
                            if not g.is_trivial()))


def hh(m, window2, threads=1):
    """Relative Hochschild homology of a graph bimodule, closed up.

    The graph's bottom and top must carry the same colors position by
    position; internal degree slices run over even d2 from 0 to window2.
    """
    g = m.graph
    bcols = tuple(g.colors[e] for e in g.bottom)
    tcols = tuple(g.colors[e] for e in g.top)
    if bcols != tcols:
        raise ValueError("top and bottom boundary colors do not match")
    kz = KoszulComplex(bcols)
    res = HHResult(m, kz, window2)
    _build(res, threads)
    return res


def _build(res, threads):
    m, kz = res.bim, res.koszul
    g = m.graph
    gens = kz.gens
    G = len(gens)
    degrees = list(range(0, res.window2 + 1, 2))

    left = [m.edge_es(g.top[s])[i] for s, i in gens]
    right = [m.edge_es(g.bottom[s])[i] for s, i in gens]
    e1l = [m.edge_es(g.top[s])[1] for s in range(len(kz.sizes))]
    dkp = [left[n] - right[n] for n in range(G)]
    dcp = []
    for n, (s, i) in enumerate(gens):
        top = m.edge_es(g.top[s])
        c = e1l[s] * top[i]
        if i + 1 <= kz.sizes[s]:
            c = c - top[i + 1] * (i + 1)
        dcp.append(c)

    w2 = {}
    for a in range(G + 1):
        for w in res.wedges[a]:
            w2[w] = kz.wedge_degree2(w)
    for d2 in degrees:
        for a in range(G + 1):
            off, lay = 0, []
            for w in res.wedges[a]:
                lay.append((w, off))
                off += m.dim(d2 - w2[w])
            res._layouts[(a, d2)] = (lay, off)

    mats = {}

    def mult(polys, n, d2m):
        key = (id(polys), n, d2m)
        mat = mats.get(key)
        if mat is None:
            mat = mats[key] = m.mult_matrix(polys[n], d2m)
        return mat

    def assemble(a, d2, ta, td2, blocks):
        lay, sdim = res._layouts[(a, d2)]
        tlay, tdim = res._layouts[(ta, td2)]
        tpos = dict(tlay)
        spos = dict(lay)
        cols = [dict() for _ in range(sdim)]
        for w, wt, c, mat in blocks:
            so, to = spos[w], tpos[wt]
            if isinstance(mat, int):
                for j in range(mat):
                    dst = cols[so + j]
                    nv = dst.get(to + j, 0) + c
                    if nv:
                        dst[to + j] = nv
                    else:
                        dst.pop(to + j, None)
                continue
            for j, col in enumerate(mat.cols):
                dst = cols[so + j]
                for r, v in col.items():
                    nv = dst.get(to + r, 0) + c * v
                    if nv:
                        dst[to + r] = nv
                    else:
                        dst.pop(to + r, None)
        return IntMatrix(tdim, cols)

    dk_chain, del_chain, dc_chain = {}, {}, {}
    res._chain = {"dk": dk_chain, "del": del_chain, "dc": dc_chain}

    for d2 in degrees:
        for a in range(1, G + 1):
            blocks = []
            for w in res.wedges[a]:
                d2m = d2 - w2[w]
                if m.dim(d2m) == 0:
                    continue
                for j, n in enumerate(w):
                    if not dkp[n]:
                        continue
                    blocks.append((w, w[:j] + w[j + 1:],
                                   -1 if j % 2 else 1, mult(dkp, n, d2m)))
            dk_chain[(a, d2)] = assemble(a, d2, a - 1, d2, blocks)

    inner = [d2 for d2 in degrees if d2 + 4 <= res.window2]
    for d2 in inner:
        for a in range(G + 1):
            blocks = []
            for w in res.wedges[a]:
                d2m = d2 - w2[w]
                nd = m.dim(d2m)
                if nd == 0:
                    continue
                blocks.append((w, w, 1, m.del_matrix(d2m)))
                for j, n in enumerate(w):
                    s, i = gens[n]
                    rest = w[:j] + w[j + 1:]
                    n2 = kz.npos.get((s, i + 1))
                    if n2 is not None:
                        wt, sg = _insert(rest, n2)
                        if wt is not None:
                            c = (i + 1) * sg * (1 if j % 2 else -1)
                            blocks.append((w, wt, c, nd))
                    if e1l[s]:
                        blocks.append((w, w, 1, mult(e1l, s, d2m)))
                    wt, sg = _insert(rest, kz.npos[(s, 1)])
                    if wt is not None and right[n]:
                        c = sg * (-1 if j % 2 else 1)
                        blocks.append((w, wt, c, mult(right, n, d2m)))
            del_chain[(a, d2)] = assemble(a, d2, a, d2 + 4, blocks)
        for a in range(1, G + 1):
            blocks = []
            for w in res.wedges[a]:
                d2m = d2 - w2[w]
                if m.dim(d2m) == 0:
                    continue
                for j, n in enumerate(w):
                    if not dcp[n]:
                        continue
                    blocks.append((w, w[:j] + w[j + 1:],
                                   -1 if j % 2 else 1, mult(dcp, n, d2m)))
            dc_chain[(a, d2)] = assemble(a, d2, a - 1, d2 + 4, blocks)

    slices = [(a, d2) for d2 in degrees for a in range(G + 1)]

    def job(key):
        a, d2 = key
        bnd = dk_chain.get((a + 1, d2))
        return subquotient(res.dim(a, d2),
                           list(bnd.cols) if bnd is not None else [],
                           dk_chain.get((a, d2)))

    if threads and threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for key, grp in zip(slices, pool.map(job, slices)):
                res.groups[key] = grp
    else:
        for key in slices:
            res.groups[key] = job(key)

    for d2 in inner:
        for a in range(G + 1):
            src = res.groups[(a, d2)]
            if src.is_trivial():
                continue
            res.del_op[(a, d2)] = induced_map(
                del_chain[(a, d2)], src, res.groups[(a, d2 + 4)])
            if a >= 1:
                res.dc_op[(a, d2)] = induced_map(
                    dc_chain[(a, d2)], src, res.groups[(a - 1, d2 + 4)])


def hh_map(f, source, target):
    """Matrices induced on homology by a bimodule map, per (a, d2)-slice.

    source and target are the HHResults of f's source and target over the
    same boundary; keys follow the source slice, values are matrices into
    the canonical coordinates of the target group at (a, d2 + f degree).
    """
    if source.koszul.sizes != target.koszul.sizes:
        raise ValueError("boundary algebras do not match")
    kz = source.koszul
    r2 = f.ring_deg2
    out = {}
    for (a, d2), src in sorted(source.groups.items()):
        if src.is_trivial() or d2 + r2 > target.window2:
            continue
        tgt = target.groups.get((a, d2 + r2))
        if tgt is None:
            continue
        cols = [dict() for _ in range(source.dim(a, d2))]
        for w, off in source.layout(a, d2):
            d2m = d2 - kz.wedge_degree2(w)
            if source.bim.dim(d2m) == 0:
                continue
            mat = f.matrix(d2m)
            toff = target.offset(a, d2 + r2, w)
            for j, col in enumerate(mat.cols):
                cols[off + j] = {toff + r: v for r, v in col.items()}
        F = IntMatrix(target.dim(a, d2 + r2), cols)
        out[(a, d2)] = induced_map(F, src, tgt)
    return out


def trace_check(m, n, window2):
    """Closures of the two composites carry the same homology.

    Stacks n on top of m and m on top of n, closes both up, and compares
    free rank and torsion in every (a, d2) spot through the window.
    """
    ab = realize(m.graph.stack(n.graph))
    ba = realize(n.graph.stack(m.graph))
    return hh(ab, window2).signature() == hh(ba, window2).signature()
