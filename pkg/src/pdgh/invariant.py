"""Link homology of colored braid closures.

The closure of a colored braid is evaluated in stages.  Each term of the
crossing complex closes up to a graph bimodule whose relative Hochschild
homology carries the images of the topological differentials, the Cautis
operator and the twisted derivation.  The three gradings collapse along
a = t^{-1} q^2, homology of the total differential d_T = d_t + d_C is
taken slicewise over Z with representatives, and the derivation descends.
Reducing to the free part mod p turns the derivation into a p-nilpotent
operator whose block decomposition and slash cohomology are the final
invariant.

Reported q-degrees are doubled and absolute: they include the term shifts
of the crossing complexes, the closure shift (minus twice the color sum,
doubled), and the collapse contribution 4a for Hochschild degree a.  The
reported t is cohomological, so a class of Hochschild degree a in a term
of topological degree t lands in t - a, and differentials raise t by one.
"""

from .abgrp import FPAbGroup, IntMatrix, bockstein, fp_homology, induced_map
from .braidcx import braid_complex, framing_data, twist_framing
from .hochschild import hh, hh_map
from .jones import LaurentQ, evaluate_at_root
from .pdg import PComplex, decompose, k0_symbol, slash

_trivial = FPAbGroup(0, [])


class CollapsedBigradedGroup:
    """Bigraded homology in the collapsed (t, q) plane with its derivation.

    groups maps (t, q2) to an FPAbGroup; del_op maps (t, q2) to the matrix
    of the degree (0, +4) derivation in canonical coordinates.  stable
    records the window heuristic: the two extreme q-slices at either end
    of the window are empty.
    """

    def __init__(self, window2):
        self.window2 = tuple(window2)
        self.groups = {}
        self.del_op = {}
        self.stable = False

    def group(self, t, q2):
        return self.groups.get((t, q2), _trivial)

    def describe(self):
        return {k: g.describe() for k, g in sorted(self.groups.items())
                if not g.is_trivial()}

    def free_ranks(self):
        out = {}
        for k, g in self.groups.items():
            r = g.free_rank()
            if r:
                out[k] = r
        return out

    def torsion_table(self):
        out = {}
        for k, g in self.groups.items():
            t = g.torsion()
            if t:
                out[k] = t
        return out

    def euler_q(self):
        out = {}
        for (t, q2), r in self.free_ranks().items():
            out[q2] = out.get(q2, 0) + (r if t % 2 == 0 else -r)
        return LaurentQ(out)

    def euler_by_t(self):
        out = {}
        for (t, q2), r in self.free_ranks().items():
            out.setdefault(t, {})[q2] = r
        return {t: LaurentQ(c) for t, c in sorted(out.items())}

    def __repr__(self):
        n = sum(1 for g in self.groups.values() if not g.is_trivial())
        return "CollapsedBigradedGroup(%d slices, window2=%s)" % (
            n, list(self.window2))


def _doubled_window(window):
    lo, hi = window
    lo2, hi2 = 2 * int(lo), 2 * int(hi)
    if lo2 > hi2:
        raise ValueError("empty window")
    return lo2, hi2


def _closure_complex(b, unframed):
    tops = tuple(b.colors[s] for s in b.permutation)
    if tops != b.colors:
        raise ValueError("closure needs matching top and bottom colors")
    cx = braid_complex(b)
    if unframed:
        cx = twist_framing(cx, framing_data(b))
    return cx


def _add(col, r, v):
    nv = col.get(r, 0) + v
    if nv:
        col[r] = nv
    else:
        col.pop(r, None)


def _collapse(cx, gshift2, window2, threads):
    """Collapsed slice homology of a complex of closed-up bimodules."""
    lo2, hi2 = window2
    sh = [sm.shift2 for sm in cx.summands]
    res = []
    for sm in cx.summands:
        need = hi2 - gshift2 - sm.shift2
        res.append(hh(sm.bim, max(need, 0) + 4, threads=threads))
    fmaps = [(i, k, hh_map(f, res[i], res[k]), c) for i, k, f, c in cx.diffs]
    by_src = {}
    for i, k, fm, c in fmaps:
        by_src.setdefault(i, []).append((k, fm, c))

    slots = {}
    for i, sm in enumerate(cx.summands):
        for (a, d2), g in res[i].groups.items():
            if g.is_trivial():
                continue
            q2 = d2 + sm.shift2 + 4 * a + gshift2
            if lo2 <= q2 <= hi2:
                slots.setdefault((sm.t - a, q2), []).append((i, a, d2))
    layout = {}
    for key, blocks in slots.items():
        blocks.sort()
        offs = {}
        rels = []
        n = 0
        for blk in blocks:
            i, a, d2 = blk
            inv = res[i].groups[(a, d2)].invariants()
            offs[blk] = n
            for j, d in enumerate(inv):
                if d > 1:
                    rels.append({n + j: d})
            n += len(inv)
        layout[key] = (blocks, offs, n, FPAbGroup(n, rels))

    def dmat(key):
        tkey = (key[0] + 1, key[1])
        if key not in layout or tkey not in layout:
            return None
        blocks, offs, n, _ = layout[key]
        _, toffs, tn, _ = layout[tkey]
        cols = [{} for _ in range(n)]
        for blk in blocks:
            i, a, d2 = blk
            co = offs[blk]
            dc = res[i].dc_op.get((a, d2))
            tblk = (i, a - 1, d2 + 4)
            if dc is not None and tblk in toffs:
                ro = toffs[tblk]
                sgn = -1 if cx.summands[i].t % 2 else 1
                for j, col in enumerate(dc.cols):
                    for r, v in col.items():
                        _add(cols[co + j], ro + r, sgn * v)
            for k, fm, c in by_src.get(i, ()):
                F = fm.get((a, d2))
                tblk = (k, a, d2 + sh[i] - sh[k])
                if F is not None and tblk in toffs:
                    ro = toffs[tblk]
                    for j, col in enumerate(F.cols):
                        for r, v in col.items():
                            _add(cols[co + j], ro + r, c * v)
        return IntMatrix(tn, cols)

    order = sorted(layout)
    dms = {key: dmat(key) for key in order}
    out = CollapsedBigradedGroup(window2)
    for key in order:
        G2 = layout[key][3]
        A = dms.get((key[0] - 1, key[1]))
        B = dms.get(key)
        G3 = layout[(key[0] + 1, key[1])][3] if B is not None else None
        out.groups[key] = fp_homology(A, G2, B, G3)

    for key in order:
        tkey = (key[0], key[1] + 4)
        if tkey not in layout or out.groups[key].is_trivial():
            continue
        blocks, offs, n, _ = layout[key]
        _, toffs, tn, _ = layout[tkey]
        cols = [{} for _ in range(n)]
        for blk in blocks:
            i, a, d2 = blk
            dl = res[i].del_op.get((a, d2))
            tblk = (i, a, d2 + 4)
            if dl is not None and tblk in toffs:
                co, ro = offs[blk], toffs[tblk]
                for j, col in enumerate(dl.cols):
                    for r, v in col.items():
                        _add(cols[co + j], ro + r, v)
        out.del_op[key] = induced_map(IntMatrix(tn, cols),
                                      out.groups[key], out.groups[tkey])

    present = {q2 for (t, q2), g in out.groups.items() if not g.is_trivial()}
    out.stable = not (present & {lo2, lo2 + 2, hi2 - 2, hi2})
    return out


def c_prime(b, window=(-16, 16), threads=1, unframed=False):
    """Integral collapsed homology of the closure, with the derivation."""
    window2 = _doubled_window(window)
    cx = _closure_complex(b, unframed)
    return _collapse(cx, -2 * sum(b.colors), window2, threads)


def c_partial(b, p, window=(-16, 16), threads=1, unframed=False, base=None):
    """Free part mod p with the pushed-forward derivation, as a p-complex."""
    cp = base if base is not None else c_prime(b, window, threads, unframed)
    dims = {}
    spaces = {}
    for key, g in cp.groups.items():
        sp = bockstein(g, p)
        if sp.dim:
            dims[key] = sp.dim
            spaces[key] = sp
    d = {}
    for key, m in cp.del_op.items():
        sp = spaces.get(key)
        tp = spaces.get((key[0], key[1] + 4))
        if sp is None or tp is None:
            continue
        tindex = {fpos: r for r, fpos in enumerate(tp.free_positions)}
        cols = []
        for j in range(sp.dim):
            col = m.cols[sp.free_positions[j]]
            cc = {}
            for rr, v in col.items():
                r = tindex.get(rr)
                if r is not None and v % p:
                    cc[r] = v % p
            cols.append(cc)
        if any(cols):
            d[key] = cols
    out = PComplex(p, dims, d)
    if not out.check_nilpotent():
        raise AssertionError("derivation power does not vanish mod p")
    return out


class SlashResult:
    """Slash cohomology of one closure at one prime.

    blocks is the multiset of surviving indecomposables as (t, q2, i);
    symbol and symbol_by_t are their classes in O_p.
    """

    def __init__(self, p, pcomplex, slashed, blocks, symbol, symbol_by_t):
        self.p = p
        self.pcomplex = pcomplex
        self.slashed = slashed
        self.blocks = blocks
        self.symbol = symbol
        self.symbol_by_t = symbol_by_t

    def is_zero(self):
        return not self.blocks

    def __repr__(self):
        if not self.blocks:
            return "SlashResult(p=%d, 0)" % self.p
        bits = ["t^%d q2=%d V_%d" % (t, q2, i) for t, q2, i in self.blocks]
        return "SlashResult(p=%d, %s)" % (self.p, " + ".join(bits))


def slash_invariant(b, p, window=(-16, 16), threads=1, unframed=False,
                    base=None, partial=None):
    """Slash cohomology with its block decomposition and O_p symbol."""
    m = partial if partial is not None else c_partial(
        b, p, window, threads, unframed, base=base)
    s = slash(m)
    total, by_t = k0_symbol(m)
    return SlashResult(p, m, s, decompose(s), total, by_t)


def euler(b, mode="raw", p=None, window=(-16, 16), threads=1, unframed=False,
          base=None):
    """Graded Euler characteristic of the collapsed homology.

    mode "raw" gives the Laurent polynomial, "cyclotomic" its reduction in
    O_p (p required), "t-graded" a per-t table of rank polynomials.
    """
    cp = base if base is not None else c_prime(b, window, threads, unframed)
    if mode == "raw":
        return cp.euler_q()
    if mode == "cyclotomic":
        if p is None:
            raise ValueError("cyclotomic mode needs a prime")
        return evaluate_at_root(cp.euler_q(), p)
    if mode == "t-graded":
        return cp.euler_by_t()
    raise ValueError("unknown mode %r" % (mode,))


def unframed(b, result, *args, **kwargs):
    """Recompute a pipeline result with the framing normalization applied.

    result is one of the pipeline operations (c_prime, c_partial,
    slash_invariant, euler); remaining arguments are forwarded.  The
    normalization adds the component green dots and the global shift
    before any homology is taken.
    """
    kwargs["unframed"] = True
    return result(b, *args, **kwargs)


class LinkHomology:
    """Full pipeline output for one braid closure.

    Runs the integral stage once and derives the per-prime reductions,
    slash decompositions and Euler data from it.
    """

    def __init__(self, b, window=(-16, 16), primes=(2, 3, 5, 7), threads=1,
                 unframed=False):
        self.braid = b
        self.window = tuple(window)
        self.primes = tuple(primes)
        self.framed = not unframed
        self.cprime = c_prime(b, window, threads, unframed)
        self.cpartial = {}
        self.slashes = {}
        for p in self.primes:
            m = c_partial(b, p, window, base=self.cprime)
            self.cpartial[p] = m
            self.slashes[p] = slash_invariant(b, p, window, partial=m)
        self.euler_q = self.cprime.euler_q()

    def __repr__(self):
        return "LinkHomology(%r, window=%s, primes=%s)" % (
            self.braid, list(self.window), list(self.primes))
