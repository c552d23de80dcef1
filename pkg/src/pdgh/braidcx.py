"""Crossing complexes of colored braids.

A crossing with strand colors (a, b) expands into a complex of two-rung
square-ladder bimodules indexed by the rung label j = 0..min(a,b).  The
differentials are compositions of the elementary equivariant maps, routed
through explicitly assembled intermediate graphs; green-dot multiplicities
on the terms are not chosen by hand but solved for as the unique integer
dot assignment making every differential commute with the twisted
derivation, anchored at an untwisted end term.

A braid word tensors one crossing complex per letter, with identity strands
on the remaining positions, stacks the letters and flattens the resulting
hyperrectangle with Koszul signs.
"""

import itertools

from .symfunc import Poly
from .abgrp import column_hnf, hnf_solve
from .moy import (
    GraphBimodule, BimoduleMap, MOYGraph, realize, strand, merge_graph,
    split_graph, elementary_map, twist_of_dots, _edge_substitution,
)

SLOT = "SLOT"


# -- assembling graphs from rows of side-by-side pieces ---------------------


def _assemble_rows(rows, slot_graph=None):
    """Stack rows of graphs placed beside each other, tracking edge names.

    Each row is a list of MOYGraphs, listed bottom row first; a single SLOT
    entry is replaced by slot_graph.  Returns (graph, leaves, slot_index)
    where leaves lists (piece, {piece edge id: assembled edge id}) in
    row-major order.
    """
    total = None
    leaves = []
    slot_idx = None
    for row in rows:
        rg = None
        rleaves = []
        for entry in row:
            g = slot_graph if entry == SLOT else entry
            if entry == SLOT:
                slot_idx = len(leaves) + len(rleaves)
            if rg is None:
                rg = g
                rleaves.append((g, {e: e for e in g.colors}))
            else:
                rg, lmap, rmap = rg.beside_with_maps(g)
                rleaves = [(lg, {k: lmap[v] for k, v in em.items()})
                           for lg, em in rleaves]
                rleaves.append((g, rmap))
        if total is None:
            total = rg
            leaves = rleaves
        else:
            total, lmap, umap = total.stack_with_maps(rg)
            leaves = [(lg, {k: lmap[v] for k, v in em.items()})
                      for lg, em in leaves]
            leaves += [(lg, {k: umap[v] for k, v in em.items()})
                       for lg, em in rleaves]
    return total, leaves, slot_idx


def _realize_assembly(graph, leaves):
    """Realize an assembled graph, reusing every piece's own eliminations.

    Seeding the eliminations keeps each surviving piece alphabet alive in
    the assembled ring, so piece-level maps extend monomial by monomial.
    """
    if graph._bim is not None:
        return graph._bim
    base = {}
    for lg, em in leaves:
        lb = realize(lg)
        for cand, parts in lb.elim.items():
            ac = em[cand]
            if ac not in base:
                base[ac] = tuple(em[p] for p in parts)
    graph._bim = GraphBimodule(graph, elim_base=base)
    return graph._bim


def _graph_bijection(g1, g2):
    """Edge bijection of two presentations of the same graph, or ValueError.

    Bottom edges pair positionally; a vertex pairs once all its inputs are
    paired, to the consumer of its first input, matching kind and arms.
    """
    if g1.bottom_colors() != g2.bottom_colors() or len(g1.colors) != len(g2.colors):
        raise ValueError("graphs do not match")
    emap = dict(zip(g1.bottom, g2.bottom))
    cons2 = {}
    for w, v in enumerate(g2.vertices):
        for e in (v[1], v[2]) if v[0] == "m" else (v[1],):
            cons2[e] = w
    paired = set()
    used = set()
    progress = True
    while len(paired) < len(g1.vertices) and progress:
        progress = False
        for vi, v in enumerate(g1.vertices):
            if vi in paired:
                continue
            ins = (v[1], v[2]) if v[0] == "m" else (v[1],)
            if not all(e in emap for e in ins):
                continue
            w = cons2.get(emap[ins[0]])
            if w is None or w in used:
                raise ValueError("graphs do not match")
            v2 = g2.vertices[w]
            ins2 = (v2[1], v2[2]) if v2[0] == "m" else (v2[1],)
            if v2[0] != v[0] or tuple(emap[e] for e in ins) != ins2:
                raise ValueError("graphs do not match")
            outs = (v[3],) if v[0] == "m" else (v[2], v[3])
            outs2 = (v2[3],) if v2[0] == "m" else (v2[2], v2[3])
            for e, e2 in zip(outs, outs2):
                if g1.colors[e] != g2.colors[e2]:
                    raise ValueError("graphs do not match")
                emap[e] = e2
            paired.add(vi)
            used.add(w)
            progress = True
    if len(paired) < len(g1.vertices) or len(emap) != len(g1.colors):
        raise ValueError("graphs do not match")
    if tuple(emap[e] for e in g1.top) != g2.top:
        raise ValueError("graphs do not match")
    return emap


def _relabel(src, tgt):
    """The isomorphism between two presentations of one assembled graph."""
    emap = _graph_bijection(src.graph, tgt.graph)
    return BimoduleMap(src, tgt, 0, _edge_substitution(src, tgt, emap), "relabel")


def _mirror_iso(src, tgt):
    # mirror() keeps edge ids, so the identity edge map does the renaming
    emap = {e: e for e in src.graph.colors}
    return BimoduleMap(src, tgt, 0, _edge_substitution(src, tgt, emap), "mirror")


def _induced(f, spack, tpack):
    """Extend a piece map to an assembly containing the piece.

    spack and tpack are (graph, leaves, slot index, bimodule) for the source
    and target assemblies, which must agree outside the slot.  A monomial
    factors over owning pieces; f applies to the slot factor, the identity
    to the rest, and everything is pushed forward along the edge names.
    """
    sg, sleaves, si, S = spack
    tg, tleaves, ti, T = tpack
    if si != ti or len(sleaves) != len(tleaves):
        raise AssertionError("assemblies do not line up")
    lsrc = [realize(lg) for lg, _ in sleaves]
    ltgt = [realize(lg) for lg, _ in tleaves]
    if lsrc[si] is not f.source or ltgt[ti] is not f.target:
        raise AssertionError("slot does not carry the map's ends")
    for i in range(len(sleaves)):
        if i != si and lsrc[i] is not ltgt[i]:
            raise AssertionError("assemblies differ off the slot")
    inv = [{v: k for k, v in em.items()} for _, em in sleaves]
    subs = [_edge_substitution(ltgt[i], T, em)
            for i, (lg, em) in enumerate(tleaves)]
    edge_of = {name: e for e, name in S.alphabet_of.items()}
    route = []
    for name, k in S.ring.gens:
        e = edge_of[name]
        i = si if e in inv[si] else next(x for x, m in enumerate(inv) if e in m)
        lb = lsrc[i]
        route.append((i, lb.ring.gen_pos(lb.alphabet_of[inv[i][e]], k)))
    slot_cache = {}

    def rule(p):
        out = {}
        for mono, coeff in p.terms.items():
            per = {si: [0] * lsrc[si].ring.ngens}
            for pos, ex in enumerate(mono):
                if not ex:
                    continue
                i, lpos = route[pos]
                if i not in per:
                    per[i] = [0] * lsrc[i].ring.ngens
                per[i][lpos] += ex
            acc = None
            for i, exps in sorted(per.items()):
                key = tuple(exps)
                if i == si:
                    if key not in slot_cache:
                        img = f.rule(Poly(f.source.ring, {key: 1}))
                        slot_cache[key] = subs[si](img)
                    piece = slot_cache[key]
                else:
                    piece = subs[i](Poly(lsrc[i].ring, {key: 1}))
                acc = piece if acc is None else acc * piece
            T.ring.add_into(out, acc.terms, coeff)
        return Poly(T.ring, out)

    return BimoduleMap(S, T, f.ring_deg2, rule, "ind." + f.name)


def _chain(maps, name=""):
    fs = tuple(maps)

    def rule(p):
        for f in fs:
            p = f.rule(p)
        return p

    deg = sum(f.ring_deg2 for f in fs)
    return BimoduleMap(fs[0].source, fs[-1].target, deg, rule, name)


# -- the square ladder model ------------------------------------------------


def _ladder_rows(a, b, j):
    """Row presentation of the rung-j square ladder, bottom (a,b) to top (b,a).

    Lower rung right-to-left labeled b-j, middle edges a+b-j and j, upper
    rung left-to-right labeled a-j; label-0 edges are deleted, and j = a = b
    leaves the identity on two strands.
    """
    aj, bj = a - j, b - j
    js = [strand(j)] if j else []
    rows = []
    if j and bj:
        rows.append([strand(a), split_graph(bj, j)])
    if bj:
        rows.append([merge_graph(a, bj)] + js)
    if aj:
        rows.append([split_graph(b, aj)] + js)
    if aj and j:
        rows.append([strand(b), merge_graph(aj, j)])
    if not rows:
        rows.append([strand(a), strand(b)])
    return rows


def _plus_steps(a, b, j):
    """Elementary factors of the forward differential out of rung j."""
    aj, bj = a - j, b - j
    aj1, bj1, J1 = aj - 1, bj - 1, j + 1
    M1 = a + b - j - 1
    js = [strand(j)] if j else []
    R1 = [[strand(a), split_graph(bj, j)]] if j else []
    FG = ([[split_graph(b, aj1), strand(J1)], [strand(b), merge_graph(aj1, J1)]]
          if aj1 else [])
    steps = []
    if aj1:
        pre = R1 + [[merge_graph(a, bj)] + js, [split_graph(b, aj)] + js]
        post = [[strand(b), merge_graph(aj, j)]] if j else []
        steps.append((elementary_map("upsilon", aj1, 1),
                      pre + [[strand(b), SLOT] + js] + post))
        if j:
            steps.append((elementary_map("alpha", aj1, 1, j, side="merge"),
                          pre + [[strand(b), split_graph(aj1, 1)] + js,
                                 [strand(b), SLOT]]))
        rowB = [[strand(b), strand(aj1), merge_graph(1, j)]] if j else []
        steps.append((elementary_map("alpha", b, aj1, 1, side="split",
                                     reverse=True),
                      R1 + [[merge_graph(a, bj)] + js, [SLOT] + js] + rowB
                      + [[strand(b), merge_graph(aj1, J1)]]))
    rowE = [[strand(M1), merge_graph(1, j)]] if j else []
    steps.append((elementary_map("eta", a, 1, bj1, side="right"),
                  R1 + [[SLOT] + js] + rowE + FG))
    if j and bj1:
        steps.append((elementary_map("alpha", bj1, 1, j, side="split"),
                      [[strand(a), SLOT],
                       [merge_graph(a, bj1), strand(1)] + js,
                       [strand(M1), merge_graph(1, j)]] + FG))
    if j:
        digon_rows = ([[strand(a), split_graph(bj1, J1)],
                       [merge_graph(a, bj1), SLOT]] if bj1
                      else [[strand(a), SLOT]])
        steps.append((elementary_map("zeta", 1, j), digon_rows + FG))
    return steps


def _minus_steps(a, b, j):
    """Factors of the backward differential into rung j, before mirroring.

    These act on the ladders with bottom colors (b, a); the crossing's own
    terms are their mirrors, and the composites conjugate by the renaming.
    """
    aj, bj = a - j, b - j
    aj1, bj1, J1 = aj - 1, bj - 1, j + 1
    M1 = a + b - j - 1
    js = [strand(j)] if j else []
    steps = []
    R3s = [[split_graph(a, bj1), strand(J1)]] if bj1 else []
    R4s = [[strand(a), merge_graph(bj1, J1)]] if bj1 else []
    if j:
        pre = [[strand(b), split_graph(aj1, J1)]] if aj1 else []
        mid = ([strand(b), strand(aj1), SLOT] if aj1 else [strand(b), SLOT])
        post = [[merge_graph(b, aj1), strand(J1)]] if aj1 else []
        steps.append((elementary_map("upsilon", 1, j),
                      pre + [mid] + post + R3s + R4s))
    if j and aj1:
        steps.append((elementary_map("alpha", aj1, 1, j, side="split",
                                     reverse=True),
                      [[strand(b), SLOT],
                       [strand(b), strand(aj1), merge_graph(1, j)],
                       [merge_graph(b, aj1), strand(J1)]] + R3s + R4s))
    r1 = [[strand(b), split_graph(aj, j)]] if j else []
    rowE = [[strand(M1), merge_graph(1, j)]] if j else []
    steps.append((elementary_map("chi", b, 1, aj1, side="right"),
                  r1 + [[SLOT] + js] + rowE + R3s + R4s))
    if bj1:
        rowB = [[strand(a), strand(bj1), merge_graph(1, j)]] if j else []
        steps.append((elementary_map("alpha", a, bj1, 1, side="split"),
                      r1 + [[merge_graph(b, aj)] + js, [SLOT] + js] + rowB
                      + R4s))
        if j:
            steps.append((elementary_map("alpha", bj1, 1, j, side="merge",
                                         reverse=True),
                          r1 + [[merge_graph(b, aj)] + js,
                                [split_graph(a, bj)] + js,
                                [strand(a), split_graph(bj1, 1)] + js,
                                [strand(a), SLOT]]))
        rowZ = [[strand(a), merge_graph(bj, j)]] if j else []
        steps.append((elementary_map("zeta", bj1, 1),
                      r1 + [[merge_graph(b, aj)] + js,
                            [split_graph(a, bj)] + js,
                            [strand(a), SLOT] + js] + rowZ))
    return steps


def _composite(src_bim, tgt_bim, steps, name):
    maps = []
    cur = src_bim
    for f, rows in steps:
        sg, sleaves, si = _assemble_rows(rows, f.source.graph)
        tg, tleaves, ti = _assemble_rows(rows, f.target.graph)
        S = _realize_assembly(sg, sleaves)
        T = _realize_assembly(tg, tleaves)
        maps.append(_relabel(cur, S))
        maps.append(_induced(f, (sg, sleaves, si, S), (tg, tleaves, ti, T)))
        cur = T
    maps.append(_relabel(cur, tgt_bim))
    return _chain(maps, name)


# -- solving for the green dots --------------------------------------------


def _col_sub(x, y):
    out = dict(x)
    for r, v in y.items():
        nv = out.get(r, 0) - v
        if nv:
            out[r] = nv
        else:
            out.pop(r, None)
    return out


def _zsolve(cols, rhs):
    """One integer solution of cols . x = rhs plus a kernel basis, or None."""
    pivots, hcols, (tails, kernel) = column_hnf(cols, track=True)
    sol = hnf_solve(pivots, hcols, rhs)
    if sol is None:
        return None, None
    x = {}
    for j, q in sol.items():
        for i, v in tails[j].items():
            x[i] = x.get(i, 0) + q * v
    kern = list(kernel) + [{j: 1} for j, c in enumerate(cols)
                           if not any(c.values())]
    return x, kern


def _reduce_mod_lattice(x, lat):
    """Hermite-canonical representative of x modulo the lattice span of lat."""
    pivots, hcols, _ = column_hnf(lat)
    x = dict(x)
    for p, h in zip(pivots, hcols):
        q = x.get(p, 0) // h[p]
        if q:
            for r, v in h.items():
                w = x.get(r, 0) - q * v
                if w:
                    x[r] = w
                else:
                    x.pop(r, None)
    return x


def _solve_complex_dots(summands, diffs, anchors, window2=12):
    """Dot multiplicities on all terms making every differential equivariant.

    The anchored terms stay untwisted; the dots on all other terms are the
    unknowns of one combined linear system over the window of degrees.
    Support is escalated uniformly: bottom boundary edges, both boundaries,
    every edge.  At the first feasible level the solution coset is reduced
    to its Hermite-canonical representative, so the result is deterministic.
    Kernel vectors are dot migrations (twist element vanishing termwise) or
    redistributions of dots across the two same-colored edges of a rungless
    dumbbell, which give equal maps and isomorphic complexes.
    """
    d2s = list(range(0, window2 + 1, 2))
    for level in range(3):
        supp = {}
        for idx, sm in enumerate(summands):
            if idx in anchors:
                continue
            g = sm.graph
            if level == 0:
                supp[idx] = list(g.bottom)
            elif level == 1:
                supp[idx] = list(dict.fromkeys(list(g.bottom) + list(g.top)))
            else:
                supp[idx] = sorted(g.colors)
        unknowns = [(idx, e) for idx in sorted(supp) for e in supp[idx]]
        upos = {ue: i for i, ue in enumerate(unknowns)}
        cols = [{} for _ in unknowns]
        rhs = {}
        rowidx = {}

        def ridx(key):
            if key not in rowidx:
                rowidx[key] = len(rowidx)
            return rowidx[key]

        for dnum, (i, k, f, c) in enumerate(diffs):
            S, T = f.source, f.target
            r = f.ring_deg2
            for d2 in d2s:
                kn = [_col_sub(x, y) for x, y in zip(
                    T.del_matrix(d2 + r).compose(f.matrix(d2)).cols,
                    f.matrix(d2 + 4).compose(S.del_matrix(d2)).cols)]
                for cidx, col in enumerate(kn):
                    for rr, v in col.items():
                        key = ridx((dnum, d2, cidx, rr))
                        rhs[key] = rhs.get(key, 0) - v
                if k in supp:
                    for e in supp[k]:
                        m = T.mult_matrix(T.edge_es(e)[1],
                                          d2 + r).compose(f.matrix(d2))
                        j = upos[(k, e)]
                        for cidx, col in enumerate(m.cols):
                            for rr, v in col.items():
                                key = ridx((dnum, d2, cidx, rr))
                                cols[j][key] = cols[j].get(key, 0) + v
                if i in supp:
                    for e in supp[i]:
                        m = f.matrix(d2 + 4).compose(
                            S.mult_matrix(S.edge_es(e)[1], d2))
                        j = upos[(i, e)]
                        for cidx, col in enumerate(m.cols):
                            for rr, v in col.items():
                                key = ridx((dnum, d2, cidx, rr))
                                cols[j][key] = cols[j].get(key, 0) - v
        cols = [{r_: v for r_, v in c.items() if v} for c in cols]
        sol, kern = _zsolve(cols, rhs)
        if sol is None:
            continue
        if kern:
            sol = _reduce_mod_lattice(sol, kern)
        out = {idx: {} for idx in supp}
        for pos, v in sol.items():
            if v:
                idx, e = unknowns[pos]
                out[idx][e] = out[idx].get(e, 0) + v
        return out
    raise RuntimeError("equivariance solver infeasible")


def _apply_dots(summand, dots):
    if not dots:
        return
    b = summand.bim
    g2 = b.graph.with_dots(dots)
    b.twist = b.twist + twist_of_dots(b, dots)
    b._del_cache = {}
    g2._bim = b
    b.graph = g2
    summand.graph = g2


# -- complexes --------------------------------------------------------------


class Summand:
    """One shifted dotted-graph bimodule sitting in t-degree t.

    shift2 is the full doubled shift: the displayed internal degree of an
    element is its ring degree plus shift2.
    """

    __slots__ = ("graph", "bim", "t", "shift2")

    def __init__(self, graph, bim, t, shift2):
        self.graph = graph
        self.bim = bim
        self.t = t
        self.shift2 = shift2

    def __repr__(self):
        return "Summand(t=%d, shift2=%d, %r)" % (self.t, self.shift2, self.graph)


class BimoduleComplex:
    """A finite complex of shifted graph bimodules.

    diffs entries are (source index, target index, map, coefficient); every
    differential raises t by one and has q-degree zero after the shifts.
    """

    def __init__(self, summands, diffs):
        self.summands = list(summands)
        self.diffs = list(diffs)
        for i, k, f, c in self.diffs:
            si, sk = self.summands[i], self.summands[k]
            if sk.t != si.t + 1:
                raise ValueError("differential does not raise t by one")
            if f.ring_deg2 != si.shift2 - sk.shift2:
                raise ValueError("differential is not homogeneous of degree zero")

    def t_degrees(self):
        return sorted({s.t for s in self.summands})

    def summands_at(self, t):
        return [i for i, s in enumerate(self.summands) if s.t == t]

    def __repr__(self):
        return "BimoduleComplex(%d summands, t in %s)" % (
            len(self.summands), self.t_degrees())


def check_d_squared(cx, window2=8):
    """All two-step compositions vanish on the window of ring degrees."""
    by_src = {}
    for i, k, f, c in cx.diffs:
        by_src.setdefault(i, []).append((k, f, c))
    comp = {}
    for i, k, f, c in cx.diffs:
        for k2, g, c2 in by_src.get(k, []):
            comp.setdefault((i, k2), []).append((f, g, c * c2))
    for parts in comp.values():
        for d2 in range(0, window2 + 1, 2):
            acc = None
            for f, g, cc in parts:
                m = g.matrix(d2 + f.ring_deg2).compose(f.matrix(d2))
                cols = [{r: cc * v for r, v in col.items()} for col in m.cols]
                if acc is None:
                    acc = cols
                else:
                    acc = [_col_sub(x, {r: -v for r, v in y.items()})
                           for x, y in zip(acc, cols)]
            if acc and any(acc):
                return False
    return True


# -- the crossing complexes -------------------------------------------------

_rickard_cache = {}


def rickard(a, b, sign):
    """The crossing complex for strand colors (a, b) and the given sign.

    Terms are the square ladders, t = j for positive crossings and t = -j
    for negative ones (negative terms are the mirrored ladders); the shift
    of term j is -(ab+1+j) or +(ab+1+j) printed halves on top of the
    intrinsic normalization.  Green dots are solved for, anchored untwisted
    at t = 0 for the positive sign and at t = -min(a,b) for the negative.
    """
    if isinstance(sign, str):
        sign = {"+": 1, "-": -1}[sign]
    key = (int(a), int(b), 1 if sign > 0 else -1)
    if key in _rickard_cache:
        return _rickard_cache[key]
    a, b, sg = key
    if a < 1 or b < 1:
        raise ValueError("colors must be positive")
    m = min(a, b)
    summands = []
    diffs = []
    if sg > 0:
        for j in range(m + 1):
            g, leaves, _ = _assemble_rows(_ladder_rows(a, b, j))
            bim = _realize_assembly(g, leaves)
            summands.append(Summand(g, bim, j, -2 * (a * b + 1 + j) + bim.shift2))
        for j in range(m):
            f = _composite(summands[j].bim, summands[j + 1].bim,
                           _plus_steps(a, b, j), "d+%d" % j)
            diffs.append((j, j + 1, f, 1))
        for idx, dots in _solve_complex_dots(summands, diffs, {0}).items():
            _apply_dots(summands[idx], dots)
    else:
        lam = []
        for j in range(m + 1):
            g, leaves, _ = _assemble_rows(_ladder_rows(b, a, j))
            bim = _realize_assembly(g, leaves)
            lam.append(bim)
            gm = g.mirror()
            mb = GraphBimodule(gm, elim_base=bim.elim)
            gm._bim = mb
            summands.append(Summand(gm, mb, -j, 2 * (a * b + 1 + j) + mb.shift2))
        for j in range(m):
            comp = _composite(lam[j + 1], lam[j], _minus_steps(a, b, j),
                              "d-%d" % j)
            f = _chain([_mirror_iso(summands[j + 1].bim, lam[j + 1]), comp,
                        _mirror_iso(lam[j], summands[j].bim)], comp.name)
            diffs.append((j + 1, j, f, 1))
        for idx, dots in _solve_complex_dots(summands, diffs, {m}).items():
            _apply_dots(summands[idx], dots)
    cx = BimoduleComplex(summands, diffs)
    _rickard_cache[key] = cx
    return cx


# -- colored braids ---------------------------------------------------------


class ColoredBraid:
    """A braid word on colored strands.

    Letters are nonzero integers: +i crosses the strands at positions i,
    i+1 (1-based) positively, -i negatively.  colors lists the bottom
    colors left to right; levels and the top coloring are derived by
    propagating the transpositions, and permutation[q] is the strand id
    arriving at top position q.
    """

    def __init__(self, strands, colors, word):
        self.strands = int(strands)
        self.colors = tuple(int(c) for c in colors)
        if len(self.colors) != self.strands:
            raise ValueError("need one color per strand")
        if any(c < 1 for c in self.colors):
            raise ValueError("colors must be positive")
        self.word = tuple(int(w) for w in word)
        cur = list(self.colors)
        pos = list(range(self.strands))
        self.levels = [tuple(cur)]
        self.crossings = []
        for w in self.word:
            if w == 0 or abs(w) >= self.strands:
                raise ValueError("letter %d out of range" % (w,))
            i = abs(w) - 1
            self.crossings.append((i, 1 if w > 0 else -1,
                                   (cur[i], cur[i + 1]), (pos[i], pos[i + 1])))
            cur[i], cur[i + 1] = cur[i + 1], cur[i]
            pos[i], pos[i + 1] = pos[i + 1], pos[i]
            self.levels.append(tuple(cur))
        self.top = tuple(cur)
        self.permutation = tuple(pos)

    def closure_components(self):
        """Cycles of the closure, each a sorted tuple of bottom positions."""
        end_pos = {s: q for q, s in enumerate(self.permutation)}
        seen = set()
        comps = []
        for s in range(self.strands):
            if s in seen:
                continue
            cyc = []
            cur = s
            while cur not in seen:
                seen.add(cur)
                cyc.append(cur)
                cur = end_pos[cur]
            comps.append(tuple(sorted(cyc)))
        return comps

    def __repr__(self):
        return "ColoredBraid(%d strands, colors=%s, word=%s)" % (
            self.strands, self.colors, self.word)


def framing_data(braid):
    """Per closure component: (bottom position, color, self-writhe)."""
    comps = braid.closure_components()
    where = {}
    for ci, comp in enumerate(comps):
        for s in comp:
            where[s] = ci
    writhe = [0] * len(comps)
    for i, sign, cols, (s1, s2) in braid.crossings:
        if where[s1] == where[s2]:
            writhe[where[s1]] += sign
    out = []
    for ci, comp in enumerate(comps):
        cset = {braid.colors[s] for s in comp}
        if len(cset) != 1:
            raise ValueError("component colors are inconsistent")
        out.append((comp[0], cset.pop(), writhe[ci]))
    return out


def braid_complex(braid):
    """Flattened complex of a braid word, one crossing complex per letter."""
    n = len(braid.word)
    if n == 0:
        g, leaves, _ = _assemble_rows([[strand(c) for c in braid.colors]])
        bim = _realize_assembly(g, leaves)
        return BimoduleComplex([Summand(g, bim, 0, 0)], [])
    factors = [rickard(x, y, sign)
               for i, sign, (x, y), ids in braid.crossings]
    order = list(itertools.product(*[range(len(R.summands)) for R in factors]))
    index_of = {js: k for k, js in enumerate(order)}
    packs = {}
    summands = []
    for js in order:
        rows = []
        for r, R in enumerate(factors):
            i = braid.crossings[r][0]
            lev = braid.levels[r]
            rows.append([strand(c) for c in lev[:i]] + [R.summands[js[r]].graph]
                        + [strand(c) for c in lev[i + 2:]])
        g, leaves, _ = _assemble_rows(rows)
        bim = _realize_assembly(g, leaves)
        packs[js] = (g, leaves, bim)
        summands.append(Summand(
            g, bim,
            sum(factors[r].summands[js[r]].t for r in range(n)),
            sum(factors[r].summands[js[r]].shift2 for r in range(n))))
    diffs = []
    width = braid.strands - 1
    for js in order:
        for r, R in enumerate(factors):
            slot = width * r + braid.crossings[r][0]
            for si, ti, f, c in R.diffs:
                if si != js[r]:
                    continue
                js2 = js[:r] + (ti,) + js[r + 1:]
                sgn = -1 if sum(factors[q].summands[js[q]].t
                                for q in range(r)) % 2 else 1
                sp = packs[js]
                tp = packs[js2]
                ind = _induced(f, (sp[0], sp[1], slot, sp[2]),
                               (tp[0], tp[1], slot, tp[2]))
                diffs.append((index_of[js], index_of[js2], ind, sgn * c))
    return BimoduleComplex(summands, diffs)


def twist_framing(cx, components):
    """Framing correction from closure component data.

    components lists (bottom position, color, writhe) per closure
    component.  Each component receives a green dot of multiplicity
    -2*color*writhe on its bottom boundary edge, and the whole complex is
    shifted by the doubled exponent sum of writhe*(color - color^2).
    """
    shift2 = 0
    dot_at = {}
    for posn, color, w in components:
        shift2 += 2 * w * (color - color * color)
        if w:
            dot_at[posn] = dot_at.get(posn, 0) - 2 * color * w
    if not dot_at and not shift2:
        return cx
    summands = []
    for sm in cx.summands:
        g2 = sm.graph.with_dots({sm.graph.bottom[p]: c
                                 for p, c in dot_at.items()})
        b2 = GraphBimodule(g2, elim_base=sm.bim.elim)
        g2._bim = b2
        summands.append(Summand(g2, b2, sm.t, sm.shift2 + shift2))
    diffs = []
    for i, k, f, c in cx.diffs:
        S2, T2 = summands[i].bim, summands[k].bim

        def rule(p, f=f, S2=S2, T2=T2):
            q = f.rule(Poly(f.source.ring, dict(p.terms)))
            return Poly(T2.ring, dict(q.terms))

        diffs.append((i, k, BimoduleMap(S2, T2, f.ring_deg2, rule, f.name), c))
    return BimoduleComplex(summands, diffs)
