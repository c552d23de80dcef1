"""Exact linear algebra over the integers.

Matrices are kept column-sparse (lists of {row: value} dicts).  The module
provides Hermite/Smith normal forms with transforms, saturated kernels,
lattice membership, homology of integer chain complexes with representative
tracking, maps induced on homology, and the mod-p reduction of free parts
used by the Bockstein construction.

Everything is exact; there is no floating point and no modular shortcut.
"""

from math import gcd


class IntMatrix:
    """Column-sparse integer matrix with optional row/column labels."""

    __slots__ = ("nrows", "cols", "row_labels", "col_labels")

    def __init__(self, nrows, cols, row_labels=None, col_labels=None):
        self.nrows = nrows
        self.cols = [{i: int(v) for i, v in dict(c).items() if v} for c in cols]
        self.row_labels = row_labels
        self.col_labels = col_labels

    @property
    def ncols(self):
        return len(self.cols)

    @classmethod
    def zero(cls, nrows, ncols):
        return cls(nrows, [{} for _ in range(ncols)])

    @classmethod
    def identity(cls, n):
        return cls(n, [{i: 1} for i in range(n)])

    @classmethod
    def from_rows(cls, rows):
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        cols = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v:
                    cols[j][i] = int(v)
        return cls(nrows, cols)

    def to_rows(self):
        rows = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                rows[i][j] = v
        return rows

    def column(self, j):
        return dict(self.cols[j])

    def apply(self, vec):
        """Matrix times a sparse vector {index: value}."""
        out = {}
        for j, c in vec.items():
            if not c:
                continue
            for i, v in self.cols[j].items():
                nv = out.get(i, 0) + c * v
                if nv:
                    out[i] = nv
                else:
                    del out[i]
        return out

    def compose(self, other):
        """self o other (self @ other as matrices)."""
        if other.nrows != len(self.cols) and self.cols:
            pass
        cols = [self.apply(c) for c in other.cols]
        return IntMatrix(self.nrows, cols)

    def is_zero(self):
        return all(not c for c in self.cols)

    def transpose(self):
        cols = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                cols[i][j] = v
        return IntMatrix(self.ncols, cols)

    def __repr__(self):
        if self.nrows * self.ncols > 400:
            return "IntMatrix(%dx%d)" % (self.nrows, self.ncols)
        return "IntMatrix(%r)" % (self.to_rows(),)


def _vec_axpy(target, source, factor):
    # target += factor * source, sparse dicts
    if not factor:
        return
    for i, v in source.items():
        nv = target.get(i, 0) + factor * v
        if nv:
            target[i] = nv
        else:
            del target[i]


def column_hnf(cols, track=False):
    """Column echelon (Hermite) form of a list of sparse columns.

    Returns (pivots, hcols, tails) with pivots a list of pivot rows in
    increasing order, hcols the echelon columns (pivot entries positive,
    entries in earlier pivot rows reduced), and, when track is set, tails
    expressing each output column as a combination of the inputs; tails of
    vanished columns form a basis of the kernel lattice of the input span.
    Pivot choice is by minimal absolute value to limit entry growth.
    """
    work = []
    for j, c in enumerate(cols):
        cc = {i: v for i, v in c.items() if v}
        tail = {j: 1} if track else None
        if cc:
            work.append([cc, tail])
    kernel = []
    done = []
    while work:
        r = min(min(c) for c, _ in work)
        bucket = [w for w in work if min(w[0]) == r]
        rest = [w for w in work if min(w[0]) != r]
        while len(bucket) > 1:
            bucket.sort(key=lambda w: abs(w[0][r]))
            piv = bucket[0]
            keep = [piv]
            for w in bucket[1:]:
                q = w[0][r] // piv[0][r]
                _vec_axpy(w[0], piv[0], -q)
                if track:
                    _vec_axpy(w[1], piv[1], -q)
                if not w[0]:
                    if track:
                        kernel.append(w[1])
                elif min(w[0]) == r:
                    keep.append(w)
                else:
                    rest.append(w)
            bucket = keep
        done.append(bucket[0])
        work = rest
    done.sort(key=lambda w: min(w[0]))
    # normalize: positive pivots, reduce entries of later columns at earlier pivot rows
    for idx, (c, t) in enumerate(done):
        r = min(c)
        if c[r] < 0:
            done[idx][0] = {i: -v for i, v in c.items()}
            if track:
                done[idx][1] = {i: -v for i, v in t.items()}
    for idx, (c, t) in enumerate(done):
        r = min(c)
        p = c[r]
        for jdx, (c2, t2) in enumerate(done):
            if jdx == idx or r not in c2:
                continue
            if min(c2) < r:
                q = c2[r] // p
                if q:
                    _vec_axpy(c2, c, -q)
                    if track:
                        _vec_axpy(t2, t, -q)
    pivots = [min(c) for c, _ in done]
    hcols = [c for c, _ in done]
    tails = [t for _, t in done] if track else None
    return pivots, hcols, (tails, kernel) if track else None


def kernel_basis(mat):
    """Basis (list of sparse vectors in the source) of ker(mat), saturated."""
    _, _, tk = column_hnf(mat.cols, track=True)
    _, kernel = tk
    # columns that were zero from the start never enter the tracker
    zero_cols = [{j: 1} for j, c in enumerate(mat.cols) if not any(c.values())]
    _, kcols, _ = column_hnf(kernel + zero_cols)
    return kcols


def hnf_solve(pivots, hcols, vec):
    """Coefficients expressing vec in the lattice spanned by echelon columns.

    Returns {col index: coeff} or None if vec is not in the lattice.
    """
    v = {i: c for i, c in vec.items() if c}
    out = {}
    by_pivot = {r: j for j, r in enumerate(pivots)}
    while v:
        r = min(v)
        j = by_pivot.get(r)
        if j is None:
            return None
        p = hcols[j][r]
        if v[r] % p:
            return None
        q = v[r] // p
        _vec_axpy(v, hcols[j], -q)
        if q:
            out[j] = q
    return out


class Lattice:
    """A sublattice of Z^n given by a basis, with membership solving."""

    def __init__(self, cols):
        self.pivots, self.hcols, _ = column_hnf(cols)

    @property
    def rank(self):
        return len(self.hcols)

    def solve(self, vec):
        return hnf_solve(self.pivots, self.hcols, vec)

    def contains(self, vec):
        return self.solve(vec) is not None


def snf_with_transforms(mat):
    """Smith normal form with transforms.

    Returns (invariants, U, Uinv, V) where U @ mat @ V is diagonal with the
    invariant factor chain, U and V unimodular, and Uinv = U^{-1}.
    Invariants are reported per row index of the diagonal (length =
    min(nrows, ncols) padded conceptually with zeros; the returned list has
    one entry per row of the domain, 0 meaning no relation).
    """
    rows = mat.to_rows()
    m = len(rows)
    n = len(rows[0]) if rows else 0
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    Uinv = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_op(i, j, c):  # row_i += c*row_j
        ri, rj = rows[i], rows[j]
        for k in range(n):
            if rj[k]:
                ri[k] += c * rj[k]
        ui, uj = U[i], U[j]
        for k in range(m):
            if uj[k]:
                ui[k] += c * uj[k]
        for k in range(m):  # Uinv: col_j -= c*col_i
            if Uinv[k][i]:
                Uinv[k][j] -= c * Uinv[k][i]

    def col_op(i, j, c):  # col_i += c*col_j
        for k in range(m):
            if rows[k][j]:
                rows[k][i] += c * rows[k][j]
        for k in range(n):
            if V[k][j]:
                V[k][i] += c * V[k][j]

    def row_swap(i, j):
        rows[i], rows[j] = rows[j], rows[i]
        U[i], U[j] = U[j], U[i]
        for k in range(m):
            Uinv[k][i], Uinv[k][j] = Uinv[k][j], Uinv[k][i]

    def col_swap(i, j):
        for k in range(m):
            rows[k][i], rows[k][j] = rows[k][j], rows[k][i]
        for k in range(n):
            V[k][i], V[k][j] = V[k][j], V[k][i]

    def row_neg(i):
        rows[i] = [-x for x in rows[i]]
        U[i] = [-x for x in U[i]]
        for k in range(m):
            Uinv[k][i] = -Uinv[k][i]

    t = 0
    while True:
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = rows[i][j]
                if v and (best is None or abs(v) < best):
                    best = abs(v)
                    piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        row_swap(t, i0)
        col_swap(t, j0)
        while True:
            # clear column t below and row t to the right, gcd-style
            again = False
            for i in range(t + 1, m):
                if rows[i][t]:
                    q = rows[i][t] // rows[t][t]
                    row_op(i, t, -q)
                    if rows[i][t]:
                        row_swap(t, i)
                        again = True
            for j in range(t + 1, n):
                if rows[t][j]:
                    q = rows[t][j] // rows[t][t]
                    col_op(j, t, -q)
                    if rows[t][j]:
                        col_swap(t, j)
                        again = True
            if not again:
                break
        if rows[t][t] < 0:
            row_neg(t)
        # enforce divisibility d_t | d_{t+1}...
        d = rows[t][t]
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if rows[i][j] % d:
                    bad = (i, j)
                    break
            if bad:
                break
        if bad:
            row_op(t, bad[0], 1)
            continue
        t += 1
    inv = [rows[i][i] if i < n else 0 for i in range(m)]
    return inv, IntMatrix.from_rows(U), IntMatrix.from_rows(Uinv), IntMatrix.from_rows(V)


def snf(mat):
    """Invariant factors and the unimodular transforms (D, U, V), U@m@V = D."""
    inv, U, Uinv, V = snf_with_transforms(mat)
    return [d for d in inv if d], U, V


class FPAbGroup:
    """Finitely presented abelian group Z^n / column span of the relations.

    Carries optional degree labels for the presentation generators and
    optional ambient representative vectors (for homology groups, the lift
    of each group generator into the chain basis).
    """

    def __init__(self, ngens, relations, degrees=None, reps=None, amb_solver=None):
        self.ngens = ngens
        self.relations = [dict(r) for r in relations]
        self.degrees = degrees
        self._amb_reps = reps
        self._amb_solver = amb_solver
        self._snf = None

    def _decompose(self):
        if self._snf is None:
            rel = IntMatrix(self.ngens, self.relations)
            inv, U, Uinv, V = snf_with_transforms(rel)
            self._snf = (inv, U, Uinv)
        return self._snf

    def invariants(self):
        """Per new generator: 0 for a free factor, d>1 for Z/d; 1's dropped."""
        inv, _, _ = self._decompose()
        return [d for d in inv if d != 1]

    def free_rank(self):
        return sum(1 for d in self.invariants() if d == 0)

    def torsion(self):
        return [d for d in self.invariants() if d > 1]

    def is_trivial(self):
        return not self.invariants()

    def gen_columns(self):
        """Presentation-coordinate vectors of the nontrivial generators,
        ordered to match invariants()."""
        inv, _, Uinv = self._decompose()
        out = []
        for t, d in enumerate(inv):
            if d == 1:
                continue
            out.append(Uinv.cols[t] if t < len(Uinv.cols) else {})
        return out

    def coords(self, vec):
        """Canonical coordinates of a presentation-coordinate vector.

        Returned aligned with invariants(): free coordinates exact integers,
        torsion coordinates reduced mod d.
        """
        inv, U, _ = self._decompose()
        x = U.apply(vec)
        out = []
        for t, d in enumerate(inv):
            if d == 1:
                continue
            v = x.get(t, 0)
            out.append(v % d if d > 1 else v)
        return out

    def is_zero(self, vec):
        return all(c == 0 for c in self.coords(vec))

    # -- homology-flavored extras -----------------------------------------

    def rep(self, k):
        """Ambient representative of the k-th nontrivial generator."""
        if self._amb_reps is None:
            raise ValueError("group has no ambient representatives")
        return self._amb_reps[k]

    def ambient_coords(self, vec):
        """Canonical coordinates of an ambient cycle vector."""
        if self._amb_solver is None:
            raise ValueError("group has no ambient solver")
        pres = self._amb_solver(vec)
        if pres is None:
            raise ValueError("vector is not a cycle")
        return self.coords(pres)

    def describe(self):
        inv = self.invariants()
        free = sum(1 for d in inv if d == 0)
        tors = [d for d in inv if d > 1]
        return {"free_rank": free, "torsion": tors}

    def __repr__(self):
        d = self.describe()
        bits = ["Z"] * d["free_rank"] + ["Z/%d" % t for t in d["torsion"]]
        return "FPAbGroup(%s)" % (" + ".join(bits) if bits else "0")


def _resolve_dims(mats, i):
    if i < len(mats):
        return len(mats[i].cols)
    return mats[-1].nrows


def homology_at(mats, i):
    """Homology of a complex of free groups at position i.

    mats[j] maps position j to position j+1; positions run 0..len(mats).
    Asserts that consecutive matrices compose to zero.
    """
    mats = [m if isinstance(m, IntMatrix) else IntMatrix.from_rows(m) for m in mats]
    dim = _resolve_dims(mats, i)
    d_out = mats[i] if i < len(mats) else None
    d_in = mats[i - 1] if i >= 1 else None
    if d_out is not None and d_in is not None:
        comp = d_out.compose(d_in)
        if not comp.is_zero():
            raise AssertionError("consecutive differentials do not compose to zero")
    return subquotient(dim, d_in.cols if d_in is not None else [],
                       d_out if d_out is not None else None)


def subquotient(dim, boundary_cols, d_out):
    """ker(d_out)/span(boundary_cols) inside Z^dim, with representatives."""
    if d_out is None or d_out.is_zero():
        cycles = [{i: 1} for i in range(dim)]
    else:
        cycles = kernel_basis(d_out)
    cyc = Lattice(cycles)
    rels = []
    for b in boundary_cols:
        sol = cyc.solve(b)
        if sol is None:
            raise AssertionError("boundary is not a cycle")
        rels.append(sol)
    k = cyc.rank

    def solver(vec, _cyc=cyc):
        return _cyc.solve(vec)

    g = FPAbGroup(k, rels, amb_solver=solver)
    reps = []
    for col in g.gen_columns():
        amb = {}
        for t, c in col.items():
            _vec_axpy(amb, cyc.hcols[t], c)
        reps.append(amb)
    g._amb_reps = reps
    return g


def induced_map(f, source, target):
    """Matrix of the map induced on homology by a chain map.

    f is an IntMatrix from the source group's ambient chains to the target
    group's; the result maps source generators to canonical target
    coordinates.  Raises if some image fails to be a cycle in the target or
    if torsion orders are not respected.
    """
    cols = []
    inv_s = source.invariants()
    inv_t = target.invariants()
    for k in range(len(inv_s)):
        img = f.apply(source.rep(k))
        coords = target.ambient_coords(img)
        d = inv_s[k]
        if d > 1:
            for c, dt in zip(coords, inv_t):
                scaled = d * c
                if dt == 0 and scaled != 0:
                    raise AssertionError("induced map does not respect torsion order")
                if dt > 1 and scaled % dt:
                    raise AssertionError("induced map does not respect torsion order")
        cols.append({i: c for i, c in enumerate(coords) if c})
    return IntMatrix(len(inv_t), cols)


class ModPSpace:
    """The free part of a group, reduced mod p, with its chosen splitting."""

    def __init__(self, group, p):
        self.group = group
        self.p = p
        inv = group.invariants()
        self.free_positions = [k for k, d in enumerate(inv) if d == 0]
        self.dim = len(self.free_positions)

    def splitting(self, j):
        """Ambient representative of the j-th mod-p basis vector."""
        return self.group.rep(self.free_positions[j])

    def reduce_coords(self, coords):
        return tuple(coords[k] % self.p for k in self.free_positions)

    def reduce_ambient(self, vec):
        return self.reduce_coords(self.group.ambient_coords(vec))


def bockstein(group, p):
    """Free part of the group tensored with F_p, splitting retained."""
    return ModPSpace(group, p)


def preimage_lattice(B, target_relations):
    """Basis of {x : B x lies in the span of target_relations}.

    B is an IntMatrix; the result is a list of sparse columns in the source.
    """
    n = B.ncols
    aug = list(B.cols) + [dict(r) for r in target_relations]
    _, _, tk = column_hnf(aug, track=True)
    _, kern = tk
    proj = [{j: 1} for j, c in enumerate(B.cols) if not any(c.values())]
    for v in kern:
        pv = {i: c for i, c in v.items() if i < n}
        if pv:
            proj.append(pv)
    _, hcols, _ = column_hnf(proj)
    return hcols


def fp_homology(A, G2, B, G3):
    """Homology at the middle of G1 -> G2 -> G3 for presented groups.

    A maps into G2's presentation coordinates (columns = images of the
    incoming generators); B maps G2 generator coordinates to G3 presentation
    coordinates.  G3 may be None when B is zero.  Returns an FPAbGroup whose
    ambient coordinates are G2 presentation coordinates.
    """
    n2 = G2.ngens
    if B is None or B.is_zero():
        cyc_cols = [{i: 1} for i in range(n2)]
    else:
        cyc_cols = preimage_lattice(B, G3.relations if G3 is not None else [])
    cyc = Lattice(cyc_cols)
    rels = []
    for b in (list(A.cols) if A is not None else []) + G2.relations:
        sol = cyc.solve(b)
        if sol is None:
            raise AssertionError("boundary escapes the cycle subgroup")
        rels.append(sol)
    g = FPAbGroup(cyc.rank, rels, amb_solver=cyc.solve)
    reps = []
    for col in g.gen_columns():
        amb = {}
        for t, c in col.items():
            _vec_axpy(amb, cyc.hcols[t], c)
        reps.append(amb)
    g._amb_reps = reps
    return g
