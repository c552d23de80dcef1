"""Exact arithmetic in partially symmetric polynomial algebras.

A ring here is an ordered family of "alphabets".  An alphabet of size k
stands for k variables seen only through their elementary symmetric
functions e_1, ..., e_k; a size-1 alphabet is an honest variable (x = e_1).
Everything is q-graded, and degrees are stored doubled (internal degree of
e_i is 4i, printed degree 2i) so that the half-integer shifts appearing
downstream stay integral.

The distinguished degree-2 derivation acts per alphabet by

    der(e_i) = e_1*e_i - (i+1)*e_{i+1}        (e_{k+1} = 0)

and extends by the Leibniz rule.  Green dots twist it: a dot of multiplicity
c on an alphabet adds c*e_1 of that alphabet acting by multiplication.
"""

import itertools
from functools import lru_cache


class Alphabet:
    """A block of variables represented by its elementary symmetric functions."""

    __slots__ = ("name", "size")

    def __init__(self, name, size):
        if int(size) < 1:
            raise ValueError("alphabet size must be >= 1")
        self.name = str(name)
        self.size = int(size)

    def __repr__(self):
        return "Alphabet(%r, %d)" % (self.name, self.size)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.name == other.name and self.size == other.size

    def __hash__(self):
        return hash((self.name, self.size))


class Twist:
    """Green-dot data: integer multiplicities keyed by alphabet name."""

    __slots__ = ("mult",)

    def __init__(self, mult=None):
        self.mult = {}
        if mult:
            for k, v in dict(mult).items():
                if v:
                    self.mult[k] = int(v)

    def __add__(self, other):
        out = dict(self.mult)
        for k, v in Twist._coerce(other).mult.items():
            out[k] = out.get(k, 0) + v
        return Twist(out)

    def __neg__(self):
        return Twist({k: -v for k, v in self.mult.items()})

    def __eq__(self, other):
        return self.mult == Twist._coerce(other).mult

    def __bool__(self):
        return bool(self.mult)

    def __repr__(self):
        return "Twist(%r)" % (self.mult,)

    def get(self, name):
        return self.mult.get(name, 0)

    @staticmethod
    def _coerce(t):
        if isinstance(t, Twist):
            return t
        if t is None:
            return Twist()
        return Twist(t)


class ExactDivisionError(ArithmeticError):
    pass


class PolyRing:
    """Polynomial ring on the e-generators of an ordered family of alphabets.

    Generators are ordered alphabet-major, index-minor; graded-lex
    comparisons and printing use this fixed order.  Monomials are exponent
    tuples, polynomials are dicts from monomial to nonzero integer.
    """

    def __init__(self, alphabets):
        self.alphabets = [a if isinstance(a, Alphabet) else Alphabet(*a) for a in alphabets]
        names = [a.name for a in self.alphabets]
        if len(set(names)) != len(names):
            raise ValueError("duplicate alphabet names")
        self.by_name = {a.name: a for a in self.alphabets}
        self.gens = []
        self.gen_degree = []
        self._pos = {}
        for a in self.alphabets:
            for i in range(1, a.size + 1):
                self._pos[(a.name, i)] = len(self.gens)
                self.gens.append((a.name, i))
                self.gen_degree.append(4 * i)
        self.ngens = len(self.gens)
        self.zero_mono = (0,) * self.ngens
        self.signature = tuple((a.name, a.size) for a in self.alphabets)
        self._der_cache = None
        self._h_cache = {}
        self._slice_cache = {}

    # -- constructors ------------------------------------------------------

    def zero(self):
        return Poly(self, {})

    def one(self):
        return Poly(self, {self.zero_mono: 1})

    def const(self, c):
        c = int(c)
        return Poly(self, {self.zero_mono: c} if c else {})

    def gen_pos(self, name, i):
        return self._pos[(name, i)]

    def has_alphabet(self, name):
        return name in self.by_name

    def e(self, name, i):
        """The polynomial e_i of the named alphabet (e_0 = 1, e_{>size} = 0)."""
        if name not in self.by_name:
            raise KeyError("unknown alphabet %r" % (name,))
        if i == 0:
            return self.one()
        if i < 0 or i > self.by_name[name].size:
            return self.zero()
        m = [0] * self.ngens
        m[self._pos[(name, i)]] = 1
        return Poly(self, {tuple(m): 1})

    def x(self, name):
        """Shorthand for the variable of a size-1 alphabet."""
        if self.by_name[name].size != 1:
            raise ValueError("x() is only for size-1 alphabets")
        return self.e(name, 1)

    def mono_degree(self, mono):
        return sum(e * d for e, d in zip(mono, self.gen_degree))

    # -- raw dict arithmetic ----------------------------------------------

    def add_into(self, acc, terms, scale=1):
        for m, c in terms.items():
            c = c * scale
            if not c:
                continue
            nc = acc.get(m, 0) + c
            if nc:
                acc[m] = nc
            else:
                del acc[m]

    def mul_terms(self, a, b):
        out = {}
        if len(a) > len(b):
            a, b = b, a
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                nc = out.get(m, 0) + ca * cb
                if nc:
                    out[m] = nc
                else:
                    del out[m]
        return out

    # -- derivation --------------------------------------------------------

    def _der_gens(self):
        if self._der_cache is None:
            ders = []
            for name, i in self.gens:
                ders.append((self.e(name, 1) * self.e(name, i) - (i + 1) * self.e(name, i + 1)).terms)
            self._der_cache = ders
        return self._der_cache

    def derive_terms(self, terms):
        ders = self._der_gens()
        out = {}
        for m, c in terms.items():
            for pos in range(self.ngens):
                a = m[pos]
                if not a:
                    continue
                lowered = list(m)
                lowered[pos] -= 1
                base = tuple(lowered)
                for dm, dc in ders[pos].items():
                    key = tuple(x + y for x, y in zip(base, dm))
                    nc = out.get(key, 0) + c * a * dc
                    if nc:
                        out[key] = nc
                    else:
                        del out[key]
        return out

    # -- degree slices -----------------------------------------------------

    def monomials_of_degree(self, d):
        """All exponent tuples of internal degree d, graded-lex sorted."""
        if d in self._slice_cache:
            return self._slice_cache[d]
        out = [tuple(reversed(t)) for t in self._tails(self.ngens - 1, d)]
        out.sort(reverse=True)
        self._slice_cache[d] = out
        return out

    def _tails(self, pos, d):
        # exponent tuples for generators pos, pos-1, ..., 0 summing to degree d,
        # emitted reversed (generator pos first)
        if d < 0:
            return []
        if pos < 0:
            return [()] if d == 0 else []
        key = ("tails", pos, d)
        if key in self._slice_cache:
            return self._slice_cache[key]
        out = []
        g = self.gen_degree[pos]
        for k in range(d // g + 1):
            for rest in self._tails(pos - 1, d - k * g):
                out.append((k,) + rest)
        self._slice_cache[key] = out
        return out


class Poly:
    """Immutable multivariate polynomial over the integers."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring.signature != self.ring.signature:
                raise ValueError("mixed rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        self.ring.add_into(out, other.terms)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return self.ring.zero()
            return Poly(self.ring, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        return Poly(self.ring, self.ring.mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- inspection --------------------------------------------------------

    def degree(self):
        """Internal (doubled) degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(self.ring.mono_degree(m) for m in self.terms)

    def is_homogeneous(self):
        degs = {self.ring.mono_degree(m) for m in self.terms}
        return len(degs) <= 1

    def homogeneous_part(self, d):
        return Poly(self.ring, {m: c for m, c in self.terms.items()
                                if self.ring.mono_degree(m) == d})

    def content(self):
        from math import gcd
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        return g

    def map_coeffs(self, f):
        out = {}
        for m, c in self.terms.items():
            c = f(c)
            if c:
                out[m] = c
        return Poly(self.ring, out)

    def constant_coeff(self):
        return self.terms.get(self.ring.zero_mono, 0)

    def leading(self):
        """(monomial, coeff) maximal in graded-lex order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = lambda m: (self.ring.mono_degree(m), m)
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        key = lambda m: (self.ring.mono_degree(m), m)
        for m in sorted(self.terms, key=key, reverse=True):
            c = self.terms[m]
            factors = []
            for pos, e in enumerate(m):
                if not e:
                    continue
                name, i = self.ring.gens[pos]
                sym = name if self.ring.by_name[name].size == 1 else "e%d(%s)" % (i, name)
                factors.append(sym if e == 1 else sym + "^%d" % e)
            body = "*".join(factors) if factors else "1"
            if c == 1 and factors:
                bits.append(body)
            elif c == -1 and factors:
                bits.append("-" + body)
            else:
                bits.append("%d*%s" % (c, body) if factors else "%d" % c)
        s = " + ".join(bits)
        return s.replace("+ -", "- ")


# -- the derivation and green dots ----------------------------------------


def derive(p, twist=None):
    """Apply the degree-2 derivation, twisted by green dots.

    Returns der(p) + (sum of t(a)*e_1(a))*p.  Raises KeyError if the twist
    names an alphabet the ring does not contain.
    """
    twist = Twist._coerce(twist)
    ring = p.ring
    out = ring.derive_terms(p.terms)
    if twist:
        tw = ring.zero()
        for name, c in twist.mult.items():
            if not ring.has_alphabet(name):
                raise KeyError("twist names unknown alphabet %r" % (name,))
            tw = tw + c * ring.e(name, 1)
        ring.add_into(out, ring.mul_terms(tw.terms, p.terms))
    return Poly(ring, out)


def derive_iter(p, twist=None, times=1):
    for _ in range(times):
        p = derive(p, twist)
    return p


# -- classical bases -------------------------------------------------------


def h_poly(ring, name, i):
    """Complete homogeneous symmetric function h_i of one alphabet, in the e-basis."""
    if i < 0:
        return ring.zero()
    if i == 0:
        return ring.one()
    cache = ring._h_cache.setdefault(name, {0: ring.one()})
    if i in cache:
        return cache[i]
    k = ring.by_name[name].size
    # h_i = sum_{j>=1} (-1)^(j-1) e_j h_{i-j}
    acc = ring.zero()
    for j in range(1, min(i, k) + 1):
        acc = acc + (-1) ** (j - 1) * ring.e(name, j) * h_poly(ring, name, i - j)
    cache[i] = acc
    return acc


def conjugate_partition(lam):
    lam = [x for x in lam if x > 0]
    if not lam:
        return []
    return [sum(1 for x in lam if x >= j) for j in range(1, max(lam) + 1)]


def schur_in_e(ring, name, lam):
    """Schur polynomial s_lam of one alphabet via the dual Jacobi-Trudi determinant."""
    lam = [x for x in lam if x > 0]
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise ValueError("not a partition")
    if len(lam) > ring.by_name[name].size:
        return ring.zero()
    if not lam:
        return ring.one()
    mu = conjugate_partition(lam)
    m = len(mu)
    entries = [[ring.e(name, mu[i] - i + j) for j in range(m)] for i in range(m)]
    acc = ring.zero()
    for perm in itertools.permutations(range(m)):
        sign = 1
        for i in range(m):
            for j in range(i + 1, m):
                if perm[i] > perm[j]:
                    sign = -sign
        prod = ring.one()
        for i in range(m):
            prod = prod * entries[i][perm[i]]
            if not prod:
                break
        acc = acc + sign * prod
    return acc


def derive_schur(lam, alphabet):
    """Image of s_lam under the derivation, as a sum over single-box additions.

    The coefficient on the partition with a box added in row i is
    lam_i + 1 - i (the content of the new box); rows exceeding the alphabet
    size contribute zero.  The result is expressed in the e-basis and equals
    derive() of the e-expansion of s_lam.
    """
    lam = [x for x in lam if x > 0]
    if len(lam) > alphabet.size:
        raise ValueError("partition too tall for alphabet")
    ring = PolyRing([alphabet])
    acc = ring.zero()
    for i in range(1, min(len(lam) + 1, alphabet.size) + 1):
        row = lam[i - 1] if i <= len(lam) else 0
        mu = list(lam)
        if i <= len(lam):
            mu[i - 1] += 1
        else:
            mu.append(1)
        if i > 1 and mu[i - 1] > mu[i - 2]:
            continue
        acc = acc + (row + 1 - i) * schur_in_e(ring, alphabet.name, mu)
    return acc


# -- unions of alphabets ---------------------------------------------------


def e_union(ring, i, names):
    """e_i of a disjoint union of alphabets, by iterated convolution."""
    if i < 0:
        return ring.zero()
    parts = [ring.e(names[0], j) for j in range(i + 1)]
    for name in names[1:]:
        parts = [sum((parts[j] * ring.e(name, t - j) for j in range(t + 1)),
                     ring.zero()) for t in range(i + 1)]
    return parts[i]


def expand_union(i, E, F):
    """e_i(E ⊔ F) = sum_j e_j(E) e_{i-j}(F), over the two-alphabet ring."""
    if i > E.size + F.size:
        raise ValueError("index exceeds union size")
    ring = PolyRing([E, F])
    return e_union(ring, i, [E.name, F.name])


# -- expansion into honest variables, and back -----------------------------


def var_names(alphabet):
    return ["%s#%d" % (alphabet.name, t) for t in range(1, alphabet.size + 1)]


def split_ring(ring, names=None):
    """Replace the named alphabets (default: all with size > 1) by size-1 ones.

    Returns (new ring, map application function).  The map substitutes each
    e_i of a split alphabet with the elementary symmetric polynomial in the
    new variables.
    """
    if names is None:
        names = [a.name for a in ring.alphabets if a.size > 1]
    names = list(names)
    new_alphas = []
    for a in ring.alphabets:
        if a.name in names:
            new_alphas.extend(Alphabet(v, 1) for v in var_names(a))
        else:
            new_alphas.append(a)
    target = PolyRing(new_alphas)
    images = {}
    for name, i in ring.gens:
        if name in names:
            images[(name, i)] = e_union(target, i, var_names(ring.by_name[name]))
        else:
            images[(name, i)] = target.e(name, i)
    return target, RingMap(ring, target, images)


class RingMap:
    """Homomorphism defined by generator images, applied by substitution."""

    def __init__(self, source, target, images):
        self.source = source
        self.target = target
        self.images = images
        self._powers = {}

    def __call__(self, p):
        if p.ring is not self.source:
            raise ValueError("polynomial not in the source ring")
        tgt = self.target
        out = {}
        for m, c in p.terms.items():
            acc = {tgt.zero_mono: 1}
            for pos, e in enumerate(m):
                if not e:
                    continue
                acc = tgt.mul_terms(acc, self._power(pos, e))
            tgt.add_into(out, acc, c)
        return Poly(tgt, out)

    def _power(self, pos, e):
        key = (pos, e)
        if key not in self._powers:
            base = self.images[self.source.gens[pos]]
            self._powers[key] = (base ** e).terms
        return self._powers[key]


def collect_to_e(p, split, orig_ring, names=None):
    """Inverse of split_ring on symmetric polynomials.

    p lives in the split ring; the result re-expresses it in orig_ring via
    the e-basis of each split group.  Raises ValueError if p is not
    symmetric in some group.
    """
    sring = p.ring
    if names is None:
        names = [a.name for a in orig_ring.alphabets
                 if a.size > 1 and not sring.has_alphabet(a.name)]
    groups = []
    for name in names:
        a = orig_ring.by_name[name]
        groups.append((name, [sring.gen_pos(v, 1) for v in var_names(a)]))
    var_pos = [q for _, ps in groups for q in ps]
    other_pos = [i for i in range(sring.ngens) if i not in set(var_pos)]
    # target position for every surviving generator
    tpos = {}
    for i in other_pos:
        tpos[i] = orig_ring.gen_pos(*sring.gens[i])

    work = dict(p.terms)
    out = {}
    while work:
        lead = max(work, key=lambda m: tuple(m[q] for q in var_pos))
        alpha = {name: [lead[q] for q in ps] for name, ps in groups}
        for name, a in alpha.items():
            if any(a[i] < a[i + 1] for i in range(len(a) - 1)):
                raise ValueError("not symmetric in group %r" % (name,))
        coeff = {}
        key_alpha = tuple(lead[q] for q in var_pos)
        for m, c in list(work.items()):
            if tuple(m[q] for q in var_pos) == key_alpha:
                coeff[m] = c
        # the e-monomial with this leading var-exponent
        sub = {sring.zero_mono: 1}
        emono = [0] * orig_ring.ngens
        for name, ps in groups:
            a = alpha[name] + [0]
            for j in range(len(ps)):
                if a[j] - a[j + 1]:
                    emono[orig_ring.gen_pos(name, j + 1)] = a[j] - a[j + 1]
                    ej = e_union(sring, j + 1, [sring.gens[q][0] for q in ps])
                    sub = sring.mul_terms(sub, (Poly(sring, ej.terms) ** (a[j] - a[j + 1])).terms)
        for m, c in coeff.items():
            omono = [0] * orig_ring.ngens
            for i in other_pos:
                omono[tpos[i]] = m[i]
            key = tuple(o + e for o, e in zip(omono, emono))
            nc = out.get(key, 0) + c
            if nc:
                out[key] = nc
            else:
                del out[key]
            base = [0] * sring.ngens
            for i in other_pos:
                base[i] = m[i]
            sring.add_into(work, sring.mul_terms({tuple(base): 1}, sub), -c)
    return Poly(orig_ring, out)


def divide_exact(p, d):
    """Exact polynomial division; raises ExactDivisionError on failure."""
    if not d:
        raise ZeroDivisionError
    ring = p.ring
    dm, dc = d.leading()
    work = dict(p.terms)
    quot = {}
    key = lambda m: (ring.mono_degree(m), m)
    while work:
        m = max(work, key=key)
        c = work[m]
        q = tuple(a - b for a, b in zip(m, dm))
        if any(x < 0 for x in q) or c % dc:
            raise ExactDivisionError("division is not exact")
        qc = c // dc
        quot[q] = qc
        ring.add_into(work, ring.mul_terms({q: qc}, d.terms), -1)
    return Poly(ring, quot)


# -- checks ----------------------------------------------------------------


def vandermonde_check(n, k):
    """Check der on the (partial) Vandermonde determinants by expansion.

    Delta = prod_{i<j} (x_j - x_i) must satisfy der(Delta) = (n-1) e_1 Delta,
    and the partial product over pairs straddling position k must satisfy
    der = ((n-k) e_1(first k) + k e_1(rest)) times itself.
    """
    ring = PolyRing([Alphabet("x%d" % i, 1) for i in range(1, n + 1)])
    xs = [ring.x("x%d" % i) for i in range(1, n + 1)]
    delta = ring.one()
    for i in range(n):
        for j in range(i + 1, n):
            delta = delta * (xs[j] - xs[i])
    e1 = sum(xs, ring.zero())
    ok1 = derive(delta) == (n - 1) * e1 * delta
    nabla = ring.one()
    for i in range(k):
        for j in range(k, n):
            nabla = nabla * (xs[j] - xs[i])
    front = sum(xs[:k], ring.zero())
    back = sum(xs[k:], ring.zero())
    ok2 = derive(nabla) == ((n - k) * front + k * back) * nabla
    return ok1 and ok2
