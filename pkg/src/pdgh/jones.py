"""Colored Jones polynomial oracle via MOY graph evaluation.

Quantum integers and binomials live here, as does the decategorified
crossing expansion: each colored crossing opens into an alternating
q-weighted sum of planar resolution graphs, the braid is closed, and each
closed graph is evaluated by local MOY moves (circle, digon, associativity,
square relations).  The evaluation never touches the homology pipeline, so
it serves as an independent Euler-characteristic check.

All q-exponents are doubled internally (q^1 is stored as exponent 2).
"""

from .pdg import OpElement


class LaurentQ:
    """Laurent polynomial in q with integer coefficients, doubled exponents."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        self.c = {}
        if coeffs:
            for e, v in coeffs.items():
                if v:
                    self.c[int(e)] = self.c.get(int(e), 0) + int(v)
            self.c = {e: v for e, v in self.c.items() if v}

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def q_power(cls, e2):
        return cls({e2: 1})

    def __add__(self, other):
        out = dict(self.c)
        for e, v in other.c.items():
            out[e] = out.get(e, 0) + v
        return LaurentQ(out)

    def __neg__(self):
        return LaurentQ({e: -v for e, v in self.c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentQ({e: v * other for e, v in self.c.items()})
        out = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                k = e1 + e2
                out[k] = out.get(k, 0) + v1 * v2
        return LaurentQ(out)

    __rmul__ = __mul__

    def shift(self, e2):
        return LaurentQ({e + e2: v for e, v in self.c.items()})

    def divide_exact(self, other):
        """Exact division; raises ValueError when the remainder is nonzero."""
        if not other.c:
            raise ZeroDivisionError
        rem = dict(self.c)
        lead = max(other.c)
        lead_c = other.c[lead]
        out = {}
        while rem:
            e = max(rem)
            v = rem[e]
            if v % lead_c:
                raise ValueError("division is not exact")
            f = v // lead_c
            out[e - lead] = f
            for e2, v2 in other.c.items():
                k = e - lead + e2
                nv = rem.get(k, 0) - f * v2
                if nv:
                    rem[k] = nv
                elif k in rem:
                    del rem[k]
        return LaurentQ(out)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentQ({0: other})
        return self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def __bool__(self):
        return bool(self.c)

    def coeff(self, e2):
        return self.c.get(e2, 0)

    def __repr__(self):
        if not self.c:
            return "0"
        bits = []
        for e in sorted(self.c):
            v = self.c[e]
            if e == 0:
                bits.append(str(v))
            else:
                ex = e // 2 if e % 2 == 0 else "%d/2" % e
                mono = "q^%s" % ex
                if v == 1:
                    bits.append(mono)
                elif v == -1:
                    bits.append("-" + mono)
                else:
                    bits.append("%d*%s" % (v, mono))
        return (" + ".join(bits)).replace("+ -", "- ")


def qint(n):
    """Quantum integer [n] = q^{n-1} + q^{n-3} + ... + q^{1-n}."""
    return LaurentQ({2 * (n - 1 - 2 * k): 1 for k in range(n)})


def qbinom(n, k):
    """Quantum binomial via the product formula with exact division."""
    if not 0 <= k <= n:
        return LaurentQ.zero()
    num = LaurentQ.one()
    den = LaurentQ.one()
    for i in range(k):
        num = num * qint(n - i)
        den = den * qint(i + 1)
    return num.divide_exact(den)


def evaluate_at_root(f, p):
    """Reduce a Laurent polynomial into O_p (q at a 2p-th root of unity)."""
    return OpElement(p, dict(f.c))
