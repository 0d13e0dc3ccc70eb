"""Sparse homogeneous integer polynomials in n variables.

Terms are kept in a dict mapping exponent tuples to nonzero integer
coefficients; iteration order is canonical (graded lexicographic, which for
fixed degree is plain lexicographic, descending).
"""

from dataclasses import dataclass, field
from fractions import Fraction


def _grlex_key(exps):
    return (sum(exps), exps)


@dataclass(frozen=True)
class HomPolynomial:
    """A homogeneous polynomial of fixed degree with integer coefficients."""

    nvars: int
    degree: int
    terms: tuple = ()  # ((exps, coeff), ...) sorted grlex descending

    def __post_init__(self):
        for exps, coeff in self.terms:
            if len(exps) != self.nvars or sum(exps) != self.degree:
                raise ValueError("exponent vector does not match degree")
            if coeff == 0:
                raise ValueError("zero coefficient stored")

    @staticmethod
    def from_dict(nvars, degree, d):
        terms = tuple(
            (exps, c)
            for exps, c in sorted(d.items(), key=lambda t: _grlex_key(t[0]), reverse=True)
            if c != 0
        )
        return HomPolynomial(nvars, degree, terms)

    @staticmethod
    def zero(nvars, degree):
        return HomPolynomial(nvars, degree, ())

    @staticmethod
    def constant(nvars, c):
        if c == 0:
            return HomPolynomial.zero(nvars, 0)
        return HomPolynomial(nvars, 0, (((0,) * nvars, c),))

    @staticmethod
    def from_linear_form(coeffs):
        """The degree-1 polynomial c1*x1 + ... + cn*xn."""
        n = len(coeffs)
        d = {}
        for i, c in enumerate(coeffs):
            if c != 0:
                e = [0] * n
                e[i] = 1
                d[tuple(e)] = c
        if not d:
            return HomPolynomial.zero(n, 1)
        return HomPolynomial.from_dict(n, 1, d)

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise ValueError("degree mismatch in polynomial addition")
        deg = other.degree if self.is_zero() else self.degree
        d = dict(self.terms)
        for exps, c in other.terms:
            d[exps] = d.get(exps, 0) + c
        return HomPolynomial.from_dict(self.nvars, deg, d)

    def __neg__(self):
        return HomPolynomial(self.nvars, self.degree, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        if k == 0:
            return HomPolynomial.zero(self.nvars, self.degree)
        return HomPolynomial(self.nvars, self.degree, tuple((e, k * c) for e, c in self.terms))

    def __mul__(self, other):
        d = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                d[e] = d.get(e, 0) + c1 * c2
        return HomPolynomial.from_dict(self.nvars, self.degree + other.degree, d)

    def eval(self, point):
        total = Fraction(0)
        for exps, c in self.terms:
            v = Fraction(c)
            for x, e in zip(point, exps):
                if e:
                    v *= Fraction(x) ** e
            total += v
        return total

    def compose_linear(self, forms):
        """Substitute x_i -> forms[i] (a linear form in m new variables)."""
        m = len(forms[0]) if forms else 0
        lin = [HomPolynomial.from_linear_form(f) for f in forms]
        result = HomPolynomial.zero(m, self.degree)
        for exps, c in self.terms:
            mono = HomPolynomial.constant(m, c)
            for f, e in zip(lin, exps):
                for _ in range(e):
                    mono = mono * f
            result = result + mono
        return result

    def divide_exact(self, q):
        """Return r with r*q == self; raise on inexact division."""
        if q.is_zero():
            raise ValueError("division by zero polynomial")
        if self.is_zero():
            return HomPolynomial.zero(self.nvars, max(self.degree - q.degree, 0))
        if self.degree < q.degree:
            raise ValueError("inexact division")
        rem = dict(self.terms)
        quo = {}
        qe, qc = q.terms[0]
        deg = self.degree - q.degree
        while rem:
            e = max(rem, key=_grlex_key)
            c = rem[e]
            ediff = tuple(a - b for a, b in zip(e, qe))
            if any(x < 0 for x in ediff) or c % qc != 0:
                raise ValueError("inexact division")
            f = c // qc
            quo[ediff] = quo.get(ediff, 0) + f
            for e2, c2 in q.terms:
                e3 = tuple(a + b for a, b in zip(ediff, e2))
                nc = rem.get(e3, 0) - f * c2
                if nc:
                    rem[e3] = nc
                else:
                    rem.pop(e3, None)
        return HomPolynomial.from_dict(self.nvars, deg, quo)

    def restrict_to_span(self, basis):
        """Rewrite in coordinates along the given spanning vectors.

        The result is the polynomial t -> p(sum_i t_i * basis[i]).
        """
        cols = tuple(zip(*basis)) if basis else ((),) * self.nvars
        return self.compose_linear([tuple(col) for col in cols])

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.terms:
            mono = "*".join(
                f"x{i}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(exps)
                if e
            )
            if mono:
                parts.append(f"{c}*{mono}" if abs(c) != 1 else ("-" + mono if c == -1 else mono))
            else:
                parts.append(str(c))
        return " + ".join(parts).replace("+ -", "- ")
