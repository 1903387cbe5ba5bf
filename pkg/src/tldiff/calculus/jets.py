"""Truncated multivariate Taylor arithmetic (forward-mode jets).

A Jet carries the Taylor coefficients c_alpha = D^alpha u / alpha! of a
quantity up to a fixed total order.  Sums, products and integer powers
propagate coefficients by truncated convolution, which makes the jet of
a polynomial expression exact in rational arithmetic terms.  Evaluating
g at the jets of the components of f yields every mixed partial of the
composition at once: this is the independent oracle the chain-rule
expansion is validated against, and seeding a single variable gives
plain dual numbers.
"""

from __future__ import annotations

from math import factorial

from .multiindex import MultiIndex, _as_tuple, multiindices_upto, unit


class Jet:
    __slots__ = ("dim", "order", "coef")

    def __init__(self, dim: int, order: int, coef=None):
        self.dim = dim
        self.order = order
        self.coef = dict(coef) if coef else {}

    # constructors -------------------------------------------------------
    @classmethod
    def constant(cls, value, dim, order):
        j = cls(dim, order)
        if value != 0.0:
            j.coef[(0,) * dim] = float(value)
        return j

    @classmethod
    def variable(cls, value, i, dim, order):
        j = cls.constant(value, dim, order)
        j.coef[unit(dim, i)] = 1.0
        return j

    @classmethod
    def variables(cls, point, order):
        point = list(point)
        dim = len(point)
        return [cls.variable(v, i, dim, order) for i, v in enumerate(point)]

    # arithmetic ---------------------------------------------------------
    def _lift(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.dim, self.order)

    def __add__(self, other):
        other = self._lift(other)
        out = Jet(self.dim, self.order, self.coef)
        for k, v in other.coef.items():
            out.coef[k] = out.coef.get(k, 0.0) + v
        return out

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.dim, self.order, {k: -v for k, v in self.coef.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out = Jet(self.dim, self.order)
        cap = self.order
        for ka, va in self.coef.items():
            sa = sum(ka)
            for kb, vb in other.coef.items():
                if sa + sum(kb) > cap:
                    continue
                kk = tuple(a + b for a, b in zip(ka, kb))
                out.coef[kk] = out.coef.get(kk, 0.0) + va * vb
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("jets support nonnegative integer powers only")
        out = Jet.constant(1.0, self.dim, self.order)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # extraction ---------------------------------------------------------
    @property
    def value(self) -> float:
        return self.coef.get((0,) * self.dim, 0.0)

    def derivative(self, alpha) -> float:
        alpha = _as_tuple(alpha)
        return self.coef.get(alpha, 0.0) * MultiIndex(alpha).factorial()

    def derivative_table(self, max_order=None):
        cap = self.order if max_order is None else max_order
        return {a: self.derivative(a) for a in multiindices_upto(self.dim, cap)}

    def __repr__(self):
        return f"Jet(dim={self.dim}, order={self.order}, {len(self.coef)} coeffs)"


def polyval_jet(coeffs: dict, args) -> Jet:
    """Evaluate a polynomial given as {multiindex: coefficient} on jets."""
    args = list(args)
    out = Jet.constant(0.0, args[0].dim, args[0].order)
    for alpha, c in coeffs.items():
        term = Jet.constant(c, args[0].dim, args[0].order)
        for x, e in zip(args, alpha):
            if e:
                term = term * x**e
        out = out + term
    return out
