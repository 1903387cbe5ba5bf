"""Derivatives of inverse maps from derivatives of the forward map.

The entries of the inverse Jacobian are rational expressions

    g_ij = P_ij(Df) / det(Df),        P_ij the adjugate entry,

and repeated differentiation keeps that shape: every mixed partial
D^alpha g_ij with |alpha| = k - 1 is a signed integer combination of
terms

    (Df)^beta * prod_l D^{gamma_l} f_{mu_l} / det(Df)^k,

with |beta| = (d-1)k first-order entries and k-1 extra factors whose
orders sum to 2k - 2.  The terms are generated by symbolic
differentiation and normalized onto the common det power, so the output
is a canonical term list ready for numeric evaluation.

Higher derivatives of f^{-1} itself then follow inductively through the
chain rule applied to g_ij composed with f^{-1}.  A one-dimensional
power-series reversion is included as an independent cross-check path.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from ..errors import CapabilityError, IncompleteInputError
from .faa import faa_terms
from .jets import Jet
from .multiindex import _as_tuple, multiindices, multiindices_upto, unit

MAX_INVERSE_ORDER = 5


@dataclass(frozen=True)
class InverseTerm:
    """C * (Df)^beta * prod_l D^{gamma_l} f_{mu_l} / det(Df)^k.

    beta counts first-order entries as ((coord, component), power) pairs;
    factors carry the remaining derivatives as (gamma, component) with
    components 0-based.
    """

    constant: float
    beta: tuple[tuple[tuple[int, int], int], ...]
    factors: tuple[tuple[tuple[int, ...], int], ...]
    det_power: int

    def evaluate(self, f_derivs) -> float:
        d = self.dim if (self.beta or self.factors) else len(f_derivs)
        val = self.constant
        try:
            for (coord, comp), power in self.beta:
                val *= float(f_derivs[comp][unit(d, coord)]) ** power
            for gamma, comp in self.factors:
                val *= float(f_derivs[comp][gamma])
        except KeyError as missing:
            raise IncompleteInputError(
                f"derivative table is missing order {missing}"
            ) from None
        det = _jacobian_det(f_derivs, d)
        return val / det**self.det_power

    @property
    def dim(self) -> int:
        if self.factors:
            return len(self.factors[0][0])
        if self.beta:
            return max(max(c, m) for (c, m), _ in self.beta) + 1
        return 1


def _jacobian_det(f_derivs, d: int) -> float:
    J = np.array([[float(f_derivs[a][unit(d, b)]) for b in range(d)] for a in range(d)])
    return float(np.linalg.det(J))


# internal raw-term representation: (factors multiset, detpow) -> coeff,
# where a factor is (gamma tuple, component) and first-order entries are
# just factors with |gamma| = 1.

def _det_monomials(d: int):
    """det(Df) as [(sign, (factor, ...))] with factor = (gamma, comp)."""
    if d == 1:
        return [(1.0, (((1,), 0),))]
    if d == 2:
        j = lambda a, b: (unit(2, b), a)  # entry d f^a / d x_b
        return [(1.0, (j(0, 0), j(1, 1))), (-1.0, (j(0, 1), j(1, 0)))]
    raise CapabilityError("inverse expansions support d in {1, 2} only")


def _adjugate_entry(d: int, i: int, j: int):
    """adj(Df)_{ij} as [(sign, (factor, ...))]; (Df^{-1})_{ij} = adj_ij / det."""
    if d == 1:
        return [(1.0, ())]
    jt = lambda a, b: (unit(2, b), a)
    table = {
        (0, 0): [(1.0, (jt(1, 1),))],
        (0, 1): [(-1.0, (jt(0, 1),))],
        (1, 0): [(-1.0, (jt(1, 0),))],
        (1, 1): [(1.0, (jt(0, 0),))],
    }
    return table[(i, j)]


def _diff_terms(terms: dict, i: int, d: int) -> dict:
    """One coordinate derivative of a {(factors, detpow): coeff} table."""
    e_i = unit(d, i)
    det_terms = _det_monomials(d)
    out: dict = {}

    def add(factors, detpow, c):
        key = (tuple(sorted(factors)), detpow)
        out[key] = out.get(key, 0.0) + c

    for (factors, detpow), c in terms.items():
        # product rule over the numerator factors
        for idx in range(len(factors)):
            gamma, comp = factors[idx]
            bumped = (tuple(g + e for g, e in zip(gamma, e_i)), comp)
            add(factors[:idx] + (bumped,) + factors[idx + 1:], detpow, c)
        # derivative of det^-k
        for sign, mono in det_terms:
            for idx in range(len(mono)):
                gamma, comp = mono[idx]
                bumped = (tuple(g + e for g, e in zip(gamma, e_i)), comp)
                extra = mono[:idx] + (bumped,) + mono[idx + 1:]
                add(factors + extra, detpow + 1, -detpow * sign * c)
    return out


def _normalize(terms: dict, d: int, k: int) -> dict:
    """Bring every term onto the common denominator det^k."""
    det_terms = _det_monomials(d)
    out: dict = {}
    for (factors, detpow), c in terms.items():
        expanded = {(factors, c)}
        for _ in range(k - detpow):
            nxt = set()
            for fac, cc in expanded:
                for sign, mono in det_terms:
                    nxt.add((tuple(sorted(fac + mono)), cc * sign))
            # sets deduplicate identical (factors, coeff) pairs wrongly; use dict
            merged: dict = {}
            for fac, cc in nxt:
                merged[fac] = merged.get(fac, 0.0) + cc
            expanded = set(merged.items())
        for fac, cc in expanded:
            out[fac] = out.get(fac, 0.0) + cc
    return {k2: v for k2, v in out.items() if abs(v) > 1e-14}


def inverse_derivative_expansion(alpha, d: int) -> dict:
    """Canonical term lists for D^alpha g_ij, all entries (i, j).

    alpha has order k - 1; the result maps (i, j) to a tuple of
    InverseTerm over the common denominator det(Df)^k.
    """
    alpha = _as_tuple(alpha)
    if d not in (1, 2):
        raise CapabilityError("inverse expansions support d in {1, 2} only")
    if len(alpha) != d:
        raise ValueError(f"alpha has {len(alpha)} entries, expected {d}")
    k = sum(alpha) + 1
    if k > MAX_INVERSE_ORDER:
        raise CapabilityError(f"orders above {MAX_INVERSE_ORDER - 1} are not supported")
    out = {}
    for i in range(d):
        for j in range(d):
            terms = {}
            for sign, mono in _adjugate_entry(d, i, j):
                key = (tuple(sorted(mono)), 1)
                terms[key] = terms.get(key, 0.0) + sign
            for coord, reps in enumerate(alpha):
                for _ in range(reps):
                    terms = _diff_terms(terms, coord, d)
            flat = _normalize(terms, d, k)
            out[(i, j)] = tuple(
                _split_term(c, fac, d, k) for fac, c in sorted(flat.items())
            )
    return out


def _split_term(coeff: float, factors, d: int, k: int) -> InverseTerm:
    """Separate first-order entries (beta) from the gamma factor list."""
    ones = [f for f in factors if sum(f[0]) == 1]
    higher = [f for f in factors if sum(f[0]) >= 2]
    need = (k - 1) - len(higher)
    if need < 0 or len(ones) - need != (d - 1) * k:
        raise AssertionError("inverse term homogeneity bookkeeping failed")
    gamma = tuple(higher + ones[:need])
    beta_counts: dict = {}
    for g, comp in ones[need:]:
        coord = g.index(1)
        beta_counts[(coord, comp)] = beta_counts.get((coord, comp), 0) + 1
    total = sum(sum(g) for g, _ in gamma)
    if total != 2 * k - 2:
        raise AssertionError("gamma orders do not sum to 2k - 2")
    return InverseTerm(coeff, tuple(sorted(beta_counts.items())), gamma, k)


def evaluate_expansion(terms, f_derivs) -> float:
    return sum(t.evaluate(f_derivs) for t in terms)


def inverse_derivative_table(f_derivs, d: int, max_order: int):
    """Derivative tables of f^{-1} at y = f(x) from those of f at x.

    f_derivs: per-component tables of D^alpha f at x, orders up to
    max_order.  Returns per-component tables of D^alpha (f^{-1}) at
    y = f(x) for 1 <= |alpha| <= max_order, built inductively through
    the inverse-Jacobian entries.
    """
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    J = np.array([[float(f_derivs[a][unit(d, b)]) for b in range(d)] for a in range(d)])
    Jinv = np.linalg.inv(J)
    inv_tables = [{} for _ in range(d)]
    for i in range(d):
        for j in range(d):
            inv_tables[i][unit(d, j)] = float(Jinv[i, j])
    if max_order == 1:
        return inv_tables

    # x-space derivative tables of every g_ij, evaluated at x
    g_tables = {}
    for r in range(0, max_order):
        for alpha in multiindices(d, r):
            exp = inverse_derivative_expansion(alpha, d)
            for (i, j), terms in exp.items():
                g_tables.setdefault((i, j), {})[alpha] = evaluate_expansion(terms, f_derivs)

    for r in range(2, max_order + 1):
        for alpha in multiindices(d, r):
            # peel one derivative: D^alpha (f^-1)_i = D^rest [g_{i,jcoord} o f^-1]
            jcoord = next(a for a, e in enumerate(alpha) if e > 0)
            rest = tuple(e - (1 if a == jcoord else 0) for a, e in enumerate(alpha))
            for i in range(d):
                if sum(rest) == 0:
                    val = g_tables[(i, jcoord)][(0,) * d]
                else:
                    val = 0.0
                    for t in faa_terms(rest, d, d):
                        prod = t.constant * g_tables[(i, jcoord)][t.outer]
                        for a, comp in zip(t.inner, t.assignment):
                            prod *= inv_tables[comp - 1][a]
                        val += prod
                inv_tables[i][alpha] = float(val)
    return inv_tables


def invert_series_1d(derivs, order: int):
    """Derivatives of f^{-1} at f(x0) by power-series reversion.

    derivs: sequence [f(x0), f'(x0), ..., f^(n)(x0)] with f'(x0) != 0.
    Independent of the adjugate/determinant expansion path.
    """
    a = [float(v) / factorial(n) for n, v in enumerate(derivs)]
    if len(a) < order + 1:
        raise IncompleteInputError("need derivatives up to the requested order")
    if a[1] == 0.0:
        raise ValueError("reversion requires f'(x0) != 0")
    b = [0.0, 1.0 / a[1]]
    for n in range(2, order + 1):
        phi = Jet(1, n)
        for m in range(1, n):
            phi.coef[(m,)] = b[m]
        comp = Jet.constant(0.0, 1, n)
        s = Jet.constant(1.0, 1, n)
        for m in range(1, n + 1):
            s = s * phi
            comp = comp + a[m] * s
        residual = comp.coef.get((n,), 0.0)
        b.append(-residual / a[1])
    return [b[n] * factorial(n) for n in range(order + 1)]
