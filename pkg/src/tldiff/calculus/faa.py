"""Higher-order chain rule for compositions g(f(x)), f: R^d -> R^D.

The expansion of D^kbar (g o f) is generated by repeated symbolic
differentiation with canonical term collection, not from a closed-form
coefficient formula: starting from the bare term g, each application of
a coordinate derivative either raises a derivative slot of g (producing
a new first-order factor of the matching f-component) or raises one of
the existing f-factors, and like terms are merged.  Correctness is by
construction and is cross-checked against a truncated-Taylor oracle in
the tests.

Terms are canonicalized by grouping the inner multiindices by the
g-slot they are assigned to and sorting within each group, so the term
list is unique regardless of the differentiation order.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from ..errors import CapabilityError, IncompleteInputError
from .multiindex import MultiIndex, _as_tuple, m_vector, unit

MAX_ORDER = 6

# term key: tuple over g-components of sorted tuples of inner multiindices
_TermKey = tuple


@dataclass(frozen=True)
class FaaTerm:
    """One collected summand: C * D^outer g(f) * prod_l D^{inner_l} f^{m_l}."""

    constant: int
    outer: tuple[int, ...]                      # derivative order of g per slot
    inner: tuple[tuple[int, ...], ...]          # one multiindex per factor
    assignment: tuple[int, ...]                 # m(outer), 1-based components

    def evaluate(self, g_derivs, f_derivs) -> float:
        try:
            val = float(self.constant) * float(g_derivs[self.outer])
            for alpha, comp in zip(self.inner, self.assignment):
                val *= float(f_derivs[comp - 1][alpha])
        except KeyError as missing:
            raise IncompleteInputError(
                f"derivative table is missing order {missing}"
            ) from None
        return val


def _differentiate(terms: dict, i: int, d: int, D: int) -> dict:
    """Apply one coordinate derivative to a collected term dictionary."""
    e_i = unit(d, i)
    new: dict = {}

    def add(groups, c):
        new[groups] = new.get(groups, 0) + c

    for groups, c in terms.items():
        # raise a g-slot: new first-order factor of that f-component
        for j in range(D):
            bumped = list(groups)
            bumped[j] = tuple(sorted(bumped[j] + (e_i,)))
            add(tuple(bumped), c)
        # raise an existing factor (once per occurrence)
        for j in range(D):
            group = groups[j]
            for idx in range(len(group)):
                alpha = tuple(a + b for a, b in zip(group[idx], e_i))
                bumped = list(groups)
                bumped[j] = tuple(sorted(group[:idx] + (alpha,) + group[idx + 1:]))
                add(tuple(bumped), c)
    return new


_cache: dict = {}
_cache_lock = threading.Lock()


def faa_terms(kbar, d: int, D: int) -> list[FaaTerm]:
    """Term list of D^kbar (g o f) for f: R^d -> R^D, g: R^D -> R.

    Evaluated with arbitrary derivative tables the terms sum to the
    mixed partial of the composition.  Orders above MAX_ORDER raise.
    """
    kbar = _as_tuple(kbar)
    if len(kbar) != d:
        raise ValueError(f"kbar has {len(kbar)} entries, expected d={d}")
    order = sum(kbar)
    if order < 1:
        raise ValueError("need |kbar| >= 1")
    if order > MAX_ORDER:
        raise CapabilityError(f"orders above {MAX_ORDER} are not supported")
    key = (kbar, d, D)
    with _cache_lock:
        hit = _cache.get(key)
    if hit is not None:
        return hit

    terms = {tuple(() for _ in range(D)): 1}
    for i, reps in enumerate(kbar):
        for _ in range(reps):
            terms = _differentiate(terms, i, d, D)

    out = []
    for groups, c in sorted(terms.items()):
        outer = tuple(len(g) for g in groups)
        inner = tuple(alpha for g in groups for alpha in g)
        out.append(FaaTerm(c, outer, inner, m_vector(outer)))
    with _cache_lock:
        _cache[key] = out
    return out


def eval_chain_derivative(g_derivs, f_derivs, kbar, d: int | None = None,
                          D: int | None = None) -> float:
    """Numeric D^kbar (g o f)(x) from derivative tables.

    g_derivs maps D-dimensional multiindex tuples to values of D^i g at
    f(x); f_derivs is a sequence of per-component tables of D^alpha f^m
    at x.  Bilinear in every derivative slot.
    """
    kbar = _as_tuple(kbar)
    d = d if d is not None else len(kbar)
    D = D if D is not None else len(f_derivs)
    return sum(t.evaluate(g_derivs, f_derivs) for t in faa_terms(kbar, d, D))
