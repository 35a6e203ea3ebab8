"""Deterministic text rendering of SuperPoly values; inverse of the parser."""
from __future__ import annotations

from fractions import Fraction

from ..supercore import Family, SuperPoly

_FAMILY_ORDER = {Family.BASE: 0, Family.FIBRE: 1, Family.COFIBRE: 2, Family.MOMENTUM: 3}


def _factor_key(sp, m):
    return tuple((_FAMILY_ORDER[g.family], g.index) for g in sp.monomial_factors(m))


def _monomial_text(sp, m) -> str:
    parts = []
    run = None
    count = 0
    for g in sp.monomial_factors(m) + [None]:
        if g == run:
            count += 1
            continue
        if run is not None:
            parts.append(f"{run}^{count}" if count > 1 else str(run))
        run, count = g, 1
    return "*".join(parts)


def _coeff_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def sorted_terms(F: SuperPoly):
    sp = F.space
    return sorted(F.terms.items(),
                  key=lambda mc: (sp.monomial_bidegree(mc[0]), _factor_key(sp, mc[0])))


def print_expression(F: SuperPoly) -> str:
    """Canonical rendering, e.g. ``x1^2*xi1 - 1/2*th1*th2``; zero prints as ``0``."""
    if not F.terms:
        return "0"
    sp = F.space
    out = []
    for i, (m, c) in enumerate(sorted_terms(F)):
        mono = _monomial_text(sp, m)
        mag = abs(c)
        if not mono:
            body = _coeff_text(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_coeff_text(mag)}*{mono}"
        if i == 0:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(out)
