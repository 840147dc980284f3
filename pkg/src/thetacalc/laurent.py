"""Exact arithmetic for integer Laurent polynomials and truncated series.

Polynomials live in ZZ[u^{±1}, q^{±1}, zeta^{±1}] with arbitrary-precision
integer coefficients.  Series are supported in one extra "infinite" variable
(z by default, zeta after root adjunction), with exponents unbounded below:
a series tracks a window of length K below a finite top exponent max_z, and
two series are compared only on exponents both of them track.

The text format is the output contract of the command line tool: terms are
sorted canonically (series exponent descending, then u, q, zeta exponents
descending), printed as ``c*z^d*u^n*q^m`` with unit coefficients and unit
exponents omitted, joined by `` + ``.  A trailing ``O(z^k)`` records the first
untracked exponent of a series.  ``parse_poly`` / ``parse_series`` invert it.
"""

from __future__ import annotations

import re

from .errors import DomainError

ALPHABET = ("u", "q", "zeta")
_VAR_ORDER = {name: i for i, name in enumerate(ALPHABET)}


class Monomial:
    """A product of powers of u, q, zeta; exponents may be negative.

    Normalized: zero exponents are never stored, so equal monomials compare
    and hash equal.
    """

    __slots__ = ("exps",)

    def __init__(self, exps=None, **kwargs):
        merged = dict(exps or {})
        merged.update(kwargs)
        for name in merged:
            if name not in _VAR_ORDER:
                raise DomainError(f"unknown variable {name!r}; allowed: {ALPHABET}")
        items = tuple(
            (name, int(e))
            for name, e in sorted(merged.items(), key=lambda kv: _VAR_ORDER[kv[0]])
            if int(e) != 0
        )
        object.__setattr__(self, "exps", items)

    def __setattr__(self, name, value):
        raise AttributeError("Monomial is immutable")

    def exponent(self, name: str) -> int:
        for var, e in self.exps:
            if var == name:
                return e
        return 0

    def is_one(self) -> bool:
        return not self.exps

    def __mul__(self, other: "Monomial") -> "Monomial":
        merged = dict(self.exps)
        for name, e in other.exps:
            merged[name] = merged.get(name, 0) + e
        return Monomial(merged)

    def __pow__(self, k: int) -> "Monomial":
        return Monomial({name: e * k for name, e in self.exps})

    def sort_key(self):
        # Descending on (u, q, zeta) exponents gives the canonical term order.
        return tuple(-self.exponent(name) for name in ALPHABET)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.exps == other.exps

    def __hash__(self):
        return hash(self.exps)

    def __repr__(self):
        if not self.exps:
            return "Monomial()"
        body = ", ".join(f"{name}={e}" for name, e in self.exps)
        return f"Monomial({body})"


_ONE = Monomial()


class LaurentPoly:
    """Integer Laurent polynomial, stored as {Monomial: nonzero coefficient}."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for mono, coef in (terms or {}).items():
            if not isinstance(mono, Monomial):
                mono = Monomial(mono)
            coef = int(coef)
            if coef:
                clean[mono] = clean.get(mono, 0) + coef
                if clean[mono] == 0:
                    del clean[mono]
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls({_ONE: c})

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls.const(1)

    @classmethod
    def var(cls, name: str, exp: int = 1, coef: int = 1) -> "LaurentPoly":
        return cls({Monomial({name: exp}): coef})

    @classmethod
    def monomial(cls, mono: Monomial, coef: int = 1) -> "LaurentPoly":
        return cls({mono: coef})

    # -- inspection --------------------------------------------------------

    def terms(self):
        """Terms as (Monomial, coefficient), canonically sorted."""
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def coefficient(self, mono: Monomial) -> int:
        return self._terms.get(mono, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def single_term(self):
        """(coefficient, Monomial) if the polynomial has exactly one term."""
        if len(self._terms) != 1:
            return None
        [(mono, coef)] = self._terms.items()
        return coef, mono

    def uses_variable(self, name: str) -> bool:
        return any(mono.exponent(name) != 0 for mono in self._terms)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        merged = dict(self._terms)
        for mono, coef in other._terms.items():
            s = merged.get(mono, 0) + coef
            if s:
                merged[mono] = s
            else:
                merged.pop(mono, None)
        return LaurentPoly(merged)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        prod: dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                s = prod.get(m, 0) + c1 * c2
                if s:
                    prod[m] = s
                else:
                    del prod[m]
        return LaurentPoly(prod)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative powers of general polynomials are not defined")
        result = LaurentPoly.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        return isinstance(other, LaurentPoly) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        return f"LaurentPoly({format_poly(self)!r})"

    def subs_q_one(self) -> "LaurentPoly":
        """Substitute q = 1, merging coefficients."""
        out: dict[Monomial, int] = {}
        for mono, coef in self._terms.items():
            stripped = Monomial({name: e for name, e in mono.exps if name != "q"})
            s = out.get(stripped, 0) + coef
            if s:
                out[stripped] = s
            else:
                del out[stripped]
        return LaurentPoly(out)


def _coerce(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot coerce {x!r} to LaurentPoly")


def poly_add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def poly_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


class LaurentSeries:
    """Series in var^{-1} with LaurentPoly coefficients and a tracked window.

    Coefficients are tracked for exponents d with max_z - trunc_order < d <=
    max_z; exponents above max_z are known to vanish, exponents at or below
    the window floor are unknown.  Equality compares only coefficients both
    sides know.
    """

    __slots__ = ("var", "coeffs", "max_z", "trunc_order")

    def __init__(self, coeffs, max_z: int, trunc_order: int, var: str = "z"):
        if trunc_order < 1:
            raise DomainError("trunc_order must be a positive integer")
        if var not in ("z", "zeta"):
            raise DomainError(f"series variable must be 'z' or 'zeta', got {var!r}")
        floor = max_z - trunc_order
        clean: dict[int, LaurentPoly] = {}
        for d, poly in coeffs.items():
            if not isinstance(poly, LaurentPoly):
                poly = _coerce(poly)
            if poly.is_zero():
                continue
            if not (floor < d <= max_z):
                raise DomainError(
                    f"exponent {d} outside tracked window ({floor}, {max_z}]"
                )
            clean[d] = poly
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "max_z", int(max_z))
        object.__setattr__(self, "trunc_order", int(trunc_order))

    def __setattr__(self, name, value):
        raise AttributeError("LaurentSeries is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def one(cls, trunc: int, var: str = "z") -> "LaurentSeries":
        return cls({0: LaurentPoly.one()}, max_z=0, trunc_order=trunc, var=var)

    @classmethod
    def zero(cls, trunc: int, max_z: int = 0, var: str = "z") -> "LaurentSeries":
        return cls({}, max_z=max_z, trunc_order=trunc, var=var)

    # -- window bookkeeping -------------------------------------------------

    @property
    def window_floor(self) -> int:
        """First untracked exponent below the window."""
        return self.max_z - self.trunc_order

    def tracked_exponents(self):
        return range(self.max_z, self.window_floor, -1)

    def coefficient(self, d: int) -> LaurentPoly:
        if d > self.max_z:
            return LaurentPoly.zero()
        if d <= self.window_floor:
            raise DomainError(f"coefficient of exponent {d} is not tracked")
        return self.coeffs.get(d, LaurentPoly.zero())

    def window_equal(self, other: "LaurentSeries") -> bool:
        """Equality on every exponent known to both series."""
        if self.var != other.var:
            return False
        floor = max(self.window_floor, other.window_floor)
        top = max(self.max_z, other.max_z)
        for d in range(top, floor, -1):
            if self.coefficient(d) != other.coefficient(d):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.window_equal(other)

    __hash__ = None

    def __repr__(self):
        return f"LaurentSeries({format_series(self)!r})"

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        if self.var != other.var:
            raise DomainError("cannot add series in different variables")
        floor = max(self.window_floor, other.window_floor)
        top = max(self.max_z, other.max_z)
        coeffs = {d: self.coefficient(d) + other.coefficient(d) for d in range(top, floor, -1)}
        return LaurentSeries(coeffs, max_z=top, trunc_order=top - floor, var=self.var)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + other.scale(0, LaurentPoly.const(-1))

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        return series_mul(self, other)

    def scale(self, shift: int, factor=None) -> "LaurentSeries":
        """Multiply by factor * var**shift; the window shifts along."""
        factor = LaurentPoly.one() if factor is None else _coerce(factor)
        if factor.is_zero():
            return LaurentSeries.zero(self.trunc_order, max_z=self.max_z + shift, var=self.var)
        coeffs = {d + shift: poly * factor for d, poly in self.coeffs.items()}
        return LaurentSeries(
            coeffs, max_z=self.max_z + shift, trunc_order=self.trunc_order, var=self.var
        )

    def subs_q_one(self) -> "LaurentSeries":
        return LaurentSeries(
            {d: p.subs_q_one() for d, p in self.coeffs.items()},
            max_z=self.max_z,
            trunc_order=self.trunc_order,
            var=self.var,
        )


def series_mul(s: LaurentSeries, t: LaurentSeries) -> LaurentSeries:
    """Product series; the window length is the smaller of the two inputs'."""
    if s.var != t.var:
        raise DomainError("cannot multiply series in different variables")
    max_z = s.max_z + t.max_z
    trunc = min(s.trunc_order, t.trunc_order)
    floor = max_z - trunc
    coeffs: dict[int, LaurentPoly] = {}
    for d1, p1 in s.coeffs.items():
        for d2, p2 in t.coeffs.items():
            d = d1 + d2
            if d <= floor:
                continue
            prod = p1 * p2
            if d in coeffs:
                coeffs[d] = coeffs[d] + prod
            else:
                coeffs[d] = prod
    return LaurentSeries(coeffs, max_z=max_z, trunc_order=trunc, var=s.var)


def geom_invert(g: LaurentPoly, trunc: int, var: str = "z") -> LaurentSeries:
    """Expansion of 1/(1 - var^{-1} * g) to trunc terms, with max_z = 0."""
    if trunc < 1:
        raise DomainError("trunc must be a positive integer")
    coeffs: dict[int, LaurentPoly] = {}
    power = LaurentPoly.one()
    for k in range(trunc):
        if power.is_zero():
            break
        coeffs[-k] = power
        power = power * g
    return LaurentSeries(coeffs, max_z=0, trunc_order=trunc, var=var)


def set_q_to_one(p):
    """Substitute q = 1 in a LaurentPoly or LaurentSeries."""
    if isinstance(p, LaurentPoly):
        return p.subs_q_one()
    if isinstance(p, LaurentSeries):
        return p.subs_q_one()
    raise TypeError(f"expected LaurentPoly or LaurentSeries, got {type(p).__name__}")


def adjoin_zeta(s: LaurentSeries, a: int) -> LaurentSeries:
    """Rewrite a z-series through z = zeta^{2a}; the window scales by 2a.

    The input must not already involve q or zeta in its coefficients.
    """
    if a < 1:
        raise DomainError("a must be a positive integer")
    if s.var != "z":
        raise DomainError("adjoin_zeta expects a series in z")
    for poly in s.coeffs.values():
        if poly.uses_variable("q") or poly.uses_variable("zeta"):
            raise DomainError("adjoin_zeta input must use variables u, z only")
    coeffs = {2 * a * d: poly for d, poly in s.coeffs.items()}
    return LaurentSeries(
        coeffs, max_z=2 * a * s.max_z, trunc_order=2 * a * s.trunc_order, var="zeta"
    )


def restrict_zeta(s: LaurentSeries, a: int) -> LaurentSeries:
    """Inverse of adjoin_zeta: collapse zeta^{2a} back to z.

    Rejects series with nonzero coefficients at exponents not divisible by 2a.
    """
    if s.var != "zeta":
        raise DomainError("restrict_zeta expects a series in zeta")
    step = 2 * a
    coeffs = {}
    for d, poly in s.coeffs.items():
        if d % step:
            raise DomainError(f"exponent {d} is not a multiple of {step}")
        coeffs[d // step] = poly
    if s.max_z % step or s.trunc_order % step:
        raise DomainError("window is not aligned to the zeta substitution")
    return LaurentSeries(
        coeffs, max_z=s.max_z // step, trunc_order=s.trunc_order // step, var="z"
    )


# -- text format ------------------------------------------------------------


def _format_term(coef: int, series_part, mono: Monomial) -> str:
    factors = []
    if series_part is not None:
        var, d = series_part
        factors.append(var if d == 1 else f"{var}^{d}")
    for name, e in mono.exps:
        factors.append(name if e == 1 else f"{name}^{e}")
    if not factors:
        return str(coef)
    body = "*".join(factors)
    if coef == 1:
        return body
    if coef == -1:
        return "-" + body
    return f"{coef}*{body}"


def format_poly(p: LaurentPoly) -> str:
    terms = p.terms()
    if not terms:
        return "0"
    return " + ".join(_format_term(c, None, m) for m, c in terms)


def format_series(s: LaurentSeries) -> str:
    parts = []
    for d in s.tracked_exponents():
        poly = s.coeffs.get(d)
        if poly is None:
            continue
        for mono, coef in poly.terms():
            parts.append(_format_term(coef, None if d == 0 else (s.var, d), mono))
    parts.append(f"O({s.var}^{s.window_floor})")
    return " + ".join(parts)


_TERM_RE = re.compile(r"^(-?\d+)?(?:\*?((?:[a-z]+(?:\^-?\d+)?)(?:\*[a-z]+(?:\^-?\d+)?)*))?$")
_O_RE = re.compile(r"^O\((z|zeta)\^(-?\d+)\)$")


def _parse_term(text: str):
    """-> (coefficient, {var: exponent}); raises DomainError on bad syntax."""
    text = text.strip()
    neg = False
    if text.startswith("-") and not text[1:2].isdigit():
        neg, text = True, text[1:]
    m = _TERM_RE.match(text)
    if not m or (m.group(1) is None and m.group(2) is None):
        raise DomainError(f"cannot parse term {text!r}")
    coef = int(m.group(1)) if m.group(1) is not None else 1
    if neg:
        coef = -coef
    exps: dict[str, int] = {}
    if m.group(2):
        for factor in m.group(2).split("*"):
            if "^" in factor:
                name, _, e = factor.partition("^")
                exp = int(e)
            else:
                name, exp = factor, 1
            if name not in ("z", "zeta", "u", "q"):
                raise DomainError(f"unknown variable {name!r} in term {text!r}")
            exps[name] = exps.get(name, 0) + exp
    return coef, exps


def parse_poly(text: str) -> LaurentPoly:
    total = LaurentPoly.zero()
    for chunk in text.split(" + "):
        coef, exps = _parse_term(chunk)
        if "z" in exps:
            raise DomainError("series variable z not allowed in a polynomial")
        total = total + LaurentPoly.monomial(Monomial(exps), coef)
    return total


def parse_series(text: str, var: str | None = None) -> LaurentSeries:
    """Parse the series text format; a trailing O(var^k) sets the window."""
    chunks = [c.strip() for c in text.split(" + ")]
    floor = None
    terms = []
    for chunk in chunks:
        om = _O_RE.match(chunk)
        if om:
            if var is None:
                var = om.group(1)
            elif var != om.group(1):
                raise DomainError("O-marker variable does not match series variable")
            floor = int(om.group(2))
            continue
        if chunk == "0":
            continue
        coef, exps = _parse_term(chunk)
        if "z" in exps and "zeta" in exps:
            raise DomainError("term mixes z and zeta")
        if var is None and "z" in exps:
            var = "z"
        terms.append((coef, exps))
    if var is None:
        var = "z"
    coeffs: dict[int, LaurentPoly] = {}
    for coef, exps in terms:
        d = exps.pop(var, 0)
        poly = LaurentPoly.monomial(Monomial(exps), coef)
        coeffs[d] = coeffs.get(d, LaurentPoly.zero()) + poly
    coeffs = {d: p for d, p in coeffs.items() if not p.is_zero()}
    if coeffs:
        top = max(coeffs)
    elif floor is not None:
        top = floor + 1
    else:
        top = 0
    if floor is None:
        floor = min(coeffs) - 1 if coeffs else top - 1
    return LaurentSeries(coeffs, max_z=top, trunc_order=top - floor, var=var)
