"""Exact truncated multivariate polynomials over the rationals.

Every symbolic object in the package (group laws, vector fields, forms) is
built from :class:`TruncatedPoly`.  A polynomial lives on a :class:`Chart`
and never stores a monomial whose total degree exceeds its truncation
degree.

Monomials are stored as sorted tuples of variable indices with repetition,
so ``x0**2 * x3`` is ``(0, 0, 3)`` and the total degree is ``len(mono)``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "ChartError",
    "Chart",
    "TruncatedPoly",
    "ROLES",
]

ROLES = (
    "time",
    "space",
    "velocity",
    "momentum",
    "rotation",
    "metric-perturbation",
    "potential",
    "phase",
    "generic",
)


class ChartError(ValueError):
    """Raised when polynomials from different charts are combined or an
    unknown coordinate is referenced."""


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating-point coefficients are not allowed in TruncatedPoly")
    return Fraction(value)


class Chart:
    """Ordered list of named coordinates with physical roles."""

    __slots__ = ("names", "roles", "_index", "_hash")

    def __init__(self, coordinates: Iterable[tuple[str, str] | str]):
        names, roles = [], []
        for item in coordinates:
            if isinstance(item, str):
                name, role = item, "generic"
            else:
                name, role = item
            if role not in ROLES:
                raise ChartError(f"unknown coordinate role {role!r}")
            names.append(name)
            roles.append(role)
        if len(set(names)) != len(names):
            raise ChartError(f"duplicate coordinate names in {names}")
        self.names = tuple(names)
        self.roles = tuple(roles)
        self._index = {n: i for i, n in enumerate(names)}
        self._hash = hash((self.names, self.roles))

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        return isinstance(other, Chart) and self.names == other.names and self.roles == other.roles

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Chart({list(zip(self.names, self.roles))!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ChartError(f"coordinate {name!r} not in chart {self.names}") from None

    def role(self, name: str) -> str:
        return self.roles[self.index(name)]

    def coordinates(self) -> list[tuple[str, str]]:
        return list(zip(self.names, self.roles))

    def phase(self) -> str | None:
        found = [n for n, r in zip(self.names, self.roles) if r == "phase"]
        if len(found) > 1:
            raise ChartError("chart has more than one phase coordinate")
        return found[0] if found else None

    def renamed(self, suffix: str) -> "Chart":
        return Chart((n + suffix, r) for n, r in zip(self.names, self.roles))

    def restricted(self, names: Iterable[str]) -> "Chart":
        keep = set(names)
        return Chart((n, r) for n, r in zip(self.names, self.roles) if n in keep)

    def __add__(self, other: "Chart") -> "Chart":
        return Chart(self.coordinates() + other.coordinates())


def _mono_key(mono: tuple[int, ...], nvars: int) -> tuple[int, ...]:
    exps = [0] * nvars
    for i in mono:
        exps[i] += 1
    return tuple(exps)


class TruncatedPoly:
    """Immutable polynomial with Fraction coefficients truncated at a total degree."""

    __slots__ = ("chart", "terms", "degree")

    def __init__(self, chart: Chart, terms: Mapping[tuple[int, ...], object] | None = None, degree: int = 3):
        if degree < 0:
            raise ValueError("truncation degree must be >= 0")
        clean = {}
        if terms:
            for mono, c in terms.items():
                if len(mono) > degree:
                    continue
                c = _as_fraction(c)
                if c:
                    clean[tuple(sorted(mono))] = c
        self.chart = chart
        self.terms = clean
        self.degree = degree

    @classmethod
    def _raw(cls, chart, terms, degree):
        # terms already sorted, truncated and zero-free
        obj = cls.__new__(cls)
        obj.chart = chart
        obj.terms = terms
        obj.degree = degree
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, chart: Chart, degree: int = 3) -> "TruncatedPoly":
        return cls._raw(chart, {}, degree)

    @classmethod
    def const(cls, chart: Chart, value, degree: int = 3) -> "TruncatedPoly":
        value = _as_fraction(value)
        return cls._raw(chart, {(): value} if value else {}, degree)

    @classmethod
    def var(cls, chart: Chart, name: str, degree: int = 3) -> "TruncatedPoly":
        if degree < 1:
            return cls.zero(chart, degree)
        return cls._raw(chart, {(chart.index(name),): Fraction(1)}, degree)

    @classmethod
    def variables(cls, chart: Chart, degree: int = 3) -> dict[str, "TruncatedPoly"]:
        return {n: cls.var(chart, n, degree) for n in chart.names}

    # -- basic queries ------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def min_degree(self) -> int | None:
        return min((len(m) for m in self.terms), default=None)

    def max_degree(self) -> int | None:
        return max((len(m) for m in self.terms), default=None)

    def homogeneous(self, d: int) -> "TruncatedPoly":
        return TruncatedPoly._raw(self.chart, {m: c for m, c in self.terms.items() if len(m) == d}, self.degree)

    def truncate(self, d: int) -> "TruncatedPoly":
        d = min(d, self.degree)
        return TruncatedPoly._raw(self.chart, {m: c for m, c in self.terms.items() if len(m) <= d}, d)

    def with_degree(self, d: int) -> "TruncatedPoly":
        """Same terms, new truncation degree (dropping anything above it)."""
        return TruncatedPoly._raw(self.chart, {m: c for m, c in self.terms.items() if len(m) <= d}, d)

    def variables_used(self) -> set[str]:
        return {self.chart.names[i] for m in self.terms for i in m}

    def exponents(self) -> dict[tuple[int, ...], Fraction]:
        n = len(self.chart)
        return {_mono_key(m, n): c for m, c in self.terms.items()}

    def coefficient(self, monomial: Mapping[str, int] | str) -> Fraction:
        """Coefficient of a monomial given as ``{"x": 2, "t": 1}`` or ``"t*x^2"``."""
        if isinstance(monomial, str):
            monomial = _parse_monomial(monomial)
        mono = []
        for name, e in monomial.items():
            mono.extend([self.chart.index(name)] * e)
        return self.terms.get(tuple(sorted(mono)), Fraction(0))

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "TruncatedPoly"):
        if self.chart != other.chart:
            raise ChartError("polynomials live on different charts")

    def _coerce(self, other):
        if isinstance(other, TruncatedPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return TruncatedPoly.const(self.chart, other, self.degree)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        deg = min(self.degree, other.degree)
        out = {m: c for m, c in self.terms.items() if len(m) <= deg}
        for m, c in other.terms.items():
            if len(m) > deg:
                continue
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return TruncatedPoly._raw(self.chart, out, deg)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedPoly._raw(self.chart, {m: -c for m, c in self.terms.items()}, self.degree)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k) -> "TruncatedPoly":
        k = _as_fraction(k)
        if not k:
            return TruncatedPoly._raw(self.chart, {}, self.degree)
        return TruncatedPoly._raw(self.chart, {m: c * k for m, c in self.terms.items()}, self.degree)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, TruncatedPoly):
            return NotImplemented
        self._check(other)
        deg = min(self.degree, other.degree)
        if not self.terms or not other.terms:
            return TruncatedPoly._raw(self.chart, {}, deg)
        by_deg: dict[int, list] = {}
        for m, c in other.terms.items():
            by_deg.setdefault(len(m), []).append((m, c))
        out: dict = {}
        for ma, ca in self.terms.items():
            room = deg - len(ma)
            if room < 0:
                continue
            for d, items in by_deg.items():
                if d > room:
                    continue
                for mb, cb in items:
                    if not ma:
                        m = mb
                    elif not mb:
                        m = ma
                    else:
                        m = tuple(sorted(ma + mb))
                    out[m] = out.get(m, 0) + ca * cb
        return TruncatedPoly._raw(self.chart, {m: c for m, c in out.items() if c}, deg)

    __rmul__ = __mul__

    def __truediv__(self, k):
        if isinstance(k, (int, Fraction)):
            return self.scale(Fraction(1) / _as_fraction(k))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = TruncatedPoly.const(self.chart, 1, self.degree)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncatedPoly.const(self.chart, other, self.degree)
        if not isinstance(other, TruncatedPoly):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __hash__(self):
        return hash((self.chart, frozenset(self.terms.items())))

    # -- calculus -----------------------------------------------------
    def partial(self, name: str) -> "TruncatedPoly":
        i = self.chart.index(name)
        out = {}
        for m, c in self.terms.items():
            k = m.count(i)
            if k:
                lst = list(m)
                lst.remove(i)
                out[tuple(lst)] = c * k
        return TruncatedPoly._raw(self.chart, out, self.degree)

    def antiderivative(self, name: str) -> "TruncatedPoly":
        """Formal antiderivative in one variable, vanishing at name = 0."""
        i = self.chart.index(name)
        out = {}
        for m, c in self.terms.items():
            k = m.count(i)
            out[tuple(sorted(m + (i,)))] = c / (k + 1)
        return TruncatedPoly(self.chart, out, self.degree + 1)

    # -- composition --------------------------------------------------
    def substitute(self, bindings: Mapping[str, "TruncatedPoly"], target: Chart | None = None,
                   degree: int | None = None) -> "TruncatedPoly":
        """Compose with polynomial bindings.

        Unbound coordinates are carried over by name into ``target``.  The
        result is truncated at ``degree`` (default: the smaller of this
        polynomial's degree and the bindings' degrees).
        """
        for name in bindings:
            self.chart.index(name)
        if target is None:
            charts = {b.chart for b in bindings.values()}
            if len(charts) > 1:
                raise ChartError("binding polynomials do not share a target chart")
            target = charts.pop() if charts else self.chart
        if degree is None:
            degree = min([self.degree] + [b.degree for b in bindings.values()])
        images = []
        for name in self.chart.names:
            if name in bindings:
                b = bindings[name]
                if b.chart != target:
                    raise ChartError(f"binding for {name!r} lives on a different chart")
                images.append(b.with_degree(degree) if b.degree != degree else b)
            elif name in target:
                images.append(TruncatedPoly.var(target, name, degree))
            else:
                images.append(None)
        cache: dict[tuple[int, ...], TruncatedPoly] = {(): TruncatedPoly.const(target, 1, degree)}

        def power_product(mono):
            hit = cache.get(mono)
            if hit is not None:
                return hit
            img = images[mono[-1]]
            if img is None:
                raise ChartError(f"coordinate {self.chart.names[mono[-1]]!r} is unbound and absent from target chart")
            val = power_product(mono[:-1]) * img
            cache[mono] = val
            return val

        acc: dict = {}
        for m, c in sorted(self.terms.items()):
            for mm, cc in power_product(m).terms.items():
                acc[mm] = acc.get(mm, 0) + c * cc
        return TruncatedPoly._raw(target, {m: c for m, c in acc.items() if c}, degree)

    def rename(self, target: Chart, mapping: Mapping[str, str] | None = None) -> "TruncatedPoly":
        """Move to another chart by coordinate name (optionally remapped)."""
        mapping = mapping or {}
        idx = []
        for n in self.chart.names:
            new = mapping.get(n, n)
            idx.append(target.index(new) if new in target else None)
        out = {}
        for m, c in self.terms.items():
            try:
                nm = tuple(sorted(idx[i] for i in m))
            except TypeError:
                raise ChartError("polynomial uses coordinates missing from target chart") from None
            out[nm] = c
        return TruncatedPoly._raw(target, out, self.degree)

    def evaluate(self, point: Mapping[str, object]):
        """Evaluate at a point (missing coordinates are zero).  Exact for Fraction inputs."""
        vals = [point.get(n, 0) for n in self.chart.names]
        total = 0
        for m, c in self.terms.items():
            term = c
            for i in m:
                term = term * vals[i]
            total = total + term
        return total

    # -- text ---------------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        n = len(self.chart)
        return sorted(self.terms.items(), key=lambda mc: _mono_key(mc[0], n), reverse=True)

    def to_text(self) -> str:
        """Canonical text: terms in descending lexicographic multi-index order,
        rational coefficients written ``num/den``, e.g. ``x - 1/2*t*v1^2``."""
        if not self.terms:
            return "0"
        parts = []
        n = len(self.chart)
        for k, (m, c) in enumerate(self.sorted_terms()):
            exps = _mono_key(m, n)
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(self.chart.names[i])
                elif e > 1:
                    factors.append(f"{self.chart.names[i]}^{e}")
            mag = abs(c)
            coef = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            if factors:
                body = "*".join(factors) if mag == 1 else coef + "*" + "*".join(factors)
            else:
                body = coef
            if k == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"TruncatedPoly({self.to_text()!r}, degree={self.degree})"

    @classmethod
    def from_text(cls, text: str, chart: Chart, degree: int = 3) -> "TruncatedPoly":
        """Parse the canonical text format (inverse of :meth:`to_text`)."""
        s = text.replace(" ", "")
        if s in ("", "0"):
            return cls.zero(chart, degree)
        if s[0] not in "+-":
            s = "+" + s
        terms: dict = {}
        for sign, body in re.findall(r"([+-])([^+-]+)", s):
            coef = Fraction(1)
            mono = []
            for factor in body.split("*"):
                if re.fullmatch(r"\d+(/\d+)?", factor):
                    coef *= Fraction(factor)
                    continue
                name, _, exp = factor.partition("^")
                mono.extend([chart.index(name)] * (int(exp) if exp else 1))
            if sign == "-":
                coef = -coef
            key = tuple(sorted(mono))
            terms[key] = terms.get(key, 0) + coef
        return cls(chart, terms, degree)


def _parse_monomial(text: str) -> dict[str, int]:
    out: dict[str, int] = {}
    text = text.replace(" ", "")
    if text in ("", "1"):
        return out
    for factor in text.split("*"):
        name, _, exp = factor.partition("^")
        out[name] = out.get(name, 0) + (int(exp) if exp else 1)
    return out


def poly_vector_text(components: Mapping[str, TruncatedPoly], order: Sequence[str]) -> str:
    lines = []
    for name in order:
        p = components.get(name)
        if p is not None and not p.is_zero():
            lines.append(f"{name}: {p.to_text()}")
    return "\n".join(lines)
