"""Dense polynomials with exact rational coefficients.

``Poly`` is univariate (index = power), ``BiPoly`` bivariate with a
coefficient matrix ``c[i][j]`` for ``x**i * y**j``.  Coefficients are Python
ints or :class:`fractions.Fraction`; floats are rejected so that identity
checks never pick up rounding.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

__all__ = [
    "Poly",
    "BiPoly",
    "as_rational",
    "format_rational",
    "binomial_power",
    "sturm_sequence",
    "isolate_real_roots",
]

Number = Union[int, Fraction]


def as_rational(a) -> Number:
    """Coerce to int/Fraction; strings like ``"3/4"`` are accepted."""
    if isinstance(a, bool):
        return int(a)
    if isinstance(a, int):
        return a
    if isinstance(a, Fraction):
        return a.numerator if a.denominator == 1 else a
    if isinstance(a, Rational):
        return as_rational(Fraction(a.numerator, a.denominator))
    if isinstance(a, str):
        return as_rational(Fraction(a.strip()))
    raise TypeError(f"exact rational expected, got {type(a).__name__}")


def format_rational(a) -> str:
    a = Fraction(a)
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def _strip(coeffs: list) -> tuple:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    """Univariate polynomial ``c[0] + c[1] z + ...``; immutable and hashable."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs: tuple = _strip([as_rational(c) for c in coeffs])

    @classmethod
    def _raw(cls, coeffs: list) -> Poly:
        p = object.__new__(cls)
        p.coeffs = _strip(coeffs)
        return p

    @classmethod
    def const(cls, c) -> Poly:
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> Poly:
        return cls([0] * k + [c])

    @classmethod
    def z(cls) -> Poly:
        return cls([0, 1])

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({self.render()})"

    def __str__(self) -> str:
        return self.render()

    # -- ring operations ---------------------------------------------------

    @staticmethod
    def _coerce(other) -> Poly | None:
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return None

    def __add__(self, other) -> Poly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw([-c for c in self.coeffs])

    def __sub__(self, other) -> Poly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> Poly:
        return (-self) + other

    def __mul__(self, other) -> Poly:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return Poly._raw(out)

    __rmul__ = __mul__

    def scale(self, c) -> Poly:
        c = as_rational(c)
        return Poly._raw([c * a for a in self.coeffs])

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative power")
        result, base = Poly.const(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_zpow(self, k: int) -> Poly:
        """Multiply by ``z**k``; negative ``k`` requires divisibility."""
        if k >= 0:
            return Poly._raw([0] * k + list(self.coeffs))
        if any(self.coeffs[: -k]):
            raise ValueError(f"not divisible by z^{-k}")
        return Poly._raw(list(self.coeffs[-k:]))

    def shift(self, a) -> Poly:
        """``p(z + a)`` by Horner composition."""
        a = as_rational(a)
        lin = Poly([a, 1])
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def compose(self, q: Poly) -> Poly:
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * q + c
        return out

    def derivative(self) -> Poly:
        return Poly._raw([k * c for k, c in enumerate(self.coeffs)][1:])

    # -- evaluation --------------------------------------------------------

    def eval_exact(self, a) -> Number:
        a = as_rational(a)
        acc: Number = 0
        for c in reversed(self.coeffs):
            acc = acc * a + c
        return as_rational(acc)

    __call__ = eval_exact

    def eval_float(self, a: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * a + float(c)
        return acc

    # -- Euclidean algorithm (field arithmetic over Q) ---------------------

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = [Fraction(c) for c in self.coeffs]
        lead = Fraction(other.leading)
        dq = other.degree
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - dq - 1, -1, -1):
            c = rem[k + dq] / lead
            if c:
                quot[k] = c
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Poly(quot), Poly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other: Poly) -> Poly:
        return self.divmod(other)[0]

    def __mod__(self, other: Poly) -> Poly:
        return self.divmod(other)[1]

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        return self.scale(Fraction(1) / Fraction(self.leading))

    def gcd(self, other: Poly) -> Poly:
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def squarefree_factors(self) -> list[tuple[Poly, int]]:
        """Yun's algorithm: ``[(f_k, k)]`` with ``p = c * prod f_k**k``."""
        if self.degree < 1:
            return []
        out = []
        a = self.monic()
        b = a.gcd(a.derivative())
        c = a // b
        k = 1
        while c.degree > 0:
            y = c.gcd(b)
            f = c // y
            if f.degree > 0:
                out.append((f.monic(), k))
            b = b // y
            c = y
            k += 1
        return out

    # -- rendering ---------------------------------------------------------

    def render(self, var: str = "z") -> str:
        """Text form ``"3*z^2 - 1/2*z + 4"``, highest power first."""
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = format_rational(abs(c))
            if k == 0:
                term = mag
            else:
                mono = var if k == 1 else f"{var}^{k}"
                term = mono if mag == "1" else f"{mag}*{mono}"
            if not parts:
                parts.append(term if sign == "+" else f"-{term}")
            else:
                parts.append(f"{sign} {term}")
        return " ".join(parts)


def binomial_power(a, k: int) -> Poly:
    """``(z + a)**k`` expanded."""
    return Poly([a, 1]) ** k


class BiPoly:
    """Bivariate polynomial with coefficient matrix ``c[i][j]`` of ``x^i y^j``."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable] = ()):
        self.rows: tuple[tuple, ...] = self._normalize([[as_rational(c) for c in r] for r in rows])

    @staticmethod
    def _normalize(rows: list[list]) -> tuple[tuple, ...]:
        width = 0
        for r in rows:
            for j in range(len(r) - 1, -1, -1):
                if r[j] != 0:
                    width = max(width, j + 1)
                    break
        out = [tuple(r[:width]) + (0,) * (width - len(r[:width])) for r in rows]
        while out and not any(out[-1]):
            out.pop()
        return tuple(out)

    @classmethod
    def from_dict(cls, terms: dict[tuple[int, int], Number]) -> BiPoly:
        if not terms:
            return cls()
        nx = max(i for i, _ in terms) + 1
        ny = max(j for _, j in terms) + 1
        rows = [[0] * ny for _ in range(nx)]
        for (i, j), c in terms.items():
            rows[i][j] += c
        return cls(rows)

    @classmethod
    def x(cls) -> BiPoly:
        return cls([[0], [1]])

    @classmethod
    def y(cls) -> BiPoly:
        return cls([[0, 1]])

    @classmethod
    def const(cls, c) -> BiPoly:
        return cls([[c]])

    def to_dict(self) -> dict[tuple[int, int], Number]:
        return {(i, j): c for i, r in enumerate(self.rows) for j, c in enumerate(r) if c != 0}

    def coefficient(self, i: int, j: int) -> Number:
        if 0 <= i < len(self.rows) and 0 <= j < len(self.rows[i]):
            return self.rows[i][j]
        return 0

    def matrix(self) -> list[list[Number]]:
        return [list(r) for r in self.rows]

    @property
    def degree_x(self) -> int:
        return len(self.rows) - 1

    @property
    def degree_y(self) -> int:
        return len(self.rows[0]) - 1 if self.rows else -1

    def is_zero(self) -> bool:
        return not self.rows

    def __eq__(self, other) -> bool:
        if isinstance(other, BiPoly):
            return self.rows == other.rows
        if isinstance(other, (int, Fraction)):
            return self.rows == BiPoly.const(other).rows
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"BiPoly({self.render()})"

    def _coerce(self, other) -> BiPoly | None:
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return BiPoly.const(other)
        return None

    def __add__(self, other) -> BiPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = self.to_dict()
        for k, c in o.to_dict().items():
            terms[k] = terms.get(k, 0) + c
        return BiPoly.from_dict(terms)

    __radd__ = __add__

    def __neg__(self) -> BiPoly:
        return BiPoly([[-c for c in r] for r in self.rows])

    def __sub__(self, other) -> BiPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __mul__(self, other) -> BiPoly:
        if isinstance(other, (int, Fraction)):
            return BiPoly([[c * other for c in r] for r in self.rows])
        if not isinstance(other, BiPoly):
            return NotImplemented
        terms: dict[tuple[int, int], Number] = {}
        b = other.to_dict()
        for (i, j), c in self.to_dict().items():
            for (k, l), d in b.items():
                terms[(i + k, j + l)] = terms.get((i + k, j + l), 0) + c * d
        return BiPoly.from_dict(terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> BiPoly:
        out = BiPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def eval_exact(self, a, b) -> Number:
        a, b = as_rational(a), as_rational(b)
        acc: Number = 0
        for r in reversed(self.rows):
            inner: Number = 0
            for c in reversed(r):
                inner = inner * b + c
            acc = acc * a + inner
        return as_rational(acc)

    __call__ = eval_exact

    def eval_float(self, a: float, b: float) -> float:
        acc = 0.0
        for r in reversed(self.rows):
            inner = 0.0
            for c in reversed(r):
                inner = inner * b + float(c)
            acc = acc * a + inner
        return acc

    def at_y(self, b) -> Poly:
        """Specialize ``y = b``; result is a polynomial in ``x``."""
        b = as_rational(b)
        return Poly([Poly(r).eval_exact(b) for r in self.rows])

    def at_x(self, a) -> Poly:
        """Specialize ``x = a``; result is a polynomial in ``y``."""
        a = as_rational(a)
        width = len(self.rows[0]) if self.rows else 0
        return Poly([Poly([r[j] for r in self.rows]).eval_exact(a) for j in range(width)])

    def render(self, xvar: str = "x", yvar: str = "y") -> str:
        terms = sorted(self.to_dict().items(), key=lambda t: (-(t[0][0] + t[0][1]), -t[0][0]))
        if not terms:
            return "0"
        parts: list[str] = []
        for (i, j), c in terms:
            mono = "*".join(
                s
                for s in (
                    "" if i == 0 else (xvar if i == 1 else f"{xvar}^{i}"),
                    "" if j == 0 else (yvar if j == 1 else f"{yvar}^{j}"),
                )
                if s
            )
            mag = format_rational(abs(c))
            term = mag if not mono else (mono if mag == "1" else f"{mag}*{mono}")
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(("+ " if c > 0 else "- ") + term)
        return " ".join(parts)


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(-r)
    return seq


def sign_changes(seq: Sequence[Poly], a) -> int:
    signs = []
    for q in seq:
        v = q.eval_exact(a)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def root_bound(p: Poly) -> Fraction:
    """Cauchy bound: every root has modulus below this value."""
    lead = abs(Fraction(p.leading))
    return 1 + max((abs(Fraction(c)) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(p: Poly, tol: float = 1e-12) -> list[float]:
    """Distinct real roots of ``p`` by Sturm counting and exact bisection.

    ``p`` should be square-free; roots are refined until the bracketing
    interval is narrower than ``tol``.
    """
    if p.degree < 1:
        return []
    seq = sturm_sequence(p)
    bound = root_bound(p)

    def count(a: Fraction, b: Fraction) -> int:
        return sign_changes(seq, a) - sign_changes(seq, b)

    roots: list[float] = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        k = count(a, b)
        if k == 0:
            continue
        if k == 1:
            roots.append(_refine(p, a, b, tol))
            continue
        mid = (a + b) / 2
        if p.eval_exact(mid) == 0:
            roots.append(float(mid))
            eps = (b - a) / 2**20
            while count(mid - eps, mid + eps) != 1:
                eps /= 2
            stack.append((a, mid - eps))
            stack.append((mid + eps, b))
        else:
            stack.append((a, mid))
            stack.append((mid, b))
    return sorted(roots)


def _refine(p: Poly, a: Fraction, b: Fraction, tol: float) -> float:
    # exactly one simple root in (a, b]
    fb = p.eval_exact(b)
    if fb == 0:
        return float(b)
    sb = fb > 0
    while b - a > tol:
        mid = (a + b) / 2
        fm = p.eval_exact(mid)
        if fm == 0:
            return float(mid)
        if (fm > 0) == sb:
            b = mid
        else:
            a = mid
    return float((a + b) / 2)
