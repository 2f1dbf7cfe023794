"""Exact symbolic values that appear at the reporting boundary.

Two shapes are enough: ``k``-th roots of nonnegative rationals (capacities)
and rational linear combinations ``a + b*pi`` (Taylor coefficients,
capacity scale factors). Comparisons never use floats; pi is enclosed by
rational bounds that are refined until the comparison resolves.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from math import inf

__all__ = [
    "Radical", "RadicalInterval", "PiLinear", "pi_bounds", "iroot",
    "root_bounds", "decimal_str", "fmt_rat", "parse_rat", "parse_pilinear",
]

PI_LO = Fraction(223, 71)
PI_HI = Fraction(22, 7)


def fmt_rat(x) -> str:
    if x == inf:
        return "+inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rat(text, field: str = "value") -> Fraction:
    """Parse ``"p/q"`` or an integer; reject floats and zero denominators."""
    if isinstance(text, bool):
        raise ValueError(f"{field}: expected a rational, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if isinstance(text, float):
        raise ValueError(f"{field}: floats are not exact; write {text!r} as 'p/q'")
    s = str(text).strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"{field}: cannot parse rational {s!r}") from None
    if q == 0:
        raise ValueError(f"{field}: zero denominator in {s!r}")
    return Fraction(p, q)


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a nonnegative integer."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _exact_root(q: Fraction, k: int):
    a, b = iroot(q.numerator, k), iroot(q.denominator, k)
    if a ** k == q.numerator and b ** k == q.denominator:
        return Fraction(a, b)
    return None


def root_bounds(q: Fraction, k: int, digits: int = 30) -> tuple[Fraction, Fraction]:
    """Rational lower/upper bounds on ``q**(1/k)`` with gap ``10**-digits``."""
    q = Fraction(q)
    ex = _exact_root(q, k)
    if ex is not None:
        return ex, ex
    scale = 10 ** digits
    # floor((num/den)^(1/k) * scale) = floor((num * scale^k / den)^(1/k))
    lo = iroot(q.numerator * scale ** k // q.denominator, k)
    return Fraction(lo, scale), Fraction(lo + 1, scale)


def decimal_str(lo: Fraction, digits: int) -> str:
    """Round-down decimal rendering of a nonnegative rational."""
    scale = 10 ** digits
    v = lo.numerator * scale // lo.denominator
    s = str(v).rjust(digits + 1, "0")
    return s[:-digits] + "." + s[-digits:] if digits else s


@total_ordering
@dataclass(frozen=True)
class Radical:
    """``radicand ** (1/index)`` with a nonnegative rational radicand (or +inf)."""

    radicand: Fraction
    index: int

    @classmethod
    def of(cls, radicand, index: int) -> "Radical":
        if radicand == inf:
            return cls(inf, index)
        r = Fraction(radicand)
        if r < 0:
            raise ValueError("negative radicand")
        return cls(r, index)

    @property
    def is_infinite(self) -> bool:
        return self.radicand == inf

    def exact(self):
        """Rational value when the root is exact, else ``None``."""
        if self.is_infinite:
            return None
        return _exact_root(self.radicand, self.index)

    def power(self, k: int):
        """``self ** k`` as a radicand-compatible rational when ``k`` is the index."""
        if k != self.index:
            raise ValueError("only the index power is exact")
        return self.radicand

    def bounds(self, digits: int = 30):
        if self.is_infinite:
            return inf, inf
        return root_bounds(self.radicand, self.index, digits)

    def __str__(self):
        if self.is_infinite:
            return "+inf"
        ex = self.exact()
        if ex is not None:
            return fmt_rat(ex)
        if self.index == 2:
            return f"sqrt({fmt_rat(self.radicand)})"
        return f"({fmt_rat(self.radicand)})^(1/{self.index})"

    def decimal(self, digits: int) -> str:
        if self.is_infinite:
            return "+inf"
        return decimal_str(self.bounds(digits + 2)[0], digits)

    def _cmp_key(self, other: "Radical"):
        # compare a^(1/k) with b^(1/m) through a^m vs b^k
        if self.is_infinite or other.is_infinite:
            return (inf if self.is_infinite else 0), (inf if other.is_infinite else 0)
        return self.radicand ** other.index, other.radicand ** self.index

    def __eq__(self, other):
        if not isinstance(other, Radical):
            return NotImplemented
        if self.is_infinite or other.is_infinite:
            return self.is_infinite and other.is_infinite
        a, b = self._cmp_key(other)
        return a == b

    def __lt__(self, other):
        if not isinstance(other, Radical):
            return NotImplemented
        if other.is_infinite:
            return not self.is_infinite
        if self.is_infinite:
            return False
        a, b = self._cmp_key(other)
        return a < b

    def __hash__(self):
        return hash(("radical", self.radicand, self.index))


@dataclass(frozen=True)
class RadicalInterval:
    lower: Radical
    upper: Radical

    @property
    def is_exact(self) -> bool:
        return self.lower == self.upper

    def __str__(self):
        if self.is_exact:
            return str(self.lower)
        return f"[{self.lower}, {self.upper}]"


@lru_cache(maxsize=None)
def pi_bounds(level: int = 0) -> tuple[Fraction, Fraction]:
    """Rational enclosure of pi; level 0 is 223/71 < pi < 22/7.

    Higher levels use Machin's formula with alternating-series error bounds;
    the gap shrinks by roughly a factor 25 per level.
    """
    if level == 0:
        return PI_LO, PI_HI
    terms = level + 1

    def atan_bounds(x: Fraction, n: int):
        s = Fraction(0)
        for k in range(n):
            s += Fraction((-1) ** k) * x ** (2 * k + 1) / (2 * k + 1)
        nxt = x ** (2 * n + 1) / (2 * n + 1)
        # partial sum overshoots when the last term was added (n odd)
        return (s - nxt, s) if n % 2 else (s, s + nxt)

    a_lo, a_hi = atan_bounds(Fraction(1, 5), terms)
    b_lo, b_hi = atan_bounds(Fraction(1, 239), terms)
    return max(PI_LO, 16 * a_lo - 4 * b_hi), min(PI_HI, 16 * a_hi - 4 * b_lo)


@total_ordering
@dataclass(frozen=True)
class PiLinear:
    """Exact number ``a + b*pi`` with rational ``a, b``."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    @classmethod
    def of(cls, x) -> "PiLinear":
        if isinstance(x, PiLinear):
            return x
        return cls(Fraction(x), Fraction(0))

    def __add__(self, other):
        o = PiLinear.of(other)
        return PiLinear(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = PiLinear.of(other)
        return PiLinear(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return PiLinear.of(other) - self

    def __neg__(self):
        return PiLinear(-self.a, -self.b)

    def __mul__(self, k):
        k = Fraction(k)
        return PiLinear(self.a * k, self.b * k)

    __rmul__ = __mul__

    def sign(self) -> int:
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        if self.a == 0:
            return (self.b > 0) - (self.b < 0)
        # pi is irrational, so a nonzero b never gives exact zero
        level = 0
        while True:
            lo, hi = self.bounds(level)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            level += 1

    def bounds(self, level: int = 0) -> tuple[Fraction, Fraction]:
        plo, phi = pi_bounds(level)
        x, y = self.a + self.b * plo, self.a + self.b * phi
        return min(x, y), max(x, y)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PiLinear.of(other)
        if not isinstance(other, PiLinear):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __lt__(self, other):
        return (self - PiLinear.of(other)).sign() < 0

    def __hash__(self):
        return hash(("pilinear", self.a, self.b))

    def rational(self):
        return self.a if self.b == 0 else None

    def __str__(self):
        if self.b == 0:
            return fmt_rat(self.a)
        bp = "pi" if self.b == 1 else "-pi" if self.b == -1 else f"{fmt_rat(self.b)}*pi"
        if self.a == 0:
            return bp
        if bp.startswith("-"):
            return f"{fmt_rat(self.a)} - {bp[1:]}"
        return f"{fmt_rat(self.a)} + {bp}"


def parse_pilinear(text, field: str = "value") -> PiLinear:
    """Parse ``"a"``, ``"b*pi"``, ``"pi"``, ``"pi/q"`` or ``"a + b*pi"`` (also ``-``)."""
    if isinstance(text, (int, Fraction)):
        return PiLinear.of(text)
    s = str(text).replace(" ", "")
    if "pi" not in s:
        return PiLinear.of(parse_rat(s, field))
    # split at the last +/- that is not a leading sign or inside "p/q"
    cut = max(s.rfind("+", 1), s.rfind("-", 1))
    head, tail = (s[:cut], s[cut:]) if cut > 0 else ("", s)
    if "pi" in head:
        head, tail = tail, head
    scale = Fraction(1)
    if "pi/" in tail:
        # "3*pi/10" reads as 3/10 * pi
        tail, den = tail.split("pi/", 1)
        tail += "pi"
        scale = 1 / parse_rat(den, field)
    coef = tail.replace("*pi", "").replace("pi", "")
    if coef in ("", "+"):
        coef = "1"
    elif coef == "-":
        coef = "-1"
    a = parse_rat(head.lstrip("+"), field) if head else Fraction(0)
    return PiLinear(a, parse_rat(coef.lstrip("+"), field) * scale)
