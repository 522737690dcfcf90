"""Exact scalars: rationals, Laurent polynomials in q, and quotients of those.

Every value handed out by this module is in canonical form:

* a ``Fraction`` when it does not depend on ``q``,
* a ``Laurent`` when it is a Laurent polynomial with a non-constant term,
* a ``RatFunc`` only when no Laurent representative exists.

Canonical forms make equality structural, which is what the verifiers rely on.
``RatFunc`` exists because the symmetrizer recurrence divides by q-numbers;
file formats and reports stay within the Laurent grammar whenever possible.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
import re

__all__ = [
    "Laurent",
    "RatFunc",
    "Q",
    "ScalarParseError",
    "as_scalar",
    "evaluate",
    "derivative",
    "parse_scalar",
    "format_scalar",
    "qnumber",
    "is_zero",
    "depends_on_q",
]


# --- dense polynomial helpers (dict exponent -> Fraction, exponents >= 0) ---

def _trim(c):
    return {k: v for k, v in c.items() if v != 0}


def _pmul(a, b):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return _trim(out)


def _pdeg(a):
    return max(a) if a else -1


def _pdivmod(a, b):
    a = dict(a)
    db = _pdeg(b)
    lb = b[db]
    quo = {}
    while a and _pdeg(a) >= db:
        da = _pdeg(a)
        c = a[da] / lb
        s = da - db
        quo[s] = c
        for j, y in b.items():
            v = a.get(j + s, 0) - c * y
            if v == 0:
                a.pop(j + s, None)
            else:
                a[j + s] = v
    return quo, a


def _pgcd(a, b):
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    if not a:
        return {}
    lead = a[_pdeg(a)]
    return {k: v / lead for k, v in a.items()}


def _shift(c, s):
    return {k + s: v for k, v in c.items()}


class Laurent:
    """Laurent polynomial sum_k c_k q^k with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        coeffs = coeffs or {}
        self.coeffs = {int(k): Fraction(v) for k, v in coeffs.items() if v != 0}

    @classmethod
    def _raw(cls, coeffs):
        obj = cls.__new__(cls)
        obj.coeffs = coeffs
        return obj

    @classmethod
    def monomial(cls, k, c=1):
        return cls._raw({k: Fraction(c)}) if c else cls._raw({})

    def canon(self):
        c = self.coeffs
        if not c:
            return Fraction(0)
        if len(c) == 1 and 0 in c:
            return c[0]
        return self

    @property
    def min_exp(self):
        return min(self.coeffs)

    @property
    def max_exp(self):
        return max(self.coeffs)

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        if isinstance(other, RatFunc):
            return other + self
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k, 0) + v
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return Laurent._raw(out).canon()

    __radd__ = __add__

    def __neg__(self):
        return Laurent._raw({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-_as_any(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        if isinstance(other, RatFunc):
            return other * self
        return Laurent._raw(_pmul(self.coeffs, other.coeffs)).canon()

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        if isinstance(other, RatFunc):
            return RatFunc(self, Laurent._raw({0: Fraction(1)})) / other
        return _laurent_div(self, other)

    def __rtruediv__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return Fraction(1) / (self ** (-e))
        out = Laurent._raw({0: Fraction(1)})
        base = self
        while e:
            if e & 1:
                out = Laurent._raw(_pmul(out.coeffs, base.coeffs))
            base = Laurent._raw(_pmul(base.coeffs, base.coeffs))
            e >>= 1
        return out.canon()

    def __eq__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        if isinstance(other, RatFunc):
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        if not self.coeffs:
            return hash(0)
        if len(self.coeffs) == 1 and 0 in self.coeffs:
            return hash(self.coeffs[0])
        return hash(tuple(sorted(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"Laurent({format_scalar(self)!r})"

    __str__ = lambda self: format_scalar(self)

    def evaluate(self, q0):
        q0 = Fraction(q0)
        return sum((v * q0 ** k for k, v in self.coeffs.items()), Fraction(0))

    def derivative(self):
        return Laurent._raw({k - 1: v * k for k, v in self.coeffs.items() if k != 0}).canon()


def _laurent_div(a: Laurent, b: Laurent):
    if not b.coeffs:
        raise ZeroDivisionError("division by zero Laurent polynomial")
    if not a.coeffs:
        return Fraction(0)
    if len(b.coeffs) == 1:
        (k, c), = b.coeffs.items()
        return Laurent._raw({e - k: v / c for e, v in a.coeffs.items()}).canon()
    sa, sb = a.min_exp, b.min_exp
    pa, pb = _shift(a.coeffs, -sa), _shift(b.coeffs, -sb)
    quo, rem = _pdivmod(pa, pb)
    if not rem:
        return Laurent._raw(_shift(quo, sa - sb)).canon()
    return RatFunc(a, b)


class RatFunc:
    """Reduced quotient num/den of Laurent polynomials.

    The denominator is stored as an ordinary monic polynomial with nonzero
    constant term; any power of q lives in the numerator.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        num, den = _as_laurent(num), _as_laurent(den)
        if not den.coeffs:
            raise ZeroDivisionError("zero denominator")
        # move q-powers of the denominator into the numerator
        s = den.min_exp
        dpoly = _shift(den.coeffs, -s)
        if not num.coeffs:
            self.num, self.den = Laurent._raw({}), Laurent._raw({0: Fraction(1)})
            return
        t = num.min_exp
        npoly = _shift(num.coeffs, -t)
        g = _pgcd(npoly, dpoly)
        if _pdeg(g) > 0:
            npoly, _ = _pdivmod(npoly, g)
            dpoly, _ = _pdivmod(dpoly, g)
        lead = dpoly[_pdeg(dpoly)]
        npoly = {k: v / lead for k, v in npoly.items()}
        dpoly = {k: v / lead for k, v in dpoly.items()}
        self.num = Laurent._raw(_shift(npoly, t - s))
        self.den = Laurent._raw(dpoly)

    def canon(self):
        if len(self.den.coeffs) == 1:
            # monic with nonzero constant term and a single term: den == 1
            return self.num.canon()
        return self

    def __add__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        if isinstance(other, Laurent):
            other = RatFunc._from_laurent(other)
        n = _lmul(self.num, other.den) + _lmul(other.num, self.den)
        return RatFunc(_as_laurent(n), _lmul(self.den, other.den)).canon()

    __radd__ = __add__

    def __neg__(self):
        out = RatFunc.__new__(RatFunc)
        out.num, out.den = -self.num, self.den
        return out

    def __sub__(self, other):
        return self + (-_as_any(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        if isinstance(other, Laurent):
            other = RatFunc._from_laurent(other)
        return RatFunc(_lmul(self.num, other.num), _lmul(self.den, other.den)).canon()

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        if isinstance(other, Laurent):
            other = RatFunc._from_laurent(other)
        if not other.num.coeffs:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(_lmul(self.num, other.den), _lmul(self.den, other.num)).canon()

    def __rtruediv__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc._from_laurent(other) / self

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        out = Fraction(1)
        for _ in range(abs(e)):
            out = out * self
        return out if e >= 0 else Fraction(1) / out

    @staticmethod
    def _from_laurent(x):
        out = RatFunc.__new__(RatFunc)
        out.num, out.den = x, Laurent._raw({0: Fraction(1)})
        return out

    def __eq__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        if not isinstance(other, RatFunc):
            return False
        return self.num.coeffs == other.num.coeffs and self.den.coeffs == other.den.coeffs

    def __hash__(self):
        return hash((tuple(sorted(self.num.coeffs.items())), tuple(sorted(self.den.coeffs.items()))))

    def __bool__(self):
        return bool(self.num.coeffs)

    def __repr__(self):
        return f"RatFunc({format_scalar(self)!r})"

    __str__ = lambda self: format_scalar(self)

    def evaluate(self, q0):
        d = self.den.evaluate(q0)
        if d == 0:
            raise ZeroDivisionError(f"pole of {self} at q={q0}")
        return self.num.evaluate(q0) / d

    def derivative(self):
        n, d = self.num, self.den
        top = _as_any(n.derivative()) * d - n * _as_any(d.derivative())
        return _as_any(top) / (d * d)


def _lmul(a, b):
    return Laurent._raw(_pmul(a.coeffs, b.coeffs))


def _as_laurent(x):
    if isinstance(x, Laurent):
        return x
    if isinstance(x, (int, Fraction, Rational)):
        x = Fraction(x)
        return Laurent._raw({0: x} if x else {})
    raise TypeError(f"cannot convert {type(x).__name__} to Laurent")


def _lift(x):
    if isinstance(x, (Laurent, RatFunc)):
        return x
    if isinstance(x, (int, Fraction)):
        return _as_laurent(x)
    return NotImplemented


def _as_any(x):
    if isinstance(x, (Laurent, RatFunc, Fraction)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not a scalar: {x!r}")


Q = Laurent._raw({1: Fraction(1)})


def as_scalar(x):
    """Coerce ints, Fractions, strings and scalars to canonical form."""
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (Laurent, RatFunc)):
        return x.canon()
    raise TypeError(f"not an exact scalar: {x!r}")


def is_zero(x) -> bool:
    return not x


def depends_on_q(x) -> bool:
    return isinstance(x, (Laurent, RatFunc))


def evaluate(x, q0):
    """Exact value of the scalar at the rational point ``q = q0``."""
    if isinstance(x, (Laurent, RatFunc)):
        return x.evaluate(q0)
    return Fraction(x)


def derivative(x):
    """Exact d/dq."""
    if isinstance(x, (Laurent, RatFunc)):
        return x.derivative()
    return Fraction(0)


def qnumber(k, q=None):
    """The q-number k_q = (q^k - q^-k)/(q - q^-1); equals k at q = 1."""
    if q is None:
        q = Q
    if q == 1:
        return Fraction(k)
    if q == -1:
        return Fraction(k * (-1) ** (k - 1))
    return (q ** k - q ** (-k)) / (q - Fraction(1) / q)


# --- text grammar -----------------------------------------------------------

class ScalarParseError(ValueError):
    """Malformed scalar literal; ``offset`` is the byte offset of the problem."""

    def __init__(self, text, offset, msg):
        self.text = text
        self.offset = offset
        self.msg = msg
        super().__init__(f"{msg} at byte offset {offset} in {text!r}")


_TOKEN = re.compile(r"\s*(?:(\d+)(?:/(\d+))?|(q)|([-+*^()/]))")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def _peek(self):
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            rest = self.text[self.pos:]
            if rest.strip() == "":
                return None, len(self.text)
            off = self.pos + (len(rest) - len(rest.lstrip()))
            raise ScalarParseError(self.text, _byte(self.text, off), "unexpected character")
        return m, m.end()

    def _at(self, m):
        return _byte(self.text, m.start(m.lastindex))

    def parse(self):
        m, _ = self._peek()
        if m is not None and m.group(4) == "(":
            num = self._paren()
            m, end = self._peek()
            if m is None:
                return num
            if m.group(4) != "/":
                raise ScalarParseError(self.text, self._at(m), "expected '/'")
            self.pos = end
            den = self._paren()
            m, _ = self._peek()
            if m is not None:
                raise ScalarParseError(self.text, self._at(m), "trailing input")
            if not den:
                raise ScalarParseError(self.text, _byte(self.text, self.pos), "zero denominator")
            return _as_any(num) / den
        val = self._sum(stop=None)
        return val

    def _paren(self):
        m, end = self._peek()
        self.pos = end
        val = self._sum(stop=")")
        m, end = self._peek()
        if m is None or m.group(4) != ")":
            raise ScalarParseError(self.text, _byte(self.text, self.pos), "expected ')'")
        self.pos = end
        return val

    def _sum(self, stop):
        total = Laurent._raw({})
        first = True
        while True:
            m, end = self._peek()
            if m is None or (stop and m.group(4) == stop):
                if first:
                    raise ScalarParseError(self.text, _byte(self.text, self.pos), "empty expression")
                return total.canon() if isinstance(total, Laurent) else total
            sign = 1
            if m.group(4) in ("+", "-"):
                sign = -1 if m.group(4) == "-" else 1
                self.pos = end
            elif not first:
                raise ScalarParseError(self.text, self._at(m), "expected '+' or '-'")
            total = total + sign * self._term()
            first = False

    def _term(self):
        m, end = self._peek()
        if m is None:
            raise ScalarParseError(self.text, len(self.text.encode()), "expected a term")
        coeff = Fraction(1)
        if m.group(1) is not None:
            den = int(m.group(2)) if m.group(2) else 1
            if den == 0:
                raise ScalarParseError(self.text, self._at(m), "zero denominator")
            coeff = Fraction(int(m.group(1)), den)
            self.pos = end
            m, end = self._peek()
            if m is None or m.group(4) != "*":
                return _as_laurent(coeff)
            self.pos = end
            m, end = self._peek()
            if m is None or m.group(3) is None:
                off = self._at(m) if m is not None else len(self.text.encode())
                raise ScalarParseError(self.text, off, "expected 'q' after '*'")
        if m.group(3) is None:
            raise ScalarParseError(self.text, self._at(m), "expected a number or 'q'")
        self.pos = end
        exp = 1
        m, end = self._peek()
        if m is not None and m.group(4) == "^":
            self.pos = end
            sign = 1
            m, end = self._peek()
            if m is not None and m.group(4) == "-":
                sign = -1
                self.pos = end
                m, end = self._peek()
            if m is None or m.group(1) is None or m.group(2) is not None:
                off = self._at(m) if m is not None else len(self.text.encode())
                raise ScalarParseError(self.text, off, "expected integer exponent")
            exp = sign * int(m.group(1))
            self.pos = end
        return Laurent.monomial(exp, coeff)


def _byte(text, char_offset):
    return len(text[:char_offset].encode())


def parse_scalar(text: str):
    """Parse ``"p/s"``, a Laurent sum such as ``"q - 1/1*q^-1"``, or
    ``"(laurent)/(laurent)"``.  Raises ScalarParseError with a byte offset."""
    return as_scalar(_Parser(text).parse())


def _format_frac(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_laurent(x):
    parts = []
    for k in sorted(x.coeffs, reverse=True):
        c = x.coeffs[k]
        a = abs(c)
        if k == 0:
            body = _format_frac(a)
        else:
            mono = "q" if k == 1 else f"q^{k}"
            body = mono if a == 1 else f"{_format_frac(a)}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


def format_scalar(x) -> str:
    """Canonical text form; ``parse_scalar(format_scalar(x)) == x``."""
    if isinstance(x, RatFunc):
        return f"({_format_laurent(x.num)})/({_format_laurent(x.den)})"
    if isinstance(x, Laurent):
        return _format_laurent(x)
    return _format_frac(Fraction(x))
