"""Laurent polynomials in v over the integers: the Hall algebra coefficient ring."""

from __future__ import annotations


class LaurentPoly:
    """Map exponent -> integer coefficient; zero coefficients never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {int(e): int(c) for e, c in (terms or {}).items() if int(c) != 0}

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def v(cls, exp: int = 1, coeff: int = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) - c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly({e: c * other for e, c in self.terms.items()})
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def evaluate(self, value: float) -> float:
        return sum(c * value**e for e, c in self.terms.items())

    def to_json(self) -> dict:
        return {str(e): c for e, c in sorted(self.terms.items())}

    @classmethod
    def from_json(cls, data: dict) -> "LaurentPoly":
        return cls({int(e): int(c) for e, c in data.items()})

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            if e == 0:
                parts.append(f"{c}")
            elif c == 1:
                parts.append(f"v^{e}")
            elif c == -1:
                parts.append(f"-v^{e}")
            else:
                parts.append(f"{c}v^{e}")
        out = parts[0]
        for part in parts[1:]:
            out += f"+{part}" if not part.startswith("-") else part
        return out

    def __repr__(self):
        return f"LaurentPoly({self})"


def laurent_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Convolution product; alias for `a * b`."""
    return a * b
