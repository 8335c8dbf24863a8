"""
Polynomial - Multivariate polynomials over coefficient maps with exact partial derivatives
"""

from typing import Dict, Iterable, Mapping, Sequence, Tuple

Exponents = Tuple[int, ...]


class Polynomial:
    """Sum of coeff * x_1^e_1 ... x_n^e_n keyed by exponent tuples"""

    __slots__ = ("n", "terms")

    def __init__(self, terms: Mapping[Sequence[int], float], n: int):
        if n < 1:
            raise ValueError(f"polynomial dimension must be positive, got {n}")
        clean: Dict[Exponents, float] = {}
        for exponents, coeff in terms.items():
            key = tuple(int(e) for e in exponents)
            if len(key) != n:
                raise ValueError(f"exponent tuple {key} does not have length {n}")
            if any(e < 0 for e in key):
                raise ValueError(f"negative exponent in {key}")
            coeff = float(coeff)
            if coeff != 0.0:
                clean[key] = clean.get(key, 0.0) + coeff
        self.n = n
        self.terms = {k: v for k, v in sorted(clean.items()) if v != 0.0}

    @classmethod
    def constant(cls, value: float, n: int) -> "Polynomial":
        return cls({(0,) * n: value}, n)

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[Sequence[int], float]], n: int) -> "Polynomial":
        collected: Dict[Exponents, float] = {}
        for exponents, coeff in terms:
            key = tuple(int(e) for e in exponents)
            collected[key] = collected.get(key, 0.0) + float(coeff)
        return cls(collected, n)

    @property
    def is_constant(self) -> bool:
        return all(sum(k) == 0 for k in self.terms)

    def partial(self, i: int) -> "Polynomial":
        """Exact derivative with respect to x_i"""
        result: Dict[Exponents, float] = {}
        for exponents, coeff in self.terms.items():
            e = exponents[i]
            if e == 0:
                continue
            lowered = exponents[:i] + (e - 1,) + exponents[i + 1:]
            result[lowered] = result.get(lowered, 0.0) + coeff * e
        return Polynomial(result, self.n)

    def __call__(self, x: Sequence):
        """Evaluate at x; components may be floats or Taylor jets"""
        total = 0.0
        for exponents, coeff in self.terms.items():
            value = coeff
            for xi, e in zip(x, exponents):
                if e:
                    value = value * (xi ** e)
            total = total + value
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "Polynomial(0)"
        parts = []
        for exponents, coeff in self.terms.items():
            monomial = "*".join(f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}"
                                for i, e in enumerate(exponents) if e)
            parts.append(f"{coeff:g}" + (f"*{monomial}" if monomial else ""))
        return "Polynomial(" + " + ".join(parts) + ")"
