"""
𝔽_p[x] 上的一元多项式与不同根计数

PrimePoly 以低次在前的系数元组保存，运算交给 sympy.polys.galoistools
（高次在前的稠密列表，系数域 ZZ）。
根数 = deg gcd(x^p − x mod f, f)，不做完整因式分解。
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_add,
    gf_diff,
    gf_div,
    gf_eval,
    gf_from_int_poly,
    gf_gcd,
    gf_monic,
    gf_mul,
    gf_neg,
    gf_pow_mod,
    gf_rem,
    gf_sqf_p,
    gf_sub,
)

from core.errors import FieldMismatchError, ParameterError
from core.ffield import PrimeField
from utils.logging_config import get_logger

logger = get_logger(__name__)

# Φ₅(x) = x⁶ − 2x⁵ + 5x⁴ − 6x³ + 8x² − 4x + 3，整数系数，低次在前
PHI5_INTEGER_COEFFS: Tuple[int, ...] = (3, -4, 8, -6, 5, -2, 1)

_X = ZZ.map([1, 0])


@dataclass(frozen=True)
class PrimePoly:
    field: PrimeField
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        dense = gf_from_int_poly(ZZ.map(list(reversed(self.coeffs))), self.field.p)
        object.__setattr__(self, "coeffs", tuple(int(c) for c in reversed(dense)))

    @classmethod
    def from_ints(cls, field: PrimeField, coeffs: Sequence[int]) -> "PrimePoly":
        return cls(field, tuple(coeffs))

    @classmethod
    def from_dense(cls, field: PrimeField, dense: Sequence) -> "PrimePoly":
        """由 galoistools 的高次在前列表构造"""
        return cls(field, tuple(int(c) for c in reversed(dense)))

    @classmethod
    def zero(cls, field: PrimeField) -> "PrimePoly":
        return cls(field, ())

    @classmethod
    def monomial(cls, field: PrimeField, degree: int, coeff: int = 1) -> "PrimePoly":
        return cls(field, (0,) * degree + (coeff,))

    @property
    def dense(self) -> list:
        return ZZ.map(list(reversed(self.coeffs)))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def degree(self) -> int:
        """零多项式的次数记为 -1"""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def monic(self) -> "PrimePoly":
        if self.is_zero:
            raise ParameterError("零多项式没有首一形式")
        return PrimePoly.from_dense(self.field, gf_monic(self.dense, self.p, ZZ)[1])

    def _check(self, other: "PrimePoly") -> None:
        if other.field.p != self.field.p:
            raise FieldMismatchError(f"𝔽_{self.field.p}[x] 与 𝔽_{other.field.p}[x] 的多项式不能运算")

    def __add__(self, other: "PrimePoly") -> "PrimePoly":
        self._check(other)
        return PrimePoly.from_dense(self.field, gf_add(self.dense, other.dense, self.p, ZZ))

    def __neg__(self) -> "PrimePoly":
        return PrimePoly.from_dense(self.field, gf_neg(self.dense, self.p, ZZ))

    def __sub__(self, other: "PrimePoly") -> "PrimePoly":
        self._check(other)
        return PrimePoly.from_dense(self.field, gf_sub(self.dense, other.dense, self.p, ZZ))

    def __mul__(self, other: "PrimePoly") -> "PrimePoly":
        self._check(other)
        return PrimePoly.from_dense(self.field, gf_mul(self.dense, other.dense, self.p, ZZ))

    def __repr__(self) -> str:
        if self.is_zero:
            return f"0 (mod {self.field.p})"
        terms = []
        for degree in range(self.degree, -1, -1):
            c = self.coeffs[degree]
            if c == 0 and degree != self.degree:
                continue
            if degree == 0:
                terms.append(f"{c}")
            elif degree == 1:
                terms.append(f"{c}x")
            else:
                terms.append(f"{c}x^{degree}")
        return " + ".join(terms) + f" (mod {self.field.p})"




def phi5(field: PrimeField) -> PrimePoly:
    """对称 5-周期多项式 Φ₅ 在 𝔽_p 上的约化"""
    return PrimePoly(field, PHI5_INTEGER_COEFFS)


def poly_divmod(a: PrimePoly, b: PrimePoly) -> Tuple[PrimePoly, PrimePoly]:
    """带余除法 a = q·b + r，deg r < deg b；b 为零时抛 ZeroDivisionError"""
    a._check(b)
    q, r = gf_div(a.dense, b.dense, a.p, ZZ)
    return PrimePoly.from_dense(a.field, q), PrimePoly.from_dense(a.field, r)


def _require_modulus(modulus: PrimePoly) -> None:
    if modulus.is_zero or modulus.degree < 1:
        raise ParameterError("模多项式必须非零且次数 ≥ 1")


def mod_mul(a: PrimePoly, b: PrimePoly, modulus: PrimePoly) -> PrimePoly:
    _require_modulus(modulus)
    a._check(b)
    a._check(modulus)
    p = a.p
    return PrimePoly.from_dense(a.field, gf_rem(gf_mul(a.dense, b.dense, p, ZZ), modulus.dense, p, ZZ))


def mod_pow(base: PrimePoly, exponent: int, modulus: PrimePoly) -> PrimePoly:
    """base^exponent mod modulus"""
    _require_modulus(modulus)
    base._check(modulus)
    if exponent < 0:
        raise ParameterError(f"指数不能为负: {exponent}")
    return PrimePoly.from_dense(base.field, gf_pow_mod(base.dense, exponent, modulus.dense, base.p, ZZ))


def poly_gcd(a: PrimePoly, b: PrimePoly) -> PrimePoly:
    """首一最大公因式"""
    a._check(b)
    if a.is_zero and b.is_zero:
        raise ParameterError("gcd(0, 0) 无定义")
    return PrimePoly.from_dense(a.field, gf_gcd(a.dense, b.dense, a.p, ZZ))


def count_roots(f: PrimePoly) -> int:
    """f 在 𝔽_p 中不同根的个数 = deg gcd(x^p − x mod f, f)"""
    if f.is_zero:
        raise ParameterError("零多项式的根数无定义")
    if f.degree <= 1:
        return f.degree
    p = f.p
    frobenius = gf_pow_mod(_X, p, f.dense, p, ZZ)
    return len(gf_gcd(gf_sub(frobenius, _X, p, ZZ), f.dense, p, ZZ)) - 1


def evaluate(f: PrimePoly, value: int) -> int:
    return int(gf_eval(f.dense, value % f.p, f.p, ZZ))


def brute_force_roots(f: PrimePoly) -> List[int]:
    """逐点求值得到全部根，作为 count_roots 的对照"""
    return [x for x in range(f.p) if evaluate(f, x) == 0]


def derivative(f: PrimePoly) -> PrimePoly:
    return PrimePoly.from_dense(f.field, gf_diff(f.dense, f.p, ZZ))


def is_squarefree(f: PrimePoly) -> bool:
    """gcd(f, f′) = 1"""
    if f.is_zero:
        return False
    return bool(gf_sqf_p(f.dense, f.p, ZZ))
