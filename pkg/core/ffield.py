"""
素数域 𝔽_p 的算术与 𝔽_p^n 点编号

模数限制在 p < 2³¹，乘积在 int64 中不会溢出，numpy 向量化内核可以直接使用。
点编号固定为 x + p·y (+ p²·z)。
"""

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np
from sympy import isprime, primerange

from core.errors import FieldMismatchError, ParameterError
from utils.logging_config import get_logger

logger = get_logger(__name__)

MAX_MODULUS = 2 ** 31


def is_prime(n: int) -> bool:
    """sympy.isprime 在 n < 2⁶⁴ 时是确定性的"""
    return bool(isprime(n))


def primes_in_range(p_min: int, p_max: int, odd_only: bool = True) -> list:
    """[p_min, p_max] 内的素数（默认只要奇素数）"""
    start = max(p_min, 3 if odd_only else 2)
    return [int(p) for p in primerange(start, p_max + 1)]


def is_three_mod_four(p: int) -> bool:
    """p ≡ 3 (mod 4) 时 -1 不是平方剩余"""
    return p % 4 == 3


@dataclass(frozen=True)
class PrimeField:
    """𝔽_p，p 为奇素数"""

    p: int

    def __post_init__(self):
        if self.p % 2 == 0 or not is_prime(self.p):
            raise ParameterError(f"p={self.p} 不是奇素数")
        if self.p >= MAX_MODULUS:
            raise ParameterError(f"p={self.p} 超出 2³¹ 的模数上限")

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value % self.p, self)

    def elements(self) -> Iterable["FieldElement"]:
        return (FieldElement(v, self) for v in range(self.p))

    @property
    def two_inverse(self) -> int:
        return (self.p + 1) // 2

    # -- 向量化内核 ---------------------------------------------------------

    def inv_array(self, values: np.ndarray) -> np.ndarray:
        """对 int64 数组逐元素求逆（Fermat 小定理，平方-乘算法）；遇 0 抛 ZeroDivisionError"""
        values = np.asarray(values, dtype=np.int64) % self.p
        if np.any(values == 0):
            raise ZeroDivisionError(f"𝔽_{self.p} 中 0 不可逆")
        return self.pow_array(values, self.p - 2)

    def pow_array(self, values: np.ndarray, exponent: int) -> np.ndarray:
        base = np.asarray(values, dtype=np.int64) % self.p
        result = np.ones_like(base)
        while exponent:
            if exponent & 1:
                result = result * base % self.p
            base = base * base % self.p
            exponent >>= 1
        return result


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: PrimeField

    def __post_init__(self):
        if not 0 <= self.value < self.field.p:
            raise ParameterError(f"{self.value} 不在 [0, {self.field.p}) 内")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field.p != self.field.p:
                raise FieldMismatchError(f"𝔽_{self.field.p} 与 𝔽_{other.field.p} 的元素不能运算")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def _make(self, value: int) -> "FieldElement":
        return FieldElement(value % self.field.p, self.field)

    def __add__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._make(self.value + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._make(self.value - v)

    def __rsub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._make(v - self.value)

    def __mul__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._make(self.value * v)

    __rmul__ = __mul__

    def __neg__(self):
        return self._make(-self.value)

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inv() ** (-exponent)
        return self._make(pow(self.value, exponent, self.field.p))

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return self * self._make(v).inv()

    def inv(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError(f"𝔽_{self.field.p} 中 0 不可逆")
        return self._make(pow(self.value, self.field.p - 2, self.field.p))

    def __int__(self) -> int:
        return self.value

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field.p == other.field.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.field.p))

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.p})"


# 模块级函数形式
def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inv()


def point_index(coords: Sequence) -> int:
    """(x, y, z, …) ↦ x + p·y + p²·z + …（coords 为同一域中的 FieldElement）"""
    if not coords:
        raise ParameterError("坐标不能为空")
    field = coords[0].field
    index = 0
    for coord in reversed(coords):
        if coord.field.p != field.p:
            raise FieldMismatchError("坐标不在同一个域中")
        index = index * field.p + coord.value
    return index


def point_from_index(index: int, field: PrimeField, dimension: int) -> Tuple[FieldElement, ...]:
    """point_index 的逆"""
    if not 0 <= index < field.p ** dimension:
        raise ParameterError(f"编号 {index} 超出 [0, p^{dimension})")
    coords = []
    for _ in range(dimension):
        index, value = divmod(index, field.p)
        coords.append(FieldElement(value, field))
    return tuple(coords)


def index_array(coords: np.ndarray, p: int) -> np.ndarray:
    """向量化编号：coords 形状 (n, M) → 长度 M 的编号数组"""
    coords = np.asarray(coords, dtype=np.int64)
    index = np.zeros(coords.shape[1], dtype=np.int64)
    for row in coords[::-1]:
        index = index * p + row
    return index


def coords_array(indices: np.ndarray, p: int, dimension: int) -> np.ndarray:
    """index_array 的逆：返回形状 (dimension, M) 的坐标"""
    indices = np.asarray(indices, dtype=np.int64)
    rows = []
    for _ in range(dimension):
        indices, values = np.divmod(indices, p)
        rows.append(values)
    return np.stack(rows)
