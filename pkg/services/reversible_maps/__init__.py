"""
可逆映射模块

在 𝔽_p^n 上约化的代数可逆映射，统一接口见 base.ReversiblePair
"""

from .base import FixedSets, ReversiblePair
from .henon_map import HenonPair, henon_pair
from .map3d import Map3DPair, map3d_pair

__all__ = [
    'FixedSets',
    'ReversiblePair',
    'HenonPair',
    'henon_pair',
    'Map3DPair',
    'map3d_pair',
]
