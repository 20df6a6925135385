"""Worked transform traces in exact arithmetic."""

from fractions import Fraction as F

UNIFORMIZE_LITERAL = "1/16,1/6,1/4,1/8,19/48"
UNIFORMIZE_PAIRS = [(4, 5), (2, 5), (1, 3), (3, 5)]
UNIFORMIZE_VECTORS = [
    (F(1, 16), F(1, 6), F(1, 4), F(1, 5), F(77, 240)),
    (F(1, 16), F(1, 5), F(1, 4), F(1, 5), F(23, 80)),
    (F(1, 5), F(1, 5), F(9, 80), F(1, 5), F(23, 80)),
    (F(1, 5), F(1, 5), F(1, 5), F(1, 5), F(1, 5)),
]

MAXIMIZE_LITERAL = "1/16,1/6,1/4,1/8,71/240"
MAXIMIZE_VECTORS = [
    (F(1, 20), F(1, 6), F(1, 4), F(11, 80), F(71, 240)),
    (F(1, 20), F(1, 20), F(1, 4), F(61, 240), F(71, 240)),
    (F(1, 20), F(1, 20), F(1, 20), F(109, 240), F(71, 240)),
    (F(1, 20), F(1, 20), F(1, 20), F(7, 10), F(1, 20)),
]
