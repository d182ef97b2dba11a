import math

from orthoscheme.geometry.orthoscheme import FaceIndex

SIGNIFICANT_DIGITS = 17


def format_float(value: float) -> str:
    """
    Round-trip safe text for a float: 17 significant digits.

    Non-finite values become ``"nan"``, ``"inf"`` or ``"-inf"``; the JSON writer maps them to ``null``.

    Examples:
        >>> format_float(0.5)
        '0.5'
        >>> format_float(0.1)
        '0.10000000000000001'
        >>> format_float(2.0)
        '2'
    """
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, f".{SIGNIFICANT_DIGITS}g")


def format_face(face: FaceIndex) -> str:
    """Comma-joined vertex indices, e.g. ``"0,2,4"``"""
    return str(face)
