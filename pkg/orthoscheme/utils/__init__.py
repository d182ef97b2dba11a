from .format_duration_ms import format_duration_ms
from .format_float import format_face, format_float

__all__ = ["format_duration_ms", "format_face", "format_float"]
