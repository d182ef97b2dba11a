import math

from orthoscheme.exceptions import InvalidDimension


class CommandInputValidator:
    """Parses and checks the comma-separated lists accepted on the command line"""

    EULER_RAY_COUNT = 3
    EULER_COMPONENTS = 9

    @classmethod
    def parse_int_list(cls, text: str, *, minimum: int = 1) -> list[int]:
        """
        ``"100,1000,10000"`` -> ``[100, 1000, 10000]``.

        Every entry must be an integer ``>= minimum``.
        """
        if not text or not text.strip():
            raise ValueError("Expected a comma-separated list of integers, got an empty value")
        try:
            values = [int(part) for part in text.split(",")]
        except ValueError as e:
            raise ValueError(f"Expected a comma-separated list of integers, got '{text}'") from e
        below = [v for v in values if v < minimum]
        if below:
            raise InvalidDimension(f"All values must be >= {minimum}, got {below}")
        return values

    @classmethod
    def parse_float_list(cls, text: str) -> list[float]:
        if not text or not text.strip():
            raise ValueError("Expected a comma-separated list of numbers, got an empty value")
        try:
            values = [float(part) for part in text.split(",")]
        except ValueError as e:
            raise ValueError(f"Expected a comma-separated list of numbers, got '{text}'") from e
        if not all(math.isfinite(v) for v in values):
            raise ValueError(f"All numbers must be finite, got '{text}'")
        return values

    @classmethod
    def parse_euler_rays(cls, text: str) -> list[list[float]]:
        """
        Nine numbers ``a1,a2,a3,b1,b2,b3,c1,c2,c3`` -> three rays, each normalized to unit length.
        """
        values = cls.parse_float_list(text)
        if len(values) != cls.EULER_COMPONENTS:
            raise ValueError(f"Expected {cls.EULER_COMPONENTS} numbers (three rays in R^3), got {len(values)}")
        rays = [values[i : i + 3] for i in range(0, cls.EULER_COMPONENTS, 3)]
        normalized = []
        for ray in rays:
            length = math.hypot(*ray)
            if length == 0:
                raise ValueError("Rays must be nonzero")
            normalized.append([x / length for x in ray])
        return normalized
