"""Standard-library names added in Python 3.11, with equivalents for Python 3.10.

Python 3.11 で追加された標準ライブラリの名前と, Python 3.10 向けの同等定義.
"""

from __future__ import annotations

import logging

try:
    from datetime import UTC
    from enum import StrEnum
except ImportError:  # Python 3.10
    from datetime import timezone
    from enum import Enum

    UTC = timezone.utc

    class StrEnum(str, Enum):  # type: ignore[no-redef]
        """Equivalent of ``enum.StrEnum`` from Python 3.11."""

        def __new__(cls, *values: str) -> StrEnum:  # noqa: D102
            if len(values) > 3:  # noqa: PLR2004
                msg = f"too many arguments for str(): {values!r}"
                raise TypeError(msg)
            if len(values) == 1 and not isinstance(values[0], str):
                msg = f"{values[0]!r} is not a string"
                raise TypeError(msg)
            value = str(*values)
            member = str.__new__(cls, value)
            member._value_ = value
            return member

        __str__ = str.__str__
        __format__ = str.__format__

        @staticmethod
        def _generate_next_value_(name: str, start: int, count: int, last_values: list[str]) -> str:  # noqa: ARG004
            return name.lower()


if hasattr(logging, "getLevelNamesMapping"):
    get_level_names_mapping = logging.getLevelNamesMapping
else:  # Python 3.10

    def get_level_names_mapping() -> dict[str, int]:
        """Equivalent of ``logging.getLevelNamesMapping`` from Python 3.11."""
        return logging._nameToLevel.copy()  # noqa: SLF001  # pyright: ignore[reportPrivateUsage]


__all__ = ["UTC", "StrEnum", "get_level_names_mapping"]
