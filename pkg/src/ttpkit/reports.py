"""Violation records returned by the reporting validators."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class Violation:
    kind: str
    team: int = -1
    day: int = -1
    detail: str = ""

    def __str__(self) -> str:
        loc = ""
        if self.team >= 0:
            loc += f" team={self.team}"
        if self.day >= 0:
            loc += f" day={self.day}"
        return f"{self.kind}{loc}: {self.detail}"


def sort_violations(items: list[Violation]) -> list[Violation]:
    """Canonical order so reports are reproducible regardless of scan order."""
    return sorted(items)
