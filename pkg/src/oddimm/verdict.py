"""Boolean results that carry a machine-readable reason."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Verdict:
    """Truthy when ``ok``; otherwise ``reason`` names the failed condition."""

    ok: bool
    reason: str | None = None
    detail: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "VALID"
        extra = " ".join(f"{k}={v}" for k, v in self.detail.items())
        return f"INVALID {self.reason}" + (f" {extra}" if extra else "")


VALID = Verdict(True)


def invalid(reason: str, **detail) -> Verdict:
    return Verdict(False, reason, detail)
