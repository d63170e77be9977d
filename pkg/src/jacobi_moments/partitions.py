"""Hook partitions and the integer parameters of the Hermitian Jacobi process."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import DomainError

__all__ = ["Hook", "ModelParams", "hooks_of_weight", "subhooks", "nu"]


@dataclass(frozen=True, order=True)
class Hook:
    """The hook partition (head, 1^leg)."""

    head: int
    leg: int = 0

    def __post_init__(self):
        if self.head < 1 or self.leg < 0:
            raise DomainError(f"invalid hook head={self.head}, leg={self.leg}")

    @property
    def weight(self) -> int:
        return self.head + self.leg

    @property
    def length(self) -> int:
        return self.leg + 1

    @property
    def parts(self) -> tuple[int, ...]:
        return (self.head,) + (1,) * self.leg

    def part(self, i: int) -> int:
        """1-based part access; zero beyond the length."""
        if i == 1:
            return self.head
        return 1 if 2 <= i <= self.length else 0

    def contains(self, other: "Hook") -> bool:
        return other.head <= self.head and other.leg <= self.leg

    def __str__(self) -> str:
        return f"({self.head},1^{self.leg})"

    def to_json(self) -> dict:
        return {"head": self.head, "leg": self.leg}

    @classmethod
    def from_json(cls, obj: dict) -> "Hook":
        return cls(int(obj["head"]), int(obj["leg"]))


@dataclass(frozen=True)
class ModelParams:
    """Matrix size m, projection rank p and ambient dimension d.

    Only the regime with an absolutely continuous eigenvalue law is
    supported: m <= p and m <= q = d - p.
    """

    m: int
    p: int
    d: int

    def __post_init__(self):
        m, p, d = self.m, self.p, self.d
        if min(m, p) < 1 or d < 2:
            raise DomainError(f"need m, p >= 1 and d >= 2, got m={m}, p={p}, d={d}")
        if m > p:
            raise DomainError(f"need m <= p, got m={m}, p={p}")
        if m > d - p:
            raise DomainError(f"need m <= q = d - p, got m={m}, q={d - p}")

    @classmethod
    def from_rs(cls, m: int, r: int, s: int) -> "ModelParams":
        return cls(m=m, p=m + r, d=2 * m + r + s)

    @property
    def q(self) -> int:
        return self.d - self.p

    @property
    def r(self) -> int:
        return self.p - self.m

    @property
    def s(self) -> int:
        return self.d - self.p - self.m

    def to_json(self) -> dict:
        return {"m": self.m, "p": self.p, "d": self.d}


def hooks_of_weight(n: int, max_length: int) -> list[Hook]:
    """All hooks of weight n with at most max_length rows, by increasing leg."""
    if n < 1 or max_length < 1:
        raise DomainError("n and max_length must be positive")
    return [Hook(n - k, k) for k in range(min(n - 1, max_length - 1) + 1)]


def subhooks(alpha: Hook) -> list[Hook]:
    """Nonempty hooks contained in alpha, ordered by (leg, head)."""
    return [Hook(h, l) for l in range(alpha.leg + 1) for h in range(1, alpha.head + 1)]


def nu(tau: Optional[Hook], params: ModelParams) -> int:
    """Decay rate sum_i tau_i (tau_i + r + s + 1 + 2(m - i)); zero for the empty partition."""
    if tau is None:
        return 0
    m = params.m
    if tau.length > m:
        raise DomainError(f"partition {tau} is longer than m={m}")
    c = params.r + params.s + 1 + 2 * m
    return sum(t * (t + c - 2 * i) for i, t in enumerate(tau.parts, start=1))
