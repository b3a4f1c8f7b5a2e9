"""Exact currency amounts in integer minor units.

All prices, bids, historic and target values are ``Money``.  No floating
point ever touches a money path; percentage views are derived on demand
and never stored.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CurrencyMismatch


@dataclass(frozen=True)
class Money:
    """An exact amount of one currency in integer minor units.

    Amounts may be negative only in derived deltas; bid admission
    enforces strict positivity separately.
    """

    amount: int
    currency: str

    def __post_init__(self) -> None:
        if isinstance(self.amount, bool) or not isinstance(self.amount, int):
            raise TypeError(f"amount must be int minor units, got {self.amount!r}")
        if not self.currency or not (self.currency.isascii() and self.currency.isalpha()):
            raise ValueError(f"not a currency code: {self.currency!r}")
        object.__setattr__(self, "currency", self.currency.upper())

    def _same(self, other: Money) -> Money:
        if not isinstance(other, Money):
            raise TypeError(f"expected Money, got {type(other).__name__}")
        if self.currency != other.currency:
            raise CurrencyMismatch(f"{self.currency} vs {other.currency}")
        return other

    def __add__(self, other: Money) -> Money:
        return Money(self.amount + self._same(other).amount, self.currency)

    def __sub__(self, other: Money) -> Money:
        return Money(self.amount - self._same(other).amount, self.currency)

    def __mul__(self, n: int) -> Money:
        if isinstance(n, bool) or not isinstance(n, int):
            raise TypeError("Money multiplies by int only")
        return Money(self.amount * n, self.currency)

    __rmul__ = __mul__

    def __neg__(self) -> Money:
        return Money(-self.amount, self.currency)

    def __lt__(self, other: Money) -> bool:
        return self.amount < self._same(other).amount

    def __le__(self, other: Money) -> bool:
        return self.amount <= self._same(other).amount

    def __gt__(self, other: Money) -> bool:
        return self.amount > self._same(other).amount

    def __ge__(self, other: Money) -> bool:
        return self.amount >= self._same(other).amount

    @property
    def is_positive(self) -> bool:
        return self.amount > 0

    def __str__(self) -> str:
        return f"{self.amount} {self.currency}"
