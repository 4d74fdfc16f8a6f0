"""Totally ordered values: -inf < any integer < +inf.

Genus-type invariants take values in an ordered set that, for every use
in this package, is the integers extended by the two infinities.  Plain
floats are avoided so that all arithmetic stays exact.
"""

from __future__ import annotations

import functools

from .errors import KirbyCalcError

_NEG, _FIN, _POS = -1, 0, 1


@functools.total_ordering
class OrderedValue:
    """An integer, or one of the two infinities."""

    __slots__ = ("_kind", "_n")

    def __init__(self, kind, n=0):
        if kind not in (_NEG, _FIN, _POS):
            raise ValueError(f"bad kind {kind!r}")
        self._kind = kind
        self._n = int(n) if kind == _FIN else 0

    @classmethod
    def of(cls, x) -> "OrderedValue":
        if isinstance(x, OrderedValue):
            return x
        if isinstance(x, bool):
            raise TypeError("bool is not an ordered value")
        if isinstance(x, int):
            return cls(_FIN, x)
        raise TypeError(f"cannot coerce {x!r} to an ordered value")

    @property
    def is_finite(self) -> bool:
        return self._kind == _FIN

    @property
    def finite(self) -> int:
        if self._kind != _FIN:
            raise KirbyCalcError(f"{self} is not finite")
        return self._n

    def _key(self):
        return (self._kind, self._n)

    def __eq__(self, other):
        try:
            other = OrderedValue.of(other)
        except TypeError:
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other):
        try:
            other = OrderedValue.of(other)
        except TypeError:
            return NotImplemented
        return self._key() < other._key()

    def __hash__(self):
        return hash(self._key())

    def __add__(self, other):
        other = OrderedValue.of(other)
        kinds = {self._kind, other._kind}
        if kinds == {_NEG, _POS}:
            raise KirbyCalcError("cannot add -inf and +inf")
        if _POS in kinds:
            return POS_INF
        if _NEG in kinds:
            return NEG_INF
        return OrderedValue(_FIN, self._n + other._n)

    __radd__ = __add__

    def __str__(self):
        if self._kind == _NEG:
            return "-inf"
        if self._kind == _POS:
            return "inf"
        return str(self._n)

    def __repr__(self):
        return f"OrderedValue({self})"

    @classmethod
    def parse(cls, text: str) -> "OrderedValue":
        text = text.strip()
        if text == "inf" or text == "+inf":
            return POS_INF
        if text == "-inf":
            return NEG_INF
        try:
            return cls(_FIN, int(text))
        except ValueError:
            raise ValueError(f"not an ordered value: {text!r}") from None


NEG_INF = OrderedValue(_NEG)
POS_INF = OrderedValue(_POS)
