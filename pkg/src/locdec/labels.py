"""Label values and their self-delimiting bit-string encoding.

Every node label is ultimately a finite bit string.  In memory we keep
structured Python values (naturals, tuples, strings, records) and convert
with :func:`encode` / :func:`decode`.  The encoding is prefix-free, so a
sequence of values can be concatenated and read back unambiguously.

Wire format, one 3-bit tag followed by a payload::

    000  natural        gamma(n + 1)
    001  Bits           gamma(len + 1) raw-bits
    010  str            gamma(nbytes + 1) utf-8 bytes
    011  tuple          gamma(len + 1) item*
    100  bool           1 bit
    101  None           -
    110  record         gamma(type_id + 1) field-tuple (untagged tuple payload)

``gamma`` is the Elias gamma code of a positive integer.
"""

from __future__ import annotations

from typing import Any, Callable

from .errors import LabelDecodeError

_NAT, _BITS, _STR, _TUPLE, _BOOL, _NONE, _RECORD = range(7)


class Bits(str):
    """A raw bit string, e.g. the halting-bit oracle label ``b_n``.

    Kept distinct from naturals so that leading zeros (the length) survive.
    """

    __slots__ = ()

    def __new__(cls, value: str = ""):
        if any(ch not in "01" for ch in value):
            raise ValueError(f"not a bit string: {value!r}")
        return super().__new__(cls, value)

    def __repr__(self) -> str:
        return f"Bits({str(self)!r})"

    # never equal to a plain str, so caches and sets keep the two apart
    def __eq__(self, other: object) -> bool:
        return isinstance(other, Bits) and str.__eq__(self, other)

    def __ne__(self, other: object) -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return hash(("Bits", str(self)))

    @property
    def numeric(self) -> int:
        return int(self, 2) if self else 0


# type_id -> (class, to_fields, from_fields)
_RECORDS: dict[int, tuple[type, Callable[[Any], tuple], Callable[[tuple], Any]]] = {}
_RECORD_IDS: dict[type, int] = {}


def register_record(type_id: int, cls: type, to_fields: Callable[[Any], tuple],
                    from_fields: Callable[[tuple], Any]) -> None:
    if type_id in _RECORDS and _RECORDS[type_id][0] is not cls:
        raise ValueError(f"record id {type_id} already taken by {_RECORDS[type_id][0].__name__}")
    _RECORDS[type_id] = (cls, to_fields, from_fields)
    _RECORD_IDS[cls] = type_id


def _gamma(n: int, out: list[str]) -> None:
    b = bin(n)[2:]
    out.append("0" * (len(b) - 1))
    out.append(b)


def _tag(t: int, out: list[str]) -> None:
    out.append(format(t, "03b"))


def _enc(value: Any, out: list[str]) -> None:
    # bool before int: bool is an int subclass
    if value is None:
        _tag(_NONE, out)
    elif isinstance(value, bool):
        _tag(_BOOL, out)
        out.append("1" if value else "0")
    elif isinstance(value, int):
        if value < 0:
            raise ValueError(f"only naturals are encodable, got {value}")
        _tag(_NAT, out)
        _gamma(value + 1, out)
    elif isinstance(value, Bits):
        _tag(_BITS, out)
        _gamma(len(value) + 1, out)
        out.append(str(value))
    elif isinstance(value, str):
        raw = value.encode("utf-8")
        _tag(_STR, out)
        _gamma(len(raw) + 1, out)
        out.extend(format(byte, "08b") for byte in raw)
    elif isinstance(value, tuple):
        _tag(_TUPLE, out)
        _enc_items(value, out)
    elif type(value) in _RECORD_IDS:
        type_id = _RECORD_IDS[type(value)]
        _tag(_RECORD, out)
        _gamma(type_id + 1, out)
        _enc_items(_RECORDS[type_id][1](value), out)
    else:
        raise TypeError(f"cannot encode label value of type {type(value).__name__}")


def _enc_items(items: tuple, out: list[str]) -> None:
    _gamma(len(items) + 1, out)
    for item in items:
        _enc(item, out)


_RECORD_CACHE: dict[Any, str] = {}


def encode(value: Any) -> str:
    """Encode a label value as a string of ``'0'``/``'1'`` characters."""
    # records are memoised; plain tuples are not, since (1,) == (True,)
    if type(value) in _RECORD_IDS:
        cached = _RECORD_CACHE.get(value)
        if cached is None:
            if len(_RECORD_CACHE) > 1 << 20:
                _RECORD_CACHE.clear()
            out: list[str] = []
            _enc(value, out)
            cached = _RECORD_CACHE[value] = "".join(out)
        return cached
    out = []
    _enc(value, out)
    return "".join(out)


class _Reader:
    __slots__ = ("bits", "pos")

    def __init__(self, bits: str):
        self.bits = bits
        self.pos = 0

    def take(self, k: int) -> str:
        if self.pos + k > len(self.bits):
            raise LabelDecodeError("truncated label encoding")
        chunk = self.bits[self.pos:self.pos + k]
        self.pos += k
        return chunk

    def gamma(self) -> int:
        zeros = 0
        while True:
            ch = self.take(1)
            if ch == "1":
                break
            zeros += 1
            if zeros > 64:
                raise LabelDecodeError("gamma code too long")
        return int("1" + self.take(zeros), 2) if zeros else 1

    def value(self) -> Any:
        tag = int(self.take(3), 2)
        if tag == _NAT:
            return self.gamma() - 1
        if tag == _BITS:
            return Bits(self.take(self.gamma() - 1))
        if tag == _STR:
            n = self.gamma() - 1
            raw = bytes(int(self.take(8), 2) for _ in range(n))
            try:
                return raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise LabelDecodeError(str(exc)) from None
        if tag == _TUPLE:
            return self.items()
        if tag == _BOOL:
            return self.take(1) == "1"
        if tag == _NONE:
            return None
        if tag == _RECORD:
            type_id = self.gamma() - 1
            if type_id not in _RECORDS:
                raise LabelDecodeError(f"unknown record type {type_id}")
            fields = self.items()
            try:
                return _RECORDS[type_id][2](fields)
            except (TypeError, ValueError, IndexError) as exc:
                raise LabelDecodeError(f"bad record fields: {exc}") from None
        raise LabelDecodeError(f"unknown tag {tag}")

    def items(self) -> tuple:
        n = self.gamma() - 1
        return tuple(self.value() for _ in range(n))


def decode(bits: str) -> Any:
    """Inverse of :func:`encode`; the whole string must be consumed."""
    if any(ch not in "01" for ch in bits):
        raise LabelDecodeError("label encoding must consist of 0/1 characters")
    reader = _Reader(bits)
    value = reader.value()
    if reader.pos != len(bits):
        raise LabelDecodeError(f"{len(bits) - reader.pos} trailing bits after label")
    return value


def numeric(label: Any) -> int:
    """Numeric reading of an oracle label (naturals and raw bit strings)."""
    if isinstance(label, Bits):
        return label.numeric
    if isinstance(label, bool) or not isinstance(label, int):
        raise TypeError(f"oracle label {label!r} has no numeric value")
    return label


def order_key(label: Any) -> tuple[int, int]:
    """Total preorder used to sort oracle label lists: value, then bit length."""
    if isinstance(label, Bits):
        return (label.numeric, len(label))
    return (numeric(label), label.bit_length())


def nat_to_bits(n: int) -> Bits:
    """Bijective naturals -> bit strings: drop the leading 1 of ``bin(n)`` (n >= 1)."""
    if n < 1:
        raise ValueError("machine indices start at 1")
    return Bits(bin(n)[3:])


def bits_to_nat(bits: str) -> int:
    return int("1" + bits, 2)
