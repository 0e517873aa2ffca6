"""Text forms of integer polynomials.

Two syntaxes are read and written:

* expressions such as ``x^80 - 2x^78 + 3`` (``^`` or ``**`` for powers,
  implicit or explicit ``*`` between coefficient and ``x``);
* bracketed coefficient lists in DESCENDING order, ``[1, 2, 1, 1]`` being
  x^3 + 2x^2 + x + 1.

The canonical JSON form is ``{"coeffs_desc": ["1", "2", "1", "1"]}``: decimal
strings, since coefficients routinely exceed 2**53.
"""

from collections.abc import Mapping, Sequence
from typing import Any

from factor_bounds.exceptions import PolynomialSyntaxError
from factor_bounds.polycore import IntPoly


DIGITS = frozenset("0123456789")

# below the interpreter's int <-> str digit limit
_CHUNK = 4000
_CHUNK_BASE = 10**_CHUNK


def decimal_to_int(text: str) -> int:
    """Exact value of an optionally signed ASCII decimal string of any length.

    Raises:
        ValueError: If the text is not a signed run of ASCII digits.
    """
    digits = text.strip()
    sign = -1 if digits.startswith("-") else 1
    digits = digits.removeprefix("-") if sign < 0 else digits.removeprefix("+")
    if not digits or not DIGITS.issuperset(digits):
        raise ValueError(f"invalid decimal integer: {text!r}")
    value = 0
    for start in range(0, len(digits), _CHUNK):
        chunk = digits[start : start + _CHUNK]
        value = value * 10 ** len(chunk) + int(chunk)
    return sign * value


def int_to_decimal(value: int) -> str:
    """Decimal string of an int of any size."""
    magnitude = abs(value)
    chunks: list[str] = []
    while magnitude >= _CHUNK_BASE:
        magnitude, low = divmod(magnitude, _CHUNK_BASE)
        chunks.append(f"{low:0{_CHUNK}d}")
    chunks.append(str(magnitude))
    text = "".join(reversed(chunks))
    return f"-{text}" if value < 0 else text


class _Reader:
    """Cursor over the input text with whitespace skipping."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> PolynomialSyntaxError:
        return PolynomialSyntaxError(message, self.text, self.pos)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, token: str) -> bool:
        self.skip()
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def number(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in DIGITS:
            self.pos += 1
        if start == self.pos:
            raise self.error("expected a number")
        return decimal_to_int(self.text[start : self.pos])

    def sign(self) -> int:
        if self.take("-"):
            return -1
        self.take("+")
        return 1


def _parse_list(reader: _Reader) -> IntPoly:
    reader.take("[")
    coeffs: list[int] = []
    if reader.take("]"):
        raise reader.error("empty coefficient list")
    while True:
        sign = reader.sign()
        coeffs.append(sign * reader.number())
        if reader.take("]"):
            break
        if not reader.take(","):
            raise reader.error("expected ',' or ']'")
    if not reader.at_end():
        raise reader.error("unexpected text after coefficient list")
    return IntPoly.from_desc(coeffs)


def _parse_power(reader: _Reader) -> int:
    if reader.take("**") or reader.take("^"):
        return reader.number()
    return 1


def _parse_term(reader: _Reader) -> tuple[int, int]:
    """Read one term, returning (coefficient, power)."""
    coefficient = 1
    if reader.peek() in DIGITS:
        coefficient = reader.number()
        explicit = reader.take("*")
        if reader.peek() != "x":
            if explicit:
                raise reader.error("expected 'x' after '*'")
            return coefficient, 0
    if not reader.take("x"):
        raise reader.error("expected a coefficient or 'x'")
    return coefficient, _parse_power(reader)


def _parse_expr(reader: _Reader) -> IntPoly:
    terms: dict[int, int] = {}
    sign = reader.sign()
    while True:
        coefficient, power = _parse_term(reader)
        terms[power] = terms.get(power, 0) + sign * coefficient
        if reader.at_end():
            break
        if reader.take("+"):
            sign = 1
        elif reader.take("-"):
            sign = -1
        else:
            raise reader.error("expected '+' or '-'")
    size = max(terms) + 1
    return IntPoly(terms.get(i, 0) for i in range(size))


def parse(text: str) -> IntPoly:
    """Read a polynomial in expression or descending-list syntax.

    Raises:
        PolynomialSyntaxError: On empty or malformed input, with the position.
    """
    reader = _Reader(text)
    if reader.at_end():
        raise reader.error("empty input")
    if reader.peek() == "[":
        return _parse_list(reader)
    return _parse_expr(reader)


def _monomial(power: int) -> str:
    if power == 0:
        return ""
    if power == 1:
        return "x"
    return f"x^{power}"


def format_expr(p: IntPoly) -> str:
    """Expression form, highest power first."""
    if p.is_zero:
        return "0"
    pieces: list[str] = []
    for power in range(len(p) - 1, -1, -1):
        c = p[power]
        if not c:
            continue
        magnitude = abs(c)
        body = _monomial(power)
        text = f"{int_to_decimal(magnitude)}{body}" if magnitude != 1 or not body else body
        if not pieces:
            pieces.append(f"-{text}" if c < 0 else text)
        else:
            pieces.append(f"- {text}" if c < 0 else f"+ {text}")
    return " ".join(pieces)


def format_list(p: IntPoly) -> str:
    """Bracketed descending coefficient list."""
    return "[" + ", ".join(int_to_decimal(c) for c in p.coeffs_desc) + "]"


def to_json(p: IntPoly) -> dict[str, list[str]]:
    return {"coeffs_desc": [int_to_decimal(c) for c in p.coeffs_desc]}


def coeffs_from_strings(values: Sequence[str | int]) -> IntPoly:
    """Descending list of decimal strings (or ints) to a polynomial."""
    return IntPoly.from_desc(
        value if isinstance(value, int) else decimal_to_int(value) for value in values
    )


def from_json(data: Mapping[str, Any] | Sequence[str] | str) -> IntPoly:
    """Accept the canonical object, a bare descending list, or polynomial text."""
    if isinstance(data, str):
        return parse(data)
    if isinstance(data, Mapping):
        return coeffs_from_strings(data["coeffs_desc"])
    return coeffs_from_strings(data)
