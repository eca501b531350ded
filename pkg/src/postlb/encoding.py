# SPDX-License-Identifier: Apache-2.0
"""
Box-state encoding of formulas.

Each surface symbol of the formula text syntax maps to a fixed 5-box
pattern over ``b``/``m``. The table is a frozen wire format (see
``docs/symbol-code.md``); changing it changes every golden layout.

Patterns are pairwise distinct and none is all-blank. Every symbol that can
open a formula (``x``, ``!``, ``(``, ``T``, ``F``) starts with a blank box,
so the first box of any encoded formula is blank.
"""

from postlb.boolean import Formula, parse_formula, to_text
from postlb.errors import EncodingError, FramingError, UnknownPatternError

SYMBOL_WIDTH = 5

SYMBOL_CODE: dict[str, str] = {
    "(": "bbbbm",
    "x": "bbbmb",
    "!": "bbbmm",
    "T": "bbmbb",
    "F": "bbmbm",
    "0": "mbbbb",
    "1": "mbbbm",
    "2": "mbbmb",
    "3": "mbbmm",
    "4": "mbmbb",
    "5": "mbmbm",
    "6": "mbmmb",
    "7": "mbmmm",
    "8": "mmbbb",
    "9": "mmbbm",
    ")": "mmbmb",
    "&": "mmbmm",
    "|": "mmmbb",
}

_DECODE: dict[str, str] = {pattern: symbol for symbol, pattern in SYMBOL_CODE.items()}


def encode_text(text: str) -> str:
    try:
        return "".join(SYMBOL_CODE[symbol] for symbol in text if not symbol.isspace())
    except KeyError as exc:
        raise EncodingError(f"symbol {exc.args[0]!r} has no box pattern") from exc


def decode_text(boxes: str) -> str:
    if len(boxes) % SYMBOL_WIDTH:
        raise FramingError(
            f"{len(boxes)} boxes is not a multiple of the symbol width {SYMBOL_WIDTH}"
        )
    symbols = []
    for offset in range(0, len(boxes), SYMBOL_WIDTH):
        chunk = boxes[offset : offset + SYMBOL_WIDTH]
        symbol = _DECODE.get(chunk)
        if symbol is None:
            raise UnknownPatternError(chunk, offset)
        symbols.append(symbol)
    return "".join(symbols)


def encode_formula(phi: Formula) -> str:
    return encode_text(to_text(phi))


def decode_formula(boxes: str) -> Formula:
    return parse_formula(decode_text(boxes))
