"""Named-block shorthand for long literals.

``expand("21 W1 W1* W1 212")`` substitutes the named blocks below; a ``*``
right after a name puts the pivot on that block's distinguished digit. The
result is a plain literal accepted by :func:`spectra_gap.words.parse`.
"""

from __future__ import annotations

import re

# name -> (digits, index of the pivot digit when the block is starred)
BLOCKS: dict[str, tuple[str, int]] = {
    "W1": ("212332111", 4),
    "W1T": ("111233212", 4),
    "W2": ("123332112", 4),
    "W2T": ("211233321", 4),
    "WF": ("2212112", 3),
    "WFT": ("2112122", 3),
}

_TOKEN = re.compile(r"(?<![A-Za-z])(W1T|W2T|WFT|W1|W2|WF)(\*?)")


def expand(text: str) -> str:
    """Replace named blocks by their digits."""

    def sub(m: re.Match) -> str:
        digits, pivot = BLOCKS[m.group(1)]
        if m.group(2):
            return digits[: pivot + 1] + "*" + digits[pivot + 1 :]
        return digits

    return _TOKEN.sub(sub, text)
