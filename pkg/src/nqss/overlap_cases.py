"""Published double-violation cases for overlapping qubit subsets.

Qubits are lettered A, B, C, ...; the reference maxima are the printed ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

from nqss.bell import OverlapSpec
from nqss.errors import InvalidInputError

SQRT2 = sqrt(2)


@dataclass(frozen=True)
class OverlapCase:
    number: int
    larger: str
    smaller: str
    reference_max: float
    reference_possible: bool

    @property
    def label(self) -> str:
        w = {0: "", 1: "s2*", 2: "2*"}[len(self.larger) - len(self.smaller)]
        return f"{self.larger}+{w}{self.smaller}"

    @property
    def spec(self) -> OverlapSpec:
        letters = sorted(set(self.larger) | set(self.smaller))
        k = ord(letters[-1]) - ord("A") + 1
        idx = lambda s: tuple(ord(c) - ord("A") for c in s)
        return OverlapSpec(k, idx(self.larger), idx(self.smaller))


# case 6 is printed as ABCD+ADEF, which relabels to case 7; the single-overlap
# set AEFG matches the stated "impossible" verdict
CASES = (
    OverlapCase(1, "AB", "AC", 4.0, False),
    OverlapCase(2, "ABC", "ADE", 4 * SQRT2, False),
    OverlapCase(3, "ABC", "ABD", 6.0945, True),
    OverlapCase(4, "ABC", "AD", 4 * SQRT2, False),
    OverlapCase(5, "ABC", "AB", 6.9282, True),
    OverlapCase(6, "ABCD", "AEFG", 8.0, False),
    OverlapCase(7, "ABCD", "ABEF", 8.612, True),
    OverlapCase(8, "ABCD", "ABCE", 8.0, False),
    OverlapCase(9, "ABCD", "AE", 8.0, False),
    OverlapCase(10, "ABCD", "AB", 9.7566, True),
    OverlapCase(11, "ABCD", "AEF", 8.0, False),
    OverlapCase(12, "ABCD", "ABE", 6 * SQRT2, True),
    OverlapCase(13, "ABCD", "ABC", 9.6566, True),
    OverlapCase(14, "ABCDE", "ABFGH", 12.088, True),
    OverlapCase(15, "ABCDE", "ABCFG", 8 * SQRT2, False),
    OverlapCase(16, "ABCDE", "ABCDF", 8 * SQRT2, False),
    OverlapCase(17, "ABCDE", "ABF", 12.18, True),
)

POSSIBLE_TOLERANCE = 1e-2


def select_cases(ids=None) -> list[OverlapCase]:
    """Cases by number or label; all cases when ``ids`` is empty."""
    if not ids:
        return list(CASES)
    by_key = {str(c.number): c for c in CASES} | {c.label: c for c in CASES}
    out = []
    for i in ids:
        if str(i) not in by_key:
            raise InvalidInputError(f"unknown case {i!r}; known: {', '.join(c.label for c in CASES)}")
        out.append(by_key[str(i)])
    return out
