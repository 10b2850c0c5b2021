"""Regenerate the shipped b-files from closed forms and defining sums."""

import argparse
import json
from fractions import Fraction
from math import comb
from pathlib import Path

from lindiff.parser import parse_operator
from lindiff.sequences import FIXTURE_DIR, SequenceGrid, format_bfile, unroll

L_A260772 = (
    "(x+5)*(x+4)*(25*x^2+130*x+141)*t^4 - 30*(x+4)*(7*x+13)*t^3"
    " - (1100*x^4+12320*x^3+48664*x^2+80740*x+47400)*t^2"
    " + 120*(x+6)*(x+1)*t - 16*x*(x+1)*(25*x^2+180*x+296)"
)

RECURRENCES = {
    "A260772": L_A260772,
    "A002426": "(x+2)*t^2 - (2*x+3)*t - 3*(x+1)",
    "A001850": "(x+2)*t^2 - 3*(2*x+3)*t + (x+1)",
    "A001003": "(x+3)*t^2 - 3*(2*x+3)*t + x",
    "A295371": "(2*x+1)*(x+3)^2*t^3 - (2*x+1)*(7*x^2+38*x+52)*t^2"
    " - 3*(2*x+5)*(7*x^2+4*x+1)*t + 27*(2*x+5)*x^2",
}


def a002426(n):
    return sum(comb(n, 2 * k) * comb(2 * k, k) for k in range(n // 2 + 1))


def a001850(n):
    return sum(comb(n, k) * comb(n + k, k) for k in range(n + 1))


def a001003(n):
    if n == 0:
        return 1
    return sum(comb(n, k) * comb(n, k - 1) * 2 ** (k - 1) for k in range(1, n + 1)) // n


def a295371(n):
    s = sum(comb(n - 1, k) * comb(n + k, k) * comb(2 * k, k) * (k + 2) * (-3) ** (n - 1 - k) for k in range(n))
    return Fraction(s, 2 * n)


def a178808(n):
    return Fraction(sum((2 * k + 1) * a001850(k) ** 2 for k in range(n)), n * n)


def a268138(n):
    return Fraction(sum(a001850(k) * a001003(k + 1) for k in range(n)), n)


def a260772(count):
    L = parse_operator(L_A260772)
    return unroll(L, SequenceGrid(0, (1, 3, 10, 41)), count).values


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=FIXTURE_DIR)
    ap.add_argument("--terms", type=int, default=121)
    args = ap.parse_args()
    out, m = args.out, args.terms
    out.mkdir(parents=True, exist_ok=True)
    tables = {
        "A260772": (0, a260772(2 * m - 1), "unrolled from its order-4 recurrence, initial terms 1, 3, 10, 41"),
        "A002426": (0, [a002426(n) for n in range(m)], "sum C(n,2k) C(2k,k)"),
        "A001850": (0, [a001850(n) for n in range(m)], "sum C(n,k) C(n+k,k)"),
        "A001003": (0, [a001003(n) for n in range(m)], "(1/n) sum C(n,k) C(n,k-1) 2^(k-1)"),
        "A295371": (1, [a295371(n) for n in range(1, m)], "(1/(2n)) sum C(n-1,k) C(n+k,k) C(2k,k) (k+2) (-3)^(n-1-k)"),
        "A178808": (1, [a178808(n) for n in range(1, m)], "(1/n^2) sum (2k+1) A001850(k)^2"),
        "A268138": (1, [a268138(n) for n in range(1, m)], "(1/n) sum A001850(k) A001003(k+1)"),
    }
    for seq_id, (offset, values, how) in tables.items():
        grid = SequenceGrid(offset, tuple(values), "fixture", seq_id)
        (out / f"b{seq_id[1:]}.txt").write_text(format_bfile(grid, f"{seq_id}: {how}"))
    (out / "recurrences.json").write_text(json.dumps(RECURRENCES, indent=2) + "\n")


if __name__ == "__main__":
    main()
