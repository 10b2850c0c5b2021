"""
Exact sequences on affine grids offset + N, b-file fixtures, and identity
checks between named sequences.
"""

import json
import re
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path

from flint import fmpq

from .field import to_rational
from .parser import ParseError, eval_sequence_expr, parse_expression, parse_operator, referenced_sequences

FIXTURE_DIR = Path(__file__).parent / "fixtures"
SPEC_DIR = Path(__file__).parent / "specs"
OEIS_URL = "https://oeis.org/{id}/b{digits}.txt"

_ID = re.compile(r"^A(\d{6})$")


class SequenceError(ValueError):
    pass


class OutOfRangeError(SequenceError, IndexError):
    def __init__(self, name, index):
        super().__init__(f"sequence {name or '?'} not defined at index {index}")
        self.name = name
        self.index = index


class SingularPointError(SequenceError):
    def __init__(self, index):
        super().__init__(f"leading coefficient vanishes when solving for index {index}")
        self.index = index


def _half_integer(q):
    q = to_rational(q)
    if (2 * q).q != 1:
        raise SequenceError(f"offset {q} is not in (1/2)Z")
    return q


@dataclass(frozen=True)
class SequenceGrid:
    """Values at offset, offset + 1, ..., all exact rationals."""

    offset: fmpq
    values: tuple
    provenance: str = "formula"
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "offset", _half_integer(self.offset))
        object.__setattr__(self, "values", tuple(to_rational(v) for v in self.values))

    def __len__(self):
        return len(self.values)

    @property
    def stop(self):
        """One past the last index."""
        return self.offset + len(self.values)

    def indices(self):
        return [self.offset + k for k in range(len(self.values))]

    def position(self, index):
        k = to_rational(index) - self.offset
        if k.q != 1 or k < 0 or k >= len(self.values):
            return None
        return int(k.p)

    def __contains__(self, index):
        return self.position(index) is not None

    def __getitem__(self, index):
        k = self.position(index)
        if k is None:
            raise OutOfRangeError(self.name, index)
        return self.values[k]

    def head(self, count):
        return self.values[:count]

    def with_values(self, values, provenance=None):
        return SequenceGrid(self.offset, tuple(values), provenance or self.provenance, self.name)


def unroll(L, initials, count):
    """Extend ``initials`` with L(u) = 0 to ``count`` values in total.

    The first ord(L) values of ``initials`` are kept; solving for u(x + n)
    needs the leading coefficient to be nonzero at x.
    """
    n = L.order
    if n < 1:
        raise SequenceError("operator of positive order required")
    if len(initials) < n:
        raise SequenceError(f"need {n} initial values, got {len(initials)}")
    P = L.clear_denominators()
    coeffs = [c.num for c in P.coeffs]
    vals = list(initials.values[:max(n, count)])
    off = initials.offset
    while len(vals) < count:
        k = len(vals) - n
        x = off + k
        lead = coeffs[n](x)
        if lead == 0:
            raise SingularPointError(x + n)
        s = fmpq(0)
        for i in range(n):
            if not coeffs[i].is_zero():
                s += coeffs[i](x) * vals[k + i]
        vals.append(-s / lead)
    return SequenceGrid(off, tuple(vals), "unrolled", initials.name)


def annihilates(L, grid):
    """Indices x with x, ..., x + ord(L) on the grid where L(u)(x) != 0."""
    n = L.order
    bad = []
    for x in grid.indices()[: max(0, len(grid) - n)]:
        if L.apply(grid.__getitem__, x) != 0:
            bad.append(x)
    return bad


# --- b-files ----------------------------------------------------------------


def parse_bfile(text, name=""):
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) < 2:
            raise SequenceError(f"malformed b-file line {lineno}: {line!r}")
        try:
            idx, val = int(parts[0]), int(parts[1])
        except ValueError:
            raise SequenceError(f"malformed b-file line {lineno}: {line!r}") from None
        if entries and idx != entries[-1][0] + 1:
            raise SequenceError(f"b-file line {lineno}: index {idx} does not follow {entries[-1][0]}")
        entries.append((idx, val))
    if not entries:
        raise SequenceError("empty b-file")
    return SequenceGrid(entries[0][0], tuple(v for _, v in entries), "fixture", name)


def format_bfile(grid, comment=None):
    lines = [f"# {comment}"] if comment else []
    for idx, v in zip(grid.indices(), grid.values):
        if v.q != 1 or idx.q != 1:
            raise SequenceError("b-files hold integer indices and values")
        lines.append(f"{idx.p} {v.p}")
    return "\n".join(lines) + "\n"


def fetch_bfile(seq_id, fixtures=None, net=False, timeout=30):
    """Load a b-file from the fixture directory, or from the OEIS if ``net``."""
    m = _ID.match(seq_id or "")
    if not m:
        raise SequenceError(f"not an OEIS id: {seq_id!r}")
    directory = Path(fixtures) if fixtures else FIXTURE_DIR
    path = directory / f"b{m.group(1)}.txt"
    if path.exists():
        return parse_bfile(path.read_text(), seq_id)
    if not net:
        raise SequenceError(f"{seq_id} not found in {directory} and network access is disabled")
    url = OEIS_URL.format(id=seq_id, digits=m.group(1))
    with urllib.request.urlopen(url, timeout=timeout) as resp:
        text = resp.read().decode("ascii")
    grid = parse_bfile(text, seq_id)
    directory.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(text)
    tmp.replace(path)
    return grid


def known_recurrences(fixtures=None):
    """{id: operator} stored next to the fixtures, in absolute indices."""
    directory = Path(fixtures) if fixtures else FIXTURE_DIR
    path = directory / "recurrences.json"
    if not path.exists():
        return {}
    data = json.loads(path.read_text())
    return {k: parse_operator(v) for k, v in data.items()}


# --- identities -------------------------------------------------------------


class _Unrolled:
    """Solution of an operator on one or more grids, extended on demand."""

    def __init__(self, name, L, initial):
        self.name = name
        self.L = L
        groups = {}
        for idx, val in sorted(initial.items(), key=lambda kv: kv[0]):
            groups.setdefault(idx - idx.floor(), []).append((idx, val))
        self.grids = {}
        for frac, items in groups.items():
            idxs = [i for i, _ in items]
            if idxs != [idxs[0] + k for k in range(len(idxs))]:
                raise SequenceError(f"{name}: initial values must be consecutive on each grid")
            self.grids[frac] = SequenceGrid(idxs[0], tuple(v for _, v in items), "unrolled", name)

    def __call__(self, index):
        frac = index - index.floor()
        grid = self.grids.get(frac)
        if grid is None or index < grid.offset:
            raise OutOfRangeError(self.name, index)
        if index not in grid:
            need = int((index - grid.offset).p) + 1
            grid = unroll(self.L, grid, max(need, 2 * len(grid)))
            self.grids[frac] = grid
        return grid[index]


class _Formula:
    def __init__(self, name, expr, resolve):
        self.name = name
        self.text = expr
        self.node = parse_expression(expr)
        self.resolve = resolve
        self.cache = {}
        self.active = False

    def __call__(self, index):
        if index in self.cache:
            return self.cache[index]
        if self.active:
            raise SequenceError(f"sequence {self.name} is defined in terms of itself")
        self.active = True
        try:
            v = eval_sequence_expr(self.node, self.text, index, self.resolve)
        finally:
            self.active = False
        self.cache[index] = v
        return v


@dataclass
class IdentitySpec:
    """``lhs = rhs`` over named sequences, checked for n in [lo, hi].

    ``hi = None`` runs until some operand leaves its range.
    """

    name: str
    sequences: dict
    identity: str
    lo: int = 0
    hi: int = None

    @classmethod
    def from_dict(cls, data):
        rng = data.get("range", [0, None])
        if len(rng) != 2:
            raise SequenceError("range must be [lo, hi]")
        return cls(name=data.get("name", ""), sequences=data.get("sequences", {}),
                   identity=data["identity"], lo=int(rng[0]),
                   hi=None if rng[1] is None else int(rng[1]))

    @classmethod
    def load(cls, path):
        """Load a JSON spec; a bare name refers to a shipped spec."""
        p = Path(path)
        if not p.exists() and (SPEC_DIR / f"{p.stem}.json").exists() and p.parent == Path("."):
            p = SPEC_DIR / f"{p.stem}.json"
        return cls.from_dict(json.loads(p.read_text()))

    def sides(self):
        if self.identity.count("=") != 1:
            raise SequenceError("identity must have the form lhs = rhs")
        lhs, rhs = self.identity.split("=")
        return lhs.strip(), rhs.strip()


@dataclass
class IdentityReport:
    name: str
    passed: bool
    lo: int
    hi: int
    first_failure: tuple = None
    checked: int = 0
    notes: list = field(default_factory=list)

    def __str__(self):
        status = "pass" if self.passed else f"FAIL at n = {self.first_failure[0]}"
        return f"{self.name}: {status} (checked n = {self.lo}..{self.hi}, {self.checked} indices)"

    def as_dict(self):
        out = {"name": self.name, "passed": self.passed, "range": [self.lo, self.hi], "checked": self.checked}
        if self.first_failure:
            n, a, b = self.first_failure
            out["first_failure"] = {"n": n, "lhs": str(a), "rhs": str(b)}
        return out


def build_sequences(specs, fixtures=None, net=False):
    """Turn the ``sequences`` block of an identity spec into callables."""
    table = {}

    def resolve(name, index):
        if name not in table:
            raise SequenceError(f"unknown sequence {name!r}")
        return table[name](to_rational(index))

    for name, spec in specs.items():
        src = spec.get("source")
        if src == "fixture":
            grid = fetch_bfile(spec.get("id", name), fixtures=fixtures, net=net)
            table[name] = grid.__getitem__
        elif src == "values":
            grid = SequenceGrid(spec.get("offset", 0), tuple(spec["values"]), "fixture", name)
            table[name] = grid.__getitem__
        elif src == "unroll":
            L = parse_operator(spec["operator"])
            initial = {to_rational(k): to_rational(v) for k, v in spec["initial"].items()}
            if len(initial) % L.order:
                raise SequenceError(f"{name}: {L.order} initial values per grid expected")
            table[name] = _Unrolled(name, L, initial)
        elif src == "formula":
            table[name] = _Formula(name, spec["expr"], resolve)
        else:
            raise SequenceError(f"{name}: unknown source {src!r}")
    return table, resolve


def shipped_specs():
    return sorted(SPEC_DIR.glob("*.json"))


def verify_identity(spec, fixtures=None, net=False):
    if isinstance(spec, dict):
        spec = IdentitySpec.from_dict(spec)
    table, resolve = build_sequences(spec.sequences, fixtures, net)
    lhs_text, rhs_text = spec.sides()
    lhs, rhs = parse_expression(lhs_text), parse_expression(rhs_text)
    missing = (referenced_sequences(lhs) | referenced_sequences(rhs)) - set(table)
    if missing:
        raise SequenceError(f"undefined sequences: {', '.join(sorted(missing))}")
    n = spec.lo
    checked = 0
    while spec.hi is None or n <= spec.hi:
        try:
            a = eval_sequence_expr(lhs, lhs_text, n, resolve)
            b = eval_sequence_expr(rhs, rhs_text, n, resolve)
        except OutOfRangeError:
            if spec.hi is None and checked:
                break
            raise SequenceError(f"{spec.name}: insufficient data at n = {n}") from None
        checked += 1
        if a != b:
            return IdentityReport(spec.name, False, spec.lo, n, (n, a, b), checked)
        n += 1
    return IdentityReport(spec.name, True, spec.lo, n - 1, None, checked)


__all__ = [
    "SequenceGrid", "unroll", "annihilates", "parse_bfile", "format_bfile", "fetch_bfile",
    "known_recurrences", "shipped_specs", "IdentitySpec", "IdentityReport", "verify_identity", "build_sequences",
    "SequenceError", "OutOfRangeError", "SingularPointError", "ParseError",
]
