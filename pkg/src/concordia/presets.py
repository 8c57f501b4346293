"""Preset semigroup generators for the workbench.

Transformation presets compose as f*g = f o g (apply g, then f), which makes
constant maps L-related; all other presets are order conventions of their own.
"""
from __future__ import annotations

from itertools import product

from .semigroups import FiniteSemigroup, direct_product, validate_table


def cyclic(n: int) -> FiniteSemigroup:
    """The cyclic group Z_n, identity at 0."""
    if n < 1:
        raise ValueError("cyclic order must be >= 1")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    names = tuple(f"g{i}" for i in range(n))
    return validate_table(table, names=names)


def semilattice_chain(n: int) -> FiniteSemigroup:
    """Meet semilattice on the chain 0 < 1 < ... < n-1."""
    if n < 1:
        raise ValueError("chain length must be >= 1")
    table = [[min(i, j) for j in range(n)] for i in range(n)]
    return validate_table(table)


def left_zero(n: int) -> FiniteSemigroup:
    if n < 1:
        raise ValueError("left-zero order must be >= 1")
    table = [[i] * n for i in range(n)]
    return validate_table(table)


def null(n: int) -> FiniteSemigroup:
    """All products equal 0."""
    if n < 1:
        raise ValueError("null order must be >= 1")
    table = [[0] * n for _ in range(n)]
    return validate_table(table)


def full_transformation(n: int) -> FiniteSemigroup:
    """T_n on n points; product f*g = f o g, i.e. (f*g)(x) = f(g(x))."""
    if n < 1:
        raise ValueError("point count must be >= 1")
    maps = list(product(range(n), repeat=n))
    index = {m: i for i, m in enumerate(maps)}
    table = [[index[tuple(f[g[x]] for x in range(n))] for g in maps] for f in maps]
    names = tuple("[" + ",".join(map(str, m)) + "]" for m in maps)
    return validate_table(table, names=names)


def brandt_b2() -> FiniteSemigroup:
    """The 5-element Brandt semigroup B2: pairs (i,j), i,j in {1,2}, plus 0."""
    elems = ["0", "(1,1)", "(1,2)", "(2,1)", "(2,2)"]
    pair = {1: (1, 1), 2: (1, 2), 3: (2, 1), 4: (2, 2)}
    rev = {v: k for k, v in pair.items()}

    def mul(a, b):
        if a == 0 or b == 0:
            return 0
        (i, j), (k, l) = pair[a], pair[b]
        return rev[(i, l)] if j == k else 0

    table = [[mul(a, b) for b in range(5)] for a in range(5)]
    return validate_table(table, names=tuple(elems))


def monogenic(index: int, period: int) -> FiniteSemigroup:
    """The monogenic semigroup <a | a^(index+period) = a^index>."""
    if index < 1 or period < 1:
        raise ValueError("index and period must be >= 1")
    n = index + period - 1

    def reduce(k):  # exponents live in 1..index+period-1
        while k > n:
            k -= period
        return k

    table = [[reduce(i + j) - 1 for j in range(1, n + 1)] for i in range(1, n + 1)]
    names = tuple(f"a^{k}" for k in range(1, n + 1))
    return validate_table(table, names=names)


def upper_triangular_f2() -> FiniteSemigroup:
    """Upper-triangular 2x2 matrices over GF(2) under matrix product; order 8."""
    mats = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
    index = {m: i for i, m in enumerate(mats)}

    def mul(m1, m2):
        a1, b1, c1 = m1
        a2, b2, c2 = m2
        return (a1 * a2 % 2, (a1 * b2 + b1 * c2) % 2, c1 * c2 % 2)

    table = [[index[mul(m1, m2)] for m2 in mats] for m1 in mats]
    names = tuple(f"[[{a},{b}],[0,{c}]]" for a, b, c in mats)
    return validate_table(table, names=names)


_SIMPLE = {
    "cyclic": lambda args: cyclic(_one_int(args)),
    "semilattice-chain": lambda args: semilattice_chain(_one_int(args)),
    "left-zero": lambda args: left_zero(_one_int(args)),
    "null": lambda args: null(_one_int(args)),
    "full-transformation": lambda args: full_transformation(_one_int(args)),
    "brandt-b2": lambda args: brandt_b2(),
    "monogenic": lambda args: monogenic(*_two_ints(args)),
    "upper-triangular-f2": lambda args: upper_triangular_f2(),
}


def _one_int(args: str) -> int:
    if not args:
        raise ValueError("preset needs one integer parameter, e.g. cyclic:3")
    return int(args)


def _two_ints(args: str) -> tuple[int, int]:
    parts = args.split(",") if args else []
    if len(parts) != 2:
        raise ValueError("preset needs two integer parameters, e.g. monogenic:2,2")
    return int(parts[0]), int(parts[1])


def preset(spec: str) -> FiniteSemigroup:
    """Build a preset from NAME[:params].

    direct-product takes two preset specs joined by '*', e.g.
    direct-product:semilattice-chain:2*cyclic:3.
    """
    name, _, args = spec.partition(":")
    if name == "direct-product":
        parts = args.split("*")
        if len(parts) != 2:
            raise ValueError("direct-product:SPEC*SPEC expects exactly two factor specs")
        return direct_product(preset(parts[0]), preset(parts[1]))
    if name not in _SIMPLE:
        raise ValueError(f"unknown preset {name!r}; known: {sorted(_SIMPLE)} and direct-product")
    return _SIMPLE[name](args)


# Presets used by the verification battery: all concordant.
CONCORDANT_PRESETS = (
    "cyclic:2",
    "cyclic:3",
    "semilattice-chain:2",
    "semilattice-chain:3",
    "left-zero:2",
    "full-transformation:2",
    "brandt-b2",
    "full-transformation:3",
)
