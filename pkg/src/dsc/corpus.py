"""Stored test corpora: small semigroups, Rees specs and Clifford systems.

``data/semigroups_le4.json`` lists semigroups up to isomorphism and
anti-isomorphism; it is produced by :func:`generate_semigroups` and the test
suite regenerates it and compares.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from itertools import permutations

from .clifford import CliffordSystem, adjoined_identity_system, validate_system
from .groups import Table, corpus_group, cyclic_group
from .rees import ReesSpec

CORPUS_MAX_ORDER = 4


def _canonical(table: list[list[int]], perms) -> Table:
    n = len(table)
    best = None
    for t in (table, [list(col) for col in zip(*table)]):
        for p in perms:
            inv = [0] * n
            for i, pi in enumerate(p):
                inv[pi] = i
            # relabelled[x][y] = p(t[p^-1 x][p^-1 y])
            cand = tuple(tuple(p[t[inv[x]][inv[y]]] for y in range(n)) for x in range(n))
            if best is None or cand < best:
                best = cand
    return best


def _labelled_semigroups(n: int):
    t = [[-1] * n for _ in range(n)]
    cells = [(x, y) for x in range(n) for y in range(n)]

    def consistent(x: int, y: int) -> bool:
        # Only triples that use the freshly set cell (x, y) can newly fail.
        v = t[x][y]
        for z in range(n):
            # (x y) z == x (y z)
            a, yz = t[v][z], t[y][z]
            if a >= 0 and yz >= 0 and t[x][yz] >= 0 and a != t[x][yz]:
                return False
            # (w x) y == w (x y)
            wx = t[z][x]
            if wx >= 0 and t[wx][y] >= 0 and t[z][v] >= 0 and t[wx][y] != t[z][v]:
                return False
        for w in range(n):
            for z in range(n):
                # (w z) with w z == x: (x) y vs w (z y)
                if t[w][z] == x and t[z][y] >= 0 and t[w][t[z][y]] >= 0 and t[w][t[z][y]] != v:
                    return False
                # x (y) with z w == y: (x z) w vs x y
                if t[z][w] == y and t[x][z] >= 0 and t[t[x][z]][w] >= 0 and t[t[x][z]][w] != v:
                    return False
        return True

    def rec(k: int):
        if k == len(cells):
            yield [row[:] for row in t]
            return
        x, y = cells[k]
        for v in range(n):
            t[x][y] = v
            if consistent(x, y):
                yield from rec(k + 1)
        t[x][y] = -1

    yield from rec(0)


def generate_semigroups(n: int) -> list[Table]:
    """Representatives of all semigroups of order n up to (anti-)isomorphism."""
    perms = list(permutations(range(n)))
    reps = {_canonical(t, perms) for t in _labelled_semigroups(n)}
    return sorted(reps)


@lru_cache(maxsize=None)
def semigroup_corpus() -> dict[int, tuple[Table, ...]]:
    raw = json.loads(resources.files("dsc").joinpath("data/semigroups_le4.json").read_text())
    return {
        int(order): tuple(tuple(tuple(row) for row in t) for t in tables)
        for order, tables in raw.items()
    }


def write_semigroup_corpus(path, max_order: int = CORPUS_MAX_ORDER):
    data = {str(n): [list(map(list, t)) for t in generate_semigroups(n)] for n in range(1, max_order + 1)}
    with open(path, "w") as fh:
        json.dump(data, fh, separators=(",", ":"))
        fh.write("\n")


# (group order, a, b, P) with P indexed [lambda][i]; every materialized order is <= 12.
_REES = [
    (1, 2, 2, [[0, 0], [0, 0]]),
    (1, 1, 2, [[0], [0]]),
    (1, 2, 1, [[0, 0]]),
    (2, 1, 1, [[1]]),
    (2, 1, 2, [[0], [1]]),
    (2, 2, 1, [[0, 1]]),
    (2, 2, 2, [[0, 0], [0, 0]]),
    (2, 2, 2, [[0, 0], [0, 1]]),
    (2, 2, 2, [[1, 0], [0, 1]]),
    (3, 1, 2, [[0], [1]]),
    (3, 2, 2, [[0, 0], [0, 0]]),
    (3, 2, 2, [[0, 0], [0, 1]]),
    (3, 2, 2, [[0, 1], [2, 0]]),
    (3, 2, 2, [[2, 1], [1, 2]]),
]


def rees_corpus() -> list[ReesSpec]:
    return [ReesSpec(cyclic_group(n), a, b, P) for n, a, b, P in _REES]


def clifford_corpus() -> dict[str, CliffordSystem]:
    """Small strong semilattices of groups, each of order at most 6."""
    chain2 = [[0, 1], [1, 1]]
    chain3 = [[0, 1, 2], [1, 1, 2], [2, 2, 2]]
    vee = [[0, 2, 2], [2, 1, 2], [2, 2, 2]]  # 0 and 1 incomparable above 2
    Z1, Z2, Z3, Z4 = (cyclic_group(n) for n in (1, 2, 3, 4))
    V4 = corpus_group("V4")
    return {
        "Z2": validate_system([[0]], [Z2], {}),
        "chain2-trivial": validate_system(chain2, [Z1, Z1], {(0, 1): [0]}),
        "Z2-over-trivial": validate_system(chain2, [Z2, Z1], {(0, 1): [0, 0]}),
        "Z2-with-identity": adjoined_identity_system(Z2),
        "Z4-with-identity": adjoined_identity_system(Z4),
        "Z2-over-Z2": validate_system(chain2, [Z2, Z2], {(0, 1): [0, 1]}),
        "Z3-over-Z3": validate_system(chain2, [Z3, Z3], {(0, 1): [0, 1, 2]}),
        "Z4-over-Z2": validate_system(chain2, [Z4, Z2], {(0, 1): [0, 1, 0, 1]}),
        "V4-over-Z2": validate_system(chain2, [V4, Z2], {(0, 1): [x % 2 for x in range(4)]}),
        "chain3-Z2-Z2-trivial": validate_system(
            chain3, [Z2, Z2, Z1], {(0, 1): [0, 1], (0, 2): [0, 0], (1, 2): [0, 0]}
        ),
        "vee-Z2": validate_system(vee, [Z2, Z2, Z2], {(0, 2): [0, 1], (1, 2): [0, 1]}),
    }
