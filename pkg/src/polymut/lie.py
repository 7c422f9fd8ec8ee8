"""Cartan data, reduced words, string-cone data and the GT / FFLV / NO polytope fixtures.

Weights are integer tuples in the fundamental-weight basis, ``lam[i-1] = <lam, h_i>``.
Node labels are 1-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import is_unimodular, rank
from .polytope import RationalPolytope, from_halfspaces, hull
from .posets import MarkedPoset, chain_polytope
from .seeds import Seed

TYPES = ("A", "C", "D", "E")


class WeightError(ValueError):
    pass


@dataclass(frozen=True)
class CartanDatum:
    """``matrix[i-1][j-1] = <alpha_j, h_i>``."""

    type: str
    n: int
    matrix: tuple

    def c(self, i: int, j: int) -> int:
        return self.matrix[i - 1][j - 1]

    @property
    def name(self) -> str:
        return f"{self.type}{self.n}"


def _edges(type_: str, n: int) -> list[tuple[int, int]]:
    if type_ in ("A", "C"):
        return [(i, i + 1) for i in range(1, n)]
    if type_ == "D":
        return [(1, 3), (2, 3)] + [(i, i + 1) for i in range(3, n)]
    # E_n: chain 5-4-3-2-6-7-8 with 1 attached to 3
    chain = [5, 4, 3, 2, 6, 7, 8]
    chain = [v for v in chain if v <= n]
    return [(1, 3)] + list(zip(chain, chain[1:]))


def cartan(type_: str, n: int | None = None) -> CartanDatum:
    """Cartan matrix for ``A_n (n>=1)``, ``C_n (n>=1)``, ``D_n (n>=4)``, ``E_6..E_8``.

    Accepts ``cartan("E7")`` as shorthand.
    """
    t = type_.upper()
    if len(t) > 1 and n is None:
        t, n = t[0], int(t[1:])
    if t not in TYPES or n is None:
        raise ValueError(f"unknown Cartan type {type_!r}")
    n = int(n)
    if (t in ("A", "C") and n < 1) or (t == "D" and n < 4) or (t == "E" and n not in (6, 7, 8)):
        raise ValueError(f"invalid rank {n} for type {t}")
    m = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in _edges(t, n):
        m[i - 1][j - 1] = m[j - 1][i - 1] = -1
    if t == "C" and n >= 2:
        # node 1 is the long simple root
        m[0][1], m[1][0] = -1, -2
    return CartanDatum(t, n, tuple(map(tuple, m)))


def _as_weight(c: CartanDatum, lam: Sequence[int]) -> list[int]:
    lam = [int(x) for x in lam]
    if len(lam) != c.n:
        raise WeightError(f"weight needs {c.n} coordinates, got {len(lam)}")
    return lam


def simple_reflect(c: CartanDatum, i: int, lam: Sequence[int]) -> tuple:
    """``s_i lam = lam - <lam, h_i> alpha_i`` in the fundamental-weight basis."""
    lam = _as_weight(c, lam)
    li = lam[i - 1]
    return tuple(x - li * c.c(j + 1, i) for j, x in enumerate(lam))


def fundamental_weight(c: CartanDatum, i: int) -> tuple:
    return tuple(1 if j == i - 1 else 0 for j in range(c.n))


def rho2(c: CartanDatum) -> tuple:
    return tuple(2 for _ in range(c.n))


def is_dominant(lam: Sequence[int]) -> bool:
    return all(int(x) >= 0 for x in lam)


def _check_dominant(c: CartanDatum, lam: Sequence[int]) -> list[int]:
    lam = _as_weight(c, lam)
    if not is_dominant(lam):
        raise WeightError(f"weight {tuple(lam)} is not dominant")
    return lam


# --- words ---------------------------------------------------------------------

_E6_TAIL = (6, 2, 3, 1, 4, 5, 3, 4, 2, 3, 1, 6, 2, 3, 4, 5)
_E7_TAIL = (7, 6, 2, 3, 1, 4, 5, 3, 4, 2, 3, 1, 6, 2, 3, 4, 5, 7, 6, 2, 3, 1, 4, 3, 2, 6, 7)
_E8_TAIL = (
    8, 7, 6, 2, 3, 1, 4, 5, 3, 4, 2, 3, 1, 6, 2, 3, 4, 5, 7,
    6, 2, 3, 1, 4, 3, 2, 6, 7, 8, 7, 6, 2, 3, 1, 4, 5, 3, 4,
    2, 3, 1, 6, 2, 3, 4, 5, 7, 6, 2, 3, 1, 4, 3, 2, 6, 7, 8,
)  # fmt: skip


def standard_word(type_: str, n: int | None = None) -> tuple:
    """The distinguished reduced word for the longest Weyl group element."""
    c = cartan(type_, n)
    t, n = c.type, c.n
    if t == "A":
        return tuple(i for k in range(1, n + 1) for i in range(k, 0, -1))
    if t == "C":
        word = []
        for k in range(1, n + 1):
            word += list(range(k, 0, -1)) + list(range(2, k + 1))
        return tuple(word)
    if t == "D":
        word = [1, 2]
        for k in range(3, n + 1):
            word += list(range(k, 2, -1)) + [1, 2] + list(range(3, k + 1))
        return tuple(word)
    word = standard_word("D", 5) + _E6_TAIL
    if n >= 7:
        word += _E7_TAIL
    if n >= 8:
        word += _E8_TAIL
    return word


def longest_length(c: CartanDatum) -> int:
    return {"A": c.n * (c.n + 1) // 2, "C": c.n * c.n, "D": c.n * (c.n - 1)}.get(
        c.type, {6: 36, 7: 63, 8: 120}.get(c.n, 0)
    )


def next_occurrence(word: Sequence[int]) -> list[int]:
    """``plus[k-1] = k^+``: next position with the same letter, or ``m+1`` (1-based)."""
    m = len(word)
    out = []
    for k in range(m):
        nxt = next((j for j in range(k + 1, m) if word[j] == word[k]), m)
        out.append(nxt + 1)
    return out


def exchange_from_word(c: CartanDatum, word: Sequence[int]) -> Seed:
    """Seed on positions ``1..m``; a position is frozen when its letter does not recur."""
    word = tuple(int(i) for i in word)
    if any(not 1 <= i <= c.n for i in word):
        raise ValueError("word uses a letter outside the Dynkin diagram")
    m = len(word)
    plus = next_occurrence(word)
    J = tuple(range(1, m + 1))
    J_uf = tuple(s for s in J if plus[s - 1] != m + 1)
    rows = []
    for s in J_uf:
        sp = plus[s - 1]
        row = []
        for t in J:
            tp = plus[t - 1]
            if sp == t:
                v = 1
            elif s == tp:
                v = -1
            elif s < t < sp < tp:
                v = c.c(word[t - 1], word[s - 1])
            elif t < s < tp < sp:
                v = -c.c(word[t - 1], word[s - 1])
            else:
                v = 0
            row.append(v)
        rows.append(tuple(row))
    return Seed(J, J_uf, tuple(rows))


def m_matrix(c: CartanDatum, word: Sequence[int]) -> tuple:
    """``d[s][t] = <s_{i_{t+1}} ... s_{i_s} varpi_{i_s}, h_{i_t}>`` for ``t <= s``, else 0."""
    word = tuple(int(i) for i in word)
    m = len(word)
    d = [[0] * m for _ in range(m)]
    for s in range(m):
        v = fundamental_weight(c, word[s])
        for t in range(s, -1, -1):
            d[s][t] = v[word[t] - 1]
            v = simple_reflect(c, word[t], v)
    return tuple(map(tuple, d))


def string_interior_point(c: CartanDatum, word: Sequence[int]) -> tuple:
    """``a_j = sum over frozen k >= j of d[k][j]``."""
    d = m_matrix(c, word)
    plus = next_occurrence(word)
    m = len(word)
    frozen = [k for k in range(m) if plus[k] == m + 1]
    return tuple(sum(d[k][j] for k in frozen) for j in range(m))


def check_word_data(c: CartanDatum, word: Sequence[int]) -> dict:
    """Unimodularity of ``M`` and full rank of the exchange matrix."""
    seed = exchange_from_word(c, word)
    return {
        "m_unimodular": is_unimodular(m_matrix(c, word)),
        "epsilon_full_rank": rank(seed.epsilon) == len(seed.J_uf) if seed.J_uf else True,
    }


# --- Gelfand-Tsetlin patterns -------------------------------------------------------


def _le(vec_pos: dict, n: int, small, big) -> tuple:
    """Half-space ``small <= big``; each side is a coordinate key or an integer."""
    vec = [0] * n
    rhs = 0
    if small in vec_pos:
        vec[vec_pos[small]] += 1
    else:
        rhs -= small
    if big in vec_pos:
        vec[vec_pos[big]] -= 1
    else:
        rhs += big
    return tuple(vec), Fraction(rhs)


def gt_coordinates_A(n: int) -> list[tuple]:
    """Keys ``(i, j)`` for ``a_j^(i)``, read row by row."""
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 2 - i)]


def gt_polytope_A(n: int, lam: Sequence[int]) -> RationalPolytope:
    c = cartan("A", n)
    lam = _check_dominant(c, lam)
    top = [sum(lam[k - 1 :]) for k in range(1, n + 1)] + [0]
    keys = gt_coordinates_A(n)
    pos = {k: p for p, k in enumerate(keys)}
    hs = []
    for i, j in keys:
        above_l = top[j - 1] if i == 1 else (i - 1, j)
        above_r = top[j] if i == 1 else (i - 1, j + 1)
        hs.append(_le(pos, len(keys), (i, j), above_l))
        hs.append(_le(pos, len(keys), above_r, (i, j)))
    return _from_hs(hs, len(keys))


def gt_coordinates_C(n: int) -> list[tuple]:
    """Keys ``("a", k, j)`` for ``a_j^(k)`` and ``("b", k, j)`` for ``b_j^(k)``, block by block."""
    keys = []
    for k in range(1, n + 1):
        keys += [("b", k + 1 - j, j) for j in range(1, k)]
        keys += [("a", j, k + 1 - j) for j in range(1, k + 1)]
    return keys


def gt_polytope_C(n: int, lam: Sequence[int]) -> RationalPolytope:
    c = cartan("C", n)
    lam = _check_dominant(c, lam)
    le_k = [sum(lam[:k]) for k in range(n + 1)]  # le_k[k] = lambda_{<=k}
    keys = gt_coordinates_C(n)
    pos = {k: p for p, k in enumerate(keys)}
    d = len(keys)
    hs = []
    for key in keys:
        kind, k, j = key
        if kind == "a":
            if k == 1:
                upper, lower = le_k[n + 1 - j], le_k[n - j]
            else:
                upper = ("b", k, j)
                lower = ("b", k, j + 1) if j + 1 <= n + 1 - k else 0
        else:
            upper, lower = ("a", k - 1, j), ("a", k - 1, j + 1)
        hs.append(_le(pos, d, key, upper))
        hs.append(_le(pos, d, lower, key))
    return _from_hs(hs, d)


def _from_hs(hs: list, d: int) -> RationalPolytope:
    hs = [h for h in hs if any(h[0])]
    if not hs:
        return hull([tuple(0 for _ in range(d))])
    return from_halfspaces(hs, d)


def _grid_poset(cells: dict, markers: dict, coords: list) -> MarkedPoset:
    """Poset on grid cells: each cell in row ``r >= 1`` lies below its upper-left and above its upper-right neighbour."""
    covers = []
    for (r, col), label in cells.items():
        if r == 0:
            continue
        ul, ur = cells.get((r - 1, col - 1)), cells.get((r - 1, col + 1))
        if ul is not None:
            covers.append((label, ul))
        if ur is not None:
            covers.append((ur, label))
    marker_labels = [cells[k] for k in sorted(cells) if cells[k] in markers]
    return MarkedPoset(list(coords) + marker_labels, covers, markers)


def _label(key) -> str:
    if key[0] in ("a", "b"):
        return f"{key[0]}{key[2]}^{key[1]}"
    i, j = key
    return f"a{j}^{i}"


def gt_marked_poset(type_: str, n: int, lam: Sequence[int]) -> MarkedPoset:
    """Marked poset whose order polytope is the GT polytope (coordinates in the same order)."""
    t = type_.upper()
    cells: dict = {}
    markers: dict = {}
    if t == "A":
        lam = _check_dominant(cartan("A", n), lam)
        for k in range(1, n + 1):
            cells[(0, 2 * (k - 1))] = f"L>={k}"
            markers[f"L>={k}"] = sum(lam[k - 1 :])
        cells[(0, 2 * n)] = "0"
        markers["0"] = 0
        keys = gt_coordinates_A(n)
        for i, j in keys:
            cells[(i, i + 2 * (j - 1))] = _label((i, j))
    elif t == "C":
        lam = _check_dominant(cartan("C", n), lam)
        for j in range(1, n + 1):
            k = n + 1 - j
            cells[(0, 2 * (j - 1))] = f"L<={k}"
            markers[f"L<={k}"] = sum(lam[:k])
        keys = gt_coordinates_C(n)
        for k in range(1, n + 1):
            zero = "0" if k == 1 else f"0_{k}"
            cells[(2 * k - 2, 2 * n)] = zero
            markers[zero] = 0
        for key in keys:
            kind, k, j = key
            row = 2 * k - 1 if kind == "a" else 2 * k - 2
            cells[(row, row + 2 * (j - 1))] = _label(key)
    else:
        raise ValueError("marked GT posets exist for types A and C")
    return _grid_poset(cells, markers, [_label(k) for k in keys])


def fflv_A(n: int, lam: Sequence[int]) -> RationalPolytope:
    return chain_polytope(gt_marked_poset("A", n, lam))


def fflv_C(n: int, lam: Sequence[int]) -> RationalPolytope:
    return chain_polytope(gt_marked_poset("C", n, lam))


# --- explicit fixtures ----------------------------------------------------------------


def sl4_no_body(lam: Sequence[int]) -> RationalPolytope:
    """Newton-Okounkov polytope of the SL_4 flag variety for the initial seed, coordinates ``g_1..g_6``."""
    l1, l2, l3 = _check_dominant(cartan("A", 3), lam)

    def row(coeffs: dict, rhs: int) -> tuple:
        return tuple(Fraction(coeffs.get(i, 0)) for i in range(1, 7)), Fraction(rhs)

    hs = [
        # 0 <= g6 <= l1, 0 <= g5 <= l2, 0 <= g4 <= l3
        row({6: -1}, 0), row({6: 1}, l1),
        row({5: -1}, 0), row({5: 1}, l2),
        row({4: -1}, 0), row({4: 1}, l3),
        # -g5 <= g3 <= -g6 + l1
        row({3: -1, 5: -1}, 0), row({3: 1, 6: 1}, l1),
        # -g4 <= g2 <= -g5 + l2
        row({2: -1, 4: -1}, 0), row({2: 1, 5: 1}, l2),
        # -g2 - g4 <= g1 <= -g3 - g6 + l1
        row({1: -1, 2: -1, 4: -1}, 0), row({1: 1, 3: 1, 6: 1}, l1),
    ]  # fmt: skip
    return from_halfspaces(hs, 6)


def nz_sp4(lam: Sequence[int]) -> RationalPolytope:
    """String-type polytope for ``Sp_4`` and the word ``(1, 2, 1, 2)``, coordinates ``a_1..a_4``."""
    l1, l2 = _check_dominant(cartan("C", 2), lam)

    def row(coeffs: dict, rhs: int) -> tuple:
        return tuple(Fraction(coeffs.get(i, 0)) for i in range(1, 5)), Fraction(rhs)

    hs = [row({i: -1}, 0) for i in range(1, 5)]
    hs += [
        row({4: 1}, l2),
        row({3: 1, 4: -1}, l1),
        row({2: 1, 3: -1}, l1),
        row({2: 1, 3: -2}, 0),
        row({1: 1}, l1),
        row({1: 2, 2: -1}, 0),
    ]
    return from_halfspaces(hs, 4)
