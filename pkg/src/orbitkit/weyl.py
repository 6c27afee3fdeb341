"""Weyl group of so(6) acting on the Cartan 3-space.

The group is realised concretely as 3x3 signed permutation matrices with an
even number of sign flips (order 24, isomorphic to S4).  It is generated by
the reflections in the 12 roots {(0,±1,±1), (±1,0,±1), (±1,±1,0)} and every
element is stored as a nested tuple of integers, so that the action on
rational or floating-point points is exact.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import BadIndex

#: The 12 roots, primitive integer coordinates.
ROOTS: tuple[tuple[int, int, int], ...] = tuple(
    sorted(
        set(
            [(0, s, t) for s in (1, -1) for t in (1, -1)]
            + [(s, 0, t) for s in (1, -1) for t in (1, -1)]
            + [(s, t, 0) for s in (1, -1) for t in (1, -1)]
        )
    )
)

#: Fundamental weights in chamber coordinates.
FUNDAMENTAL_WEIGHTS = {1: (1, 1, 1), 2: (0, 0, 1), 3: (1, -1, 1)}

IDENTITY = ((1, 0, 0), (0, 1, 0), (0, 0, 1))

Element = tuple[tuple[int, int, int], ...]


def reflection(alpha: tuple[int, int, int]) -> Element:
    """Reflection matrix in the plane orthogonal to a root alpha."""
    aa = sum(a * a for a in alpha)
    rows = []
    for i in range(3):
        row = []
        for j in range(3):
            num = 2 * alpha[i] * alpha[j]
            if num % aa != 0:
                raise ValueError(f"non-integral reflection for root {alpha}")
            row.append((1 if i == j else 0) - num // aa)
        rows.append(tuple(row))
    return tuple(rows)


def compose(w1: Element, w2: Element) -> Element:
    return tuple(
        tuple(sum(w1[i][k] * w2[k][j] for k in range(3)) for j in range(3))
        for i in range(3)
    )


def inverse(w: Element) -> Element:
    # Elements are orthogonal with integer entries, so the inverse is the transpose.
    return tuple(tuple(w[j][i] for j in range(3)) for i in range(3))


def act(w: Element, p):
    """Apply a group element to a point; exact for int/Fraction coordinates."""
    return tuple(
        w[i][0] * p[0] + w[i][1] * p[1] + w[i][2] * p[2] for i in range(3)
    )


def _closure(generators) -> tuple[Element, ...]:
    seen = {IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for w in frontier:
            for g in generators:
                h = compose(g, w)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    rest = sorted(seen - {IDENTITY})
    return (IDENTITY,) + tuple(rest)


@lru_cache(maxsize=1)
def weyl_group() -> tuple[Element, ...]:
    """All 24 group elements, identity first, the rest sorted."""
    return _closure([reflection(a) for a in ROOTS])


@lru_cache(maxsize=None)
def parabolic(i: int) -> tuple[Element, ...]:
    """Subgroup generated by reflections in the roots orthogonal to weight i."""
    if i not in (1, 2, 3):
        raise BadIndex(f"weight index must be 1, 2 or 3, got {i}")
    nu = FUNDAMENTAL_WEIGHTS[i]
    orth = [a for a in ROOTS if a[0] * nu[0] + a[1] * nu[1] + a[2] * nu[2] == 0]
    return _closure([reflection(a) for a in orth])


def _dedup(points, tol):
    out = []
    for p in points:
        if not any(
            max(abs(p[k] - q[k]) for k in range(3)) <= tol for q in out
        ):
            out.append(p)
    return out


def weyl_orbit(p, tol=1e-12) -> tuple:
    """Orbit of a point under the full group, deduplicated within tol."""
    return tuple(sorted(_dedup([act(w, p) for w in weyl_group()], tol)))


def to_chamber(p):
    """Chamber representative with z >= x >= |y|, and an element realising it.

    Brute force over all 24 images, picking the lexicographically maximal
    (z, x, y).  Signed permutations are exact, so the returned point satisfies
    the chamber inequalities exactly.
    """
    best = None
    best_w = None
    for w in weyl_group():
        q = act(w, p)
        key = (q[2], q[0], q[1])
        if best is None or key > best:
            best = key
            best_w = w
    return (best[1], best[2], best[0]), best_w


def singular_vertex_set(lam, w: Element, i: int, tol=1e-12) -> tuple:
    """Vertices w·(W_i·lam): the orbit points on the plane through w·lam
    orthogonal to w·(weight i)."""
    pts = [act(w, act(u, lam)) for u in parabolic(i)]
    return tuple(sorted(_dedup(pts, tol)))


def element_to_json(w: Element) -> list[int]:
    """Row-major 9-entry integer array."""
    return [w[i][j] for i in range(3) for j in range(3)]


def element_from_json(data) -> Element:
    if len(data) != 9:
        raise ValueError("expected 9 integers")
    w = tuple(tuple(int(data[3 * i + j]) for j in range(3)) for i in range(3))
    if w not in weyl_group():
        raise ValueError("matrix is not a Weyl group element")
    return w
