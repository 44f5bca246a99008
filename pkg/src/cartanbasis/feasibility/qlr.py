"""Quantum Schubert calculus on small Grassmannians.

Produces the multiplicative Horn inequalities for SU(n): conjugacy classes
with log-spectra ``alpha, beta, gamma`` (sorted non-increasing, in the
alcove) admit ``A B C = I`` iff

    sum(alpha[I]) + sum(beta[J]) + sum(gamma[K]) <= d

for every ``r < n`` and every triple of r-subsets with a nonzero degree-d
Gromov-Witten invariant on Gr(r, n).  Invariants come from the
Bertram-Ciocan-Fontanine-Fulton rim-hook rule applied to classical
Littlewood-Richardson products in r variables.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from functools import lru_cache


def partitions_in_box(rows, cols):
    out = []
    for parts in itertools.product(range(cols, -1, -1), repeat=rows):
        if all(parts[i] >= parts[i + 1] for i in range(rows - 1)):
            out.append(tuple(parts))
    return out


def _ssyt(shape, nvars):
    """Yield content vectors of semistandard tableaux of ``shape`` in 1..nvars."""
    cells = [(i, j) for i, row in enumerate(shape) for j in range(row)]
    filling = {}

    def rec(k):
        if k == len(cells):
            content = [0] * nvars
            for v in filling.values():
                content[v - 1] += 1
            yield tuple(content)
            return
        i, j = cells[k]
        lo = 1
        if j > 0:
            lo = max(lo, filling[(i, j - 1)])
        if i > 0:
            lo = max(lo, filling[(i - 1, j)] + 1)
        for v in range(lo, nvars + 1):
            filling[(i, j)] = v
            yield from rec(k + 1)
        filling.pop((i, j), None)

    yield from rec(0)


@lru_cache(maxsize=None)
def schur_poly(shape, nvars):
    """Schur polynomial as {exponent tuple: coefficient}."""
    shape = tuple(p for p in shape if p > 0)
    if len(shape) > nvars:
        return {}
    poly = defaultdict(int)
    for content in _ssyt(shape, nvars):
        poly[content] += 1
    return dict(poly)


def _poly_mul(p, q):
    out = defaultdict(int)
    for ea, ca in p.items():
        for eb, cb in q.items():
            out[tuple(x + y for x, y in zip(ea, eb))] += ca * cb
    return {k: v for k, v in out.items() if v}


def lr_product(lam, mu, nvars):
    """Classical product s_lam * s_mu in nvars variables, as {nu: coeff}."""
    poly = _poly_mul(schur_poly(lam, nvars), schur_poly(mu, nvars))
    result = {}
    while poly:
        lead = max(poly)
        coeff = poly[lead]
        result[lead] = coeff
        for e, c in schur_poly(lead, nvars).items():
            poly[e] = poly.get(e, 0) - coeff * c
            if poly[e] == 0:
                del poly[e]
    return result


def _remove_rim_hook(nu, n):
    """Remove an n-rim hook from the rows of ``nu``.

    Uses beta-numbers: a rim hook of length n corresponds to moving one bead
    down by n.  Returns (new partition, height) or None when impossible.
    """
    r = len(nu)
    beta = [nu[i] + (r - 1 - i) for i in range(r)]
    bset = set(beta)
    for idx, b in enumerate(beta):
        nb = b - n
        if nb >= 0 and nb not in bset:
            crossed = sum(1 for x in beta if nb < x < b)
            new = sorted([x for x in beta if x != b] + [nb], reverse=True)
            part = tuple(new[i] - (r - 1 - i) for i in range(r))
            return part, crossed + 1
    return None


def quantum_product(lam, mu, r, n):
    """sigma_lam * sigma_mu in QH*(Gr(r, n)) as {(nu, d): coeff}."""
    k = n - r
    out = defaultdict(int)
    for nu, c in lr_product(lam, mu, r).items():
        nu = tuple(nu) + (0,) * (r - len(nu))
        sign, d = 1, 0
        while nu[0] > k:
            step = _remove_rim_hook(nu, n)
            if step is None:
                break
            nu, height = step
            if min(nu) < 0:
                step = None
                break
            sign *= (-1) ** (r - height)
            d += 1
        else:
            out[(nu, d)] += sign * c
            continue
    return {key: v for key, v in out.items() if v}


def subset_to_partition(subset, n):
    r = len(subset)
    s = sorted(subset)
    return tuple(n - r + a + 1 - s[a] for a in range(r))


def gw_invariant(a, b, c, d, r, n):
    """<sigma_a, sigma_b, sigma_c>_d on Gr(r, n)."""
    k = n - r
    dual = tuple(k - c[r - 1 - i] for i in range(r))
    return quantum_product(a, b, r, n).get((dual, d), 0)


@lru_cache(maxsize=None)
def horn_inequalities(n):
    """Multiplicative Horn inequalities for SU(n).

    Returns:
        list of (I, J, K, d) with 0-indexed subsets, meaning
        ``alpha[I].sum() + beta[J].sum() + gamma[K].sum() <= d``.
    """
    rows = []
    for r in range(1, n):
        k = n - r
        box = partitions_in_box(r, k)
        subsets = list(itertools.combinations(range(1, n + 1), r))
        part = {s: subset_to_partition(s, n) for s in subsets}
        for sa, sb, sc in itertools.product(subsets, repeat=3):
            total = sum(part[sa]) + sum(part[sb]) + sum(part[sc])
            if (total - r * k) % n:
                continue
            d = (total - r * k) // n
            if d < 0:
                continue
            if gw_invariant(part[sa], part[sb], part[sc], d, r, n) != 0:
                rows.append((
                    tuple(i - 1 for i in sa), tuple(i - 1 for i in sb),
                    tuple(i - 1 for i in sc), d,
                ))
        del box
    return rows
