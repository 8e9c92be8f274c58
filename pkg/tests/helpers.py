"""Independent oracles used to pin expected values.

Everything here is deliberately written from scratch against the defining
formulas, sharing no enumeration order, no matrix layout and no rank code
with the package: monomials come from combinations_with_replacement in
ascending order, matrices are dense, ranks are Fraction-exact Gaussian
elimination.  Slow but unarguable at tiny sizes.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def fraction_rank(dense) -> int:
    rows = [[Fraction(x) for x in row] for row in dense]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        rank += 1
    return rank


def brute_monomials(n, e):
    """Exponent tuples of degree e in n+1 variables, ascending order."""
    if e < 0:
        return []
    seen = set()
    for combo in itertools.combinations_with_replacement(range(n + 1), e):
        exp = [0] * (n + 1)
        for i in combo:
            exp[i] += 1
        seen.add(tuple(exp))
    return sorted(seen)


def _brute_delta_dense(n, d, k, e):
    """Dense matrix of the Koszul differential
    Wedge^k(S^d) (x) S^e -> Wedge^{k-1}(S^d) (x) S^{e+d}."""
    V = brute_monomials(n, d)
    src = [
        (w, t)
        for w in itertools.combinations(range(len(V)), k)
        for t in brute_monomials(n, e)
    ]
    tgt = [
        (w, t)
        for w in itertools.combinations(range(len(V)), max(k - 1, 0))
        for t in brute_monomials(n, e + d)
    ] if k >= 1 else []
    tgt_idx = {x: i for i, x in enumerate(tgt)}
    rows = [[0] * len(src) for _ in range(len(tgt))]
    for j, (w, t) in enumerate(src):
        for pos in range(k):
            nw = w[:pos] + w[pos + 1:]
            nt = tuple(a + b for a, b in zip(t, V[w[pos]]))
            rows[tgt_idx[(nw, nt)]][j] += (-1) ** pos
    return rows, len(src)


def brute_kpq(n, b, d, p, q) -> int:
    """dim K_{p,q} from the full complex, Fraction-exact, no weight blocks."""
    if p < 0:
        return 0
    d_out, mid = _brute_delta_dense(n, d, p, q * d + b)
    d_in, _ = _brute_delta_dense(n, d, p + 1, (q - 1) * d + b)
    r_out = fraction_rank(d_out) if p >= 1 else 0
    # d_in maps into the middle space; its rank is the image dimension there.
    r_in = fraction_rank(d_in)
    return mid - r_in - r_out


def brute_hilbert_numerator(n, b, d, jmax):
    """Coefficients of (sum_m binom(md+b+n, n) t^m) * (1-t)^v via explicit
    polynomial convolution with a locally built Pascal triangle."""
    # Pascal triangle rows up to v.
    import math

    v = math.comb(d + n, n)
    pascal = [[1]]
    for _ in range(v):
        prev = pascal[-1]
        pascal.append([1] + [prev[i] + prev[i + 1] for i in range(len(prev) - 1)] + [1])
    sign_binoms = [(-1) ** k * pascal[v][k] for k in range(v + 1)]
    series = [math.comb(m * d + b + n, n) for m in range(jmax + 1)]
    out = []
    for j in range(jmax + 1):
        acc = 0
        for k in range(min(j, v) + 1):
            acc += sign_binoms[k] * series[j - k]
        out.append(acc)
    return out


def brute_ssyt_count(shape, content) -> int:
    """Count semistandard tableaux by direct backtracking over fillings."""
    shape = tuple(x for x in shape if x)
    content = tuple(x for x in content if x)
    if sum(shape) != sum(content):
        return 0
    letters = len(content)
    rows = [[0] * ln for ln in shape]
    remaining = list(content)
    cells = [(i, j) for i, ln in enumerate(shape) for j in range(ln)]

    def ok(i, j, val):
        if j > 0 and rows[i][j - 1] > val:
            return False
        if i > 0 and len(rows[i - 1]) > j and rows[i - 1][j] >= val:
            return False
        return True

    def rec(idx):
        if idx == len(cells):
            return 1
        i, j = cells[idx]
        total = 0
        for val in range(1, letters + 1):
            if remaining[val - 1] and ok(i, j, val):
                rows[i][j] = val
                remaining[val - 1] -= 1
                total += rec(idx + 1)
                remaining[val - 1] += 1
                rows[i][j] = 0
        return total

    return rec(0)
