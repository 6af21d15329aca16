"""Pure python rank kernel over the integers.

The matrices coming out of the graded hom computations are sparse with
modest integer entries, so a fraction-free elimination on dict-of-column
rows is both exact and fast enough.  The compiled backend in _speedups.pyx
implements the same contract for the dense mid-size cases.
"""

from math import gcd


def _normalize_row(row):
    g = 0
    for v in row.values():
        g = gcd(g, v if v >= 0 else -v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def int_rank(rows):
    """Rank of an integer matrix given as a list of {col: value} dicts.

    Zero entries must be absent from the dicts.  The input is not mutated.
    """
    work = [dict(r) for r in rows if r]
    rank = 0
    while work:
        # pivot row: prefer a unit entry, else smallest magnitude
        best_i = -1
        best_c = -1
        best_v = 0
        for i, row in enumerate(work):
            for c, v in row.items():
                av = v if v >= 0 else -v
                if best_i < 0 or av < best_v:
                    best_i, best_c, best_v = i, c, av
                    if av == 1:
                        break
            if best_v == 1:
                break
        prow = _normalize_row(work.pop(best_i))
        pv = prow[best_c]
        rank += 1
        nxt = []
        for row in work:
            a = row.get(best_c)
            if a is None:
                nxt.append(row)
                continue
            out = {}
            for c in row.keys() | prow.keys():
                if c == best_c:
                    continue
                w = pv * row.get(c, 0) - a * prow.get(c, 0)
                if w:
                    out[c] = w
            if out:
                nxt.append(_normalize_row(out))
        work = nxt
    return rank
