"""Brute-force reference computations, written without the package's algebra engine.

Paths are plain tuples of arrow ids; quivers are given as (vertices, arrows)
with arrows (id, source, target); relations as {path tuple: coefficient}.
"""

from fractions import Fraction


def row_reduce(rows, columns):
    """Reduced row echelon form of sparse rows over the ordered ``columns``."""
    pivots = []  # (column, row)
    for row in rows:
        row = {k: Fraction(v) for k, v in row.items() if v}
        for col, piv in pivots:
            c = row.get(col)
            if c:
                for k, v in piv.items():
                    nv = row.get(k, 0) - c * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        if not row:
            continue
        col = min(row, key=columns.index)
        lead = row[col]
        row = {k: v / lead for k, v in row.items()}
        for i, (c2, other) in enumerate(pivots):
            x = other.get(col)
            if x:
                merged = dict(other)
                for k, v in row.items():
                    nv = merged.get(k, 0) - x * v
                    if nv:
                        merged[k] = nv
                    else:
                        merged.pop(k, None)
                pivots[i] = (c2, merged)
        pivots.append((col, row))
    return sorted(pivots, key=lambda cr: columns.index(cr[0]))


def rank(rows, columns):
    return len(row_reduce(rows, columns))


def same_span(rows_a, rows_b, columns):
    ra = row_reduce(rows_a, columns)
    rb = row_reduce(rows_b, columns)
    return [r for _, r in ra] == [r for _, r in rb]


def orthogonal_complement(rows, columns):
    """Basis of vectors x with sum_k x_k r_k = 0 for every row r (standard pairing)."""
    reduced = row_reduce(rows, columns)
    pivot_cols = {c for c, _ in reduced}
    basis = []
    for free in columns:
        if free in pivot_cols:
            continue
        vec = {free: Fraction(1)}
        for c, r in reduced:
            x = r.get(free, 0)
            if x:
                vec[c] = -x
        basis.append(vec)
    return basis


def all_paths(vertices, arrows, length):
    """Every path of exactly ``length`` arrows as (source, target, ids)."""
    frontier = [(v, v, ()) for v in vertices]
    for _ in range(length):
        frontier = [(s, a[2], ids + (a[0],)) for s, e, ids in frontier for a in arrows if a[1] == e]
    return frontier


def brute_dimensions(vertices, arrows, relations, bound):
    """dim of the degree-t piece from i to j, keyed (i, j, t), for t <= bound.

    The ideal in degree t is spanned by every prefix.relation.suffix of total length t.
    """
    table = {}
    by_length = {}
    for rel in relations:
        length = len(next(iter(rel)))
        by_length.setdefault(length, []).append(rel)
    ends = {}
    for a in arrows:
        ends[a[0]] = (a[1], a[2])
    paths_of = [all_paths(vertices, arrows, t) for t in range(bound + 1)]
    for t in range(bound + 1):
        paths = paths_of[t]
        blocks = {}
        for s, e, ids in paths:
            blocks.setdefault((s, e), []).append(ids)
        for (s, e), ids_list in blocks.items():
            rows = []
            for length, rels in by_length.items():
                if length > t:
                    continue
                for a in range(t - length + 1):
                    for pre in paths_of[a]:
                        for suf in paths_of[t - length - a]:
                            if pre[0] != s or suf[1] != e:
                                continue
                            for rel in rels:
                                word = next(iter(rel))
                                if ends[word[0]][0] != pre[1] or ends[word[-1]][1] != suf[0]:
                                    continue
                                rows.append({pre[2] + w + suf[2]: c for w, c in rel.items()})
            d = len(ids_list) - rank(rows, sorted(ids_list))
            if d:
                table[(s, e, t)] = d
    return table


def trivial_extension_dimensions(base_dims, n):
    """Graded pieces of A + D(A): the dual of the degree-t piece sits in degree n + 1 - t, reversed."""
    out = {}
    for (i, j, t), d in base_dims.items():
        out[(i, j, t)] = out.get((i, j, t), 0) + d
        key = (j, i, n + 1 - t)
        out[key] = out.get(key, 0) + d
    return out
