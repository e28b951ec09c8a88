#!/usr/bin/env python3
"""Generate the shipped QC base matrices (z = 54, N = 1944).

Structure follows the 802.11n family: a dual-diagonal parity part whose first
column has weight 3, and an irregular information part. Shift values are drawn
at random, rejecting any assignment that creates a 4-cycle in the lifted graph,
and keeping the candidate with the fewest 6-cycles.

Usage: python3 scripts/gen_qc_base.py  (rewrites crates/core/data/*.qc)
"""
import itertools
import os
import random

Z = 54


def parity_part(rows):
    """Dual-diagonal parity columns, as (row, col_offset, shift) triples."""
    mid = rows // 2
    entries = [(0, 0, 1), (mid, 0, 0), (rows - 1, 0, 1)]
    for j in range(1, rows):
        entries.append((j - 1, j, 0))
        entries.append((j, j, 0))
    return entries


def info_pattern(rows, col_degrees, rng):
    """Place info columns so total row degrees come out equal."""
    load = [0] * rows
    for r, _, _ in parity_part(rows):
        load[r] += 1
    pattern = []
    for deg in col_degrees:
        order = sorted(range(rows), key=lambda r: (load[r], rng.random()))
        chosen = sorted(order[:deg])
        for r in chosen:
            load[r] += 1
        pattern.append(chosen)
    return pattern


def cycle4_free(base, rows, cols):
    for r1, r2 in itertools.combinations(range(rows), 2):
        seen = set()
        for c in range(cols):
            a, b = base[r1][c], base[r2][c]
            if a < 0 or b < 0:
                continue
            d = (a - b) % Z
            if d in seen:
                return False
            seen.add(d)
    return True


def count_cycle6(base, rows, cols):
    count = 0
    nz = [[c for c in range(cols) if base[r][c] >= 0] for r in range(rows)]
    for r1, r2, r3 in itertools.combinations(range(rows), 3):
        for perm in ((r1, r2, r3),):
            a, b, c = perm
            for c1 in nz[a]:
                if base[b][c1] < 0:
                    continue
                for c2 in nz[b]:
                    if c2 == c1 or base[c][c2] < 0:
                        continue
                    for c3 in nz[c]:
                        if c3 in (c1, c2) or base[a][c3] < 0:
                            continue
                        s = (base[a][c1] - base[b][c1] + base[b][c2] - base[c][c2]
                             + base[c][c3] - base[a][c3]) % Z
                        if s == 0:
                            count += 1
    return count


def generate(rows, cols, info_degrees, seed, trials):
    rng = random.Random(seed)
    info_cols = cols - rows
    assert len(info_degrees) == info_cols
    best = None
    for _ in range(trials):
        base = [[-1] * cols for _ in range(rows)]
        for r, off, s in parity_part(rows):
            base[r][info_cols + off] = s
        pattern = info_pattern(rows, info_degrees, rng)
        ok = True
        for c, rows_of_c in enumerate(pattern):
            for r in rows_of_c:
                for _attempt in range(200):
                    base[r][c] = rng.randrange(Z)
                    if cycle4_free(base, rows, cols):
                        break
                else:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        row_deg = {sum(1 for v in row if v >= 0) for row in base}
        assert len(row_deg) == 1, row_deg
        c6 = count_cycle6(base, rows, cols)
        if best is None or c6 < best[0]:
            best = (c6, base)
    return best


def write(path, base, rows, cols):
    with open(path, "w") as f:
        f.write(f"{rows} {cols} {Z}\n")
        for row in base:
            f.write(" ".join(f"{v:3d}" for v in row) + "\n")


def main():
    out = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "data")
    # rate 1/2: 18 x 36
    # check-regular: 126 edges, every row of degree 7
    deg_half = [11, 11, 11, 11, 5, 4] + [3] * 12
    c6, base = generate(18, 36, deg_half, seed=1944, trials=40)
    write(os.path.join(out, "qc_r12_n1944_z54.qc"), base, 18, 36)
    print("rate 1/2: 6-cycles", c6)
    # rate 5/6: 6 x 36
    # check-regular: 120 edges, every row of degree 20
    deg_56 = [4] * 17 + [3] * 13
    c6, base = generate(6, 36, deg_56, seed=5654, trials=40)
    write(os.path.join(out, "qc_r56_n1944_z54.qc"), base, 6, 36)
    print("rate 5/6: 6-cycles", c6)


if __name__ == "__main__":
    main()
