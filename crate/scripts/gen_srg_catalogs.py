#!/usr/bin/env python3
"""Regenerate the vendored SRG catalogs under data/.

(16,6,2,2): the 4x4 rook's graph and the Shrikhande graph.
(25,12,5,6) and (26,10,3,4): all members of both families live in the switching
classes of the regular two-graphs on 26 points. Starting from Latin square
graphs, the Paley graph and their complements, the script closes under
descendants (isolate a vertex by switching, delete it) and under the degree-10
regular graphs in each switching class. Classes are deduplicated with nauty
canonical labels. Requires `pynauty` and `networkx`.
"""
import itertools
import random
import sys
from pathlib import Path

import networkx as nx
import pynauty


def canon(adj):
    n = len(adj)
    g = pynauty.Graph(n, adjacency_dict={i: [j for j in range(n) if adj[i][j]] for i in range(n)})
    return pynauty.certificate(g)


def srg_params(adj):
    n = len(adj)
    deg = {sum(r) for r in adj}
    if len(deg) != 1:
        return None
    d = deg.pop()
    lam, mu = set(), set()
    for i in range(n):
        for j in range(i + 1, n):
            c = sum(adj[i][x] and adj[j][x] for x in range(n))
            (lam if adj[i][j] else mu).add(c)
    if len(lam) != 1 or len(mu) != 1:
        return None
    return (n, d, lam.pop(), mu.pop())


def from_nx(g):
    nodes = sorted(g.nodes())
    idx = {v: i for i, v in enumerate(nodes)}
    adj = [[0] * len(nodes) for _ in nodes]
    for u, v in g.edges():
        adj[idx[u]][idx[v]] = adj[idx[v]][idx[u]] = 1
    return adj


def complement(adj):
    n = len(adj)
    return [[int(i != j and not adj[i][j]) for j in range(n)] for i in range(n)]


def switch(adj, subset):
    n = len(adj)
    s = set(subset)
    out = [row[:] for row in adj]
    for i in range(n):
        for j in range(n):
            if i != j and ((i in s) != (j in s)):
                out[i][j] = 1 - adj[i][j]
    return out


def delete_vertex(adj, v):
    return [[adj[i][j] for j in range(len(adj)) if j != v] for i in range(len(adj)) if i != v]


def add_isolated(adj):
    n = len(adj)
    return [row[:] + [0] for row in adj] + [[0] * (n + 1)]


def descendants(adj26):
    out = []
    for v in range(len(adj26)):
        nb = [j for j in range(len(adj26)) if adj26[v][j]]
        out.append(delete_vertex(switch(adj26, nb), v))
    return out


def regular_members(adj25):
    """Degree-10 regular graphs in the switching class of adj25 + isolated vertex.

    Such a graph is obtained by switching on a 10-set U in which every member of
    U has 3 neighbours inside U and every vertex outside has 6.
    """
    n = len(adj25)
    found = []

    def rec(start, chosen, inner):
        if len(chosen) == 10:
            if all(inner[x] == 3 for x in chosen) and all(
                sum(adj25[y][x] for x in chosen) == 6 for y in range(n) if y not in chosen
            ):
                found.append(list(chosen))
            return
        need = 10 - len(chosen)
        for v in range(start, n - need + 1):
            if any(inner[x] + adj25[v][x] > 3 for x in chosen):
                continue
            k = sum(adj25[v][x] for x in chosen)
            if k > 3:
                continue
            for x in chosen:
                inner[x] += adj25[v][x]
            inner[v] = k
            chosen.append(v)
            rec(v + 1, chosen, inner)
            chosen.pop()
            for x in chosen:
                inner[x] -= adj25[v][x]
            inner[v] = 0

    rec(0, [], [0] * n)
    g26 = add_isolated(adj25)
    return [switch(g26, u) for u in found]


def godsil_mckay(adj, size):
    """All Godsil-McKay switchings with a single switching cell of the given size.

    The cell must induce a regular subgraph and every vertex outside it must see
    0, half, or all of the cell. Vertices seeing exactly half get their
    adjacency to the cell complemented. The result is cospectral, so for a
    strongly regular input it stays in the same family.
    """
    n = len(adj)
    out = []
    for cell in itertools.combinations(range(n), size):
        degs = {sum(adj[a][b] for b in cell) for a in cell}
        if len(degs) != 1:
            continue
        half = []
        ok = True
        for v in range(n):
            if v in cell:
                continue
            k = sum(adj[v][c] for c in cell)
            if k == size // 2:
                half.append(v)
            elif k not in (0, size):
                ok = False
                break
        if not ok or not half:
            continue
        new = [row[:] for row in adj]
        for v in half:
            for c in cell:
                new[v][c] = new[c][v] = 1 - adj[v][c]
        out.append(new)
    return out


def random_srg(n, d, lam, mu, rng, node_limit=3_000_000):
    """Randomized row-by-row backtracking for an SRG; None when the budget runs out."""
    adj = [0] * n
    for j in range(1, d + 1):
        adj[0] |= 1 << j
        adj[j] |= 1
    nodes = 0

    def target(i, k):
        return lam if adj[i] >> k & 1 else mu

    def fill(i, j, common):
        nonlocal nodes
        nodes += 1
        if nodes > node_limit:
            return False
        if j == n:
            if bin(adj[i]).count("1") != d or any(common[k] != target(i, k) for k in range(i)):
                return False
            if i + 1 == n:
                return True
            mask = (1 << (i + 2)) - 1
            nxt = [bin(adj[i + 1] & adj[k] & mask).count("1") for k in range(i + 1)] + [0] * (n - i - 1)
            return fill(i + 1, i + 2, nxt)
        for v in rng.sample((0, 1), 2):
            degi = bin(adj[i]).count("1") + v
            degj = bin(adj[j]).count("1") + v
            if degi > d or degj > d or degi + n - j - 1 < d or degj + n - i - 2 < d:
                continue
            touched = []
            ok = True
            if v:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
                for k in range(i):
                    if adj[k] >> j & 1:
                        common[k] += 1
                        touched.append(k)
                        if common[k] > target(i, k):
                            ok = False
            if ok:
                rem = d - degi
                for k in range(i):
                    t = target(i, k)
                    if common[k] < t and common[k] + min(bin(adj[k] >> (j + 1)).count("1"), rem) < t:
                        ok = False
                        break
            if ok and fill(i, j + 1, common):
                return True
            for k in touched:
                common[k] -= 1
            if v:
                adj[i] &= ~(1 << j)
                adj[j] &= ~(1 << i)
        return False

    start = [bin(adj[1] & adj[0] & 0b11).count("1")] + [0] * (n - 1)
    if not fill(1, 2, start):
        return None
    return [[adj[i] >> j & 1 for j in range(n)] for i in range(n)]


def latin_square_graph(square):
    n = len(square)
    cells = [(r, c) for r in range(n) for c in range(n)]
    adj = [[0] * len(cells) for _ in cells]
    for a, (r1, c1) in enumerate(cells):
        for b, (r2, c2) in enumerate(cells):
            if a != b and (r1 == r2 or c1 == c2 or square[r1][c1] == square[r2][c2]):
                adj[a][b] = 1
    return adj


def latin_squares_5(count, rng):
    squares = [[[(r + c) % 5 for c in range(5)] for r in range(5)]]
    # Non-group main class: random Latin squares by row-by-row rejection sampling.
    while len(squares) < count:
        rows = []
        ok = True
        for _ in range(5):
            for _attempt in range(200):
                perm = list(range(5))
                rng.shuffle(perm)
                if all(all(perm[c] != row[c] for c in range(5)) for row in rows):
                    rows.append(perm)
                    break
            else:
                ok = False
                break
        if ok:
            squares.append(rows)
    return squares


def closure(frontier, fam25, fam26):
    while frontier:
        g = frontier.pop()
        if srg_params(g) != (25, 12, 5, 6):
            continue
        for h in (g, complement(g)):
            key = canon(h)
            if key in fam25:
                continue
            fam25[key] = h
            frontier.extend(godsil_mckay(h, 4))
            for r in regular_members(h):
                if srg_params(r) != (26, 10, 3, 4):
                    continue
                rk = canon(r)
                if rk in fam26:
                    continue
                fam26[rk] = r
                frontier.extend(descendants(r))
                for s in godsil_mckay(r, 4):
                    frontier.extend(descendants(s))


def encode_graph6(adj):
    n = len(adj)
    assert n < 63
    bits = [adj[i][j] for j in range(n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(n + 63)]
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k : k + 6]:
            v = (v << 1) | b
        out.append(chr(v + 63))
    return "".join(out)


def shrikhande():
    g = nx.Graph()
    conn = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)]
    for a in range(4):
        for b in range(4):
            for da, db in conn:
                g.add_edge((a, b), ((a + da) % 4, (b + db) % 4))
    return from_nx(g)


def main(outdir):
    rng = random.Random(20120601)
    outdir = Path(outdir)

    rook = from_nx(nx.cartesian_product(nx.complete_graph(4), nx.complete_graph(4)))
    fam16 = [rook, shrikhande()]
    assert all(srg_params(a) == (16, 6, 2, 2) for a in fam16)
    assert canon(fam16[0]) != canon(fam16[1])

    fam25, fam26 = {}, {}
    frontier = [latin_square_graph(s) for s in latin_squares_5(40, rng)]
    frontier.append(from_nx(nx.paley_graph(25).to_undirected()))
    sys.setrecursionlimit(10_000)
    while True:
        closure(frontier, fam25, fam26)
        if len(fam25) >= 15 and len(fam26) >= 10:
            break
        g = random_srg(26, 10, 3, 4, rng)
        if g is not None:
            frontier.extend(descendants(g))
        print(f"{len(fam25)} x (25,12,5,6), {len(fam26)} x (26,10,3,4)", file=sys.stderr)
    assert (len(fam25), len(fam26)) == (15, 10)

    for name, fam in (
        ("srg_16_6_2_2.g6", fam16),
        ("srg_25_12_5_6.g6", [fam25[k] for k in sorted(fam25)]),
        ("srg_26_10_3_4.g6", [fam26[k] for k in sorted(fam26)]),
    ):
        (outdir / name).write_text("".join(encode_graph6(a) + "\n" for a in fam))
        print(f"{name}: {len(fam)} graphs", file=sys.stderr)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data")
