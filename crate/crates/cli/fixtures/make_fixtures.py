#!/usr/bin/env python3
"""Writes the example graph fixtures as edge lists.

Some graphs are "tripled": every vertex other than x is replaced by three
pairwise adjacent twins v, v_2, v_3, each joined to every copy of the
original neighbours.  This makes (A1) hold (a twin always sits between u and
v when u <= v) while keeping the x-components, the dominations x <= v and
the dominations u <= x with u adjacent to x.  Dominations u <= x with u not
adjacent to x disappear, because the twins of u leave st(x).

Run from this directory: python3 make_fixtures.py
"""

import itertools


def triple(vertices, edges, keep):
    def copies(v):
        return [v] if v == keep else [v, v + "_2", v + "_3"]

    vs = [c for v in vertices for c in copies(v)]
    es = []
    for v in vertices:
        for a, b in itertools.combinations(copies(v), 2):
            es.append((a, b))
    for u, v in edges:
        for a in copies(u):
            for b in copies(v):
                es.append((a, b))
    return vs, es


def write(name, header, vertices, edges):
    with open(name, "w") as f:
        for line in header.strip().splitlines():
            f.write("# " + line.strip() + "\n")
        # Every vertex is declared up front so indices follow this order.
        for v in vertices:
            f.write("vertex %s\n" % v)
        for a, b in edges:
            f.write("%s %s\n" % (a, b))


def fig1():
    vs = ["x", "y", "a", "b", "c", "z1", "z2", "z3"]
    es = [("x", "y"), ("x", "a"), ("x", "b"), ("x", "c"),
          ("a", "z1"), ("a", "z3"), ("b", "z2"), ("b", "z3"), ("c", "z3")]
    write("fig1.txt", """
        Non-principal pairs.
        Asserted: y, z1, z2, z3 <= x; z1, z2 <= z3;
        x-components are {z1}, {z2}, {z3}; every ({x}, C) is non-principal.
    """, vs, es)


def fig2():
    zs = ["z0", "z1", "z2", "z3"]
    ps = {p: ("z" + p[1], "z" + p[2]) for p in
          ["p01", "p02", "p03", "p12", "p13", "p23"]}
    ys = {"y1": ["p01", "p02", "p13", "p23"],
          "y2": ["p02", "p03", "p12", "p13"],
          "y3": ["p01", "p03", "p12", "p23"]}
    vs = ["x"] + zs + list(ys) + list(ps)
    es = [("x", p) for p in ps] + [(p, z) for p, pair in ps.items() for z in pair]
    es += [("x", y) for y in ys] + [("y1", "y2"), ("y1", "y3"), ("y2", "y3")]
    es += [(y, p) for y, nb in ys.items() for p in nb]
    vs, es = triple(vs, es, "x")
    write("fig2.txt", """
        Non-principal pair that needs a power, tripled.
        Asserted: x-components are the z0..z3 triples; with C0 the z0 triple
        the delta vectors over (C1, C2, C3) are exactly (1,1,0), (0,1,1),
        (1,0,1); all-ones is in their span and the least power is 2.
    """, vs, es)


def fig3():
    def pentagon(z):
        names = [z, z + "a", z + "b", z + "c", z + "d"]
        return names, [(names[i], names[(i + 1) % 5]) for i in range(5)]

    p0, e0 = pentagon("z0")
    p1, e1 = pentagon("z1")
    p4, e4 = pentagon("z4")
    helpers = ["h1", "h2", "h34"]
    vs = ["x"] + p0 + p1 + ["z2", "z3"] + p4 + helpers
    es = e0 + e1 + e4
    es += [("x", h) for h in helpers] + [(h, "z0") for h in helpers]
    es += [("h1", "z1"), ("h2", "z2"), ("h34", "z3"), ("h34", "z4")]
    write("fig3.txt", """
        Shared case.
        Asserted: five x-components (pentagons through z0, z1, z4 and the
        single vertices z2, z3); x <= z0; U = {z2, z3}; Y is empty;
        ({x}, C0) and ({x}, C1) are principal; z4 is separated from z0 by
        st(z3), so t = 1 and the reduced graph is {z0, z1, x}.
        (A1) fails here (z2 <= x with nothing between).
    """, vs, es)


def fig4():
    zs = ["z0", "z1", "z2", "z3"]
    ps = {"p12": ("z1", "z2"), "p03": ("z0", "z3"),
          "p23": ("z2", "z3"), "p01": ("z0", "z1")}
    vs = ["x"] + zs + ["y1", "y2"] + list(ps)
    es = [("x", p) for p in ps] + [(p, z) for p, pair in ps.items() for z in pair]
    es += [("x", "y1"), ("x", "y2"), ("y1", "y2")]
    es += [("y1", "p23"), ("y1", "p01"), ("y2", "p12"), ("y2", "p03")]
    vs, es = triple(vs, es, "x")
    write("fig4.txt", """
        Separated case, tripled.
        Asserted: the vertices dominated by x are the y1 and y2 triples;
        x-components are the z0..z3 triples; with C0 the z0 triple the
        delta vectors are exactly (1,1,0), (0,1,1); ({x}, C0) is principal;
        no bad partial conjugations; reduced shape 3,3,3,3:7.
    """, vs, es)


def fig5():
    zs = ["z0", "z1", "z2", "z3", "z4", "z5"]
    ps = {"p012": ("z0", "z1", "z2"), "p12": ("z1", "z2"),
          "p23": ("z2", "z3"), "p045": ("z0", "z4", "z5"),
          "p345": ("z3", "z4", "z5")}
    vs = ["x"] + zs + ["y1", "y2"] + list(ps)
    es = [("x", p) for p in ps] + [(p, z) for p, grp in ps.items() for z in grp]
    es += [("x", "y1"), ("x", "y2"), ("y1", "y2")]
    es += [("y1", "p012"), ("y1", "p345"), ("y2", "p23"), ("y2", "p045")]
    vs, es = triple(vs, es, "x")
    write("fig5.txt", """
        Separated case with deletions, tripled.
        Asserted: six x-components (z0..z5 triples); U is the y1 and y2
        triples; st(y1) separates z1, z2, z3 from z0 and st(y2) separates
        z3, z4, z5 from z0; delta vectors (1,1,1,0,0), (0,0,1,1,1); bad
        multipliers lie in the z2, z4, z5 triples; deletion removes Z2 then
        Z4; Pi on (z1, z3, z5) is (1,1,0), (0,1,1) with perp (1,-1,1).
    """, vs, es)


def small():
    pent = ["a", "b", "c", "d", "e"]
    write("pentagon.txt", "Five-cycle. Asserted: Out(A) is finite.",
          pent, [(pent[i], pent[(i + 1) % 5]) for i in range(5)])
    write("p4.txt", "Path on four vertices. Asserted: (A1) fails.",
          ["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d")])
    write("k2.txt", "Single edge.", ["a", "b"], [("a", "b")])


if __name__ == "__main__":
    fig1()
    fig2()
    fig3()
    fig4()
    fig5()
    small()
