"""Smoke test for the cohomlen extension module.

Build and run:
    cargo build --release -p cohomlen-py --features extension-module
    cp target/release/libcohomlen_py.so python/cohomlen.so
    python3 python/smoke_test.py
"""

from fractions import Fraction

import cohomlen

path = cohomlen.Graph.path(5)
ideal = path.edge_ideal()
assert ideal == cohomlen.MonomialIdeal.parse("ring 5; ideal x1*x2, x2*x3, x3*x4, x4*x5;")
assert cohomlen.MonomialIdeal.parse(ideal.to_dsl()) == ideal

assert cohomlen.length_sequence(ideal, 1, 1, 8) == [0, 0, 1, 5, 16, 40, 86, 166]
assert cohomlen.length(cohomlen.MonomialIdeal(2, [[1, 0]]), 1) is None
assert cohomlen.graded_dim(ideal.power(3), 1, [0, 1, 2, 1, 0]) == 1
assert cohomlen.length(ideal, 1, n=3) == 1

qp = cohomlen.fit(ideal, 1, 16)
assert qp.period == 2
assert [Fraction(c) for c in qp.polys[0]] == [
    0, Fraction(1, 60), Fraction(-1, 24), Fraction(-1, 48), Fraction(1, 96), Fraction(1, 240)
]
assert Fraction(qp.polys[1][0]) == Fraction(1, 32)

num, den = cohomlen.generating_function(ideal, 1, 16)
assert num == ["0", "0", "0", "1"] and den == [1, 1, 1, 1, 1, 2]

assert Fraction(cohomlen.limit_via_volume(ideal, 1)) == Fraction(1, 240)

finite, witnesses = cohomlen.prop45_criterion(path)
assert finite and len(witnesses) == 5
triangles = cohomlen.Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
assert not cohomlen.prop45_criterion(triangles)[0]
assert cohomlen.locally_bipartite(cohomlen.Graph.cycle(4))

outer = cohomlen.MonomialIdeal.parse("ring 2; ideal x1*x2^5, x1^4*x2^4, x1^5*x2;")
inner = [
    cohomlen.MonomialIdeal.parse(s)
    for s in (
        "ring 2; ideal x1*x2^8, x1^3*x2^6;",
        "ring 2; ideal x1^6*x2^4, x1^7*x2^3;",
        "ring 2; ideal x1^9*x2, x1^10;",
    )
]
vol = Fraction(cohomlen.coconvex_volume(outer, inner))
count = cohomlen.lattice_count(outer, inner, 200)
assert abs(count / 200**2 - vol) <= 0.02 * vol

try:
    cohomlen.MonomialIdeal.parse("ring 2; ideal x3;")
except ValueError:
    pass
else:
    raise AssertionError("parse error not raised")

print("smoke test passed")
