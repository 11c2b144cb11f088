"""Smoke test for the kuratree extension module.

Build and install it first:

    pip install maturin
    maturin develop --release -m crates/py/Cargo.toml
"""

import cmath
import json
import math
import sys

import kuratree as kt


def check(cond, what):
    if not cond:
        print(f"FAIL {what}")
        sys.exit(1)
    print(f"ok   {what}")


def main():
    m = kt.ClassMonoid.unit()
    check(m.rank == 1 and m.maslov([2]) == 4 and m.energy([3]) == "3", "monoid")

    trees = kt.enumerate_trees(1, 0, [1])
    forms = [t.canonical_form() for t in trees]
    check(forms == ["[1|](*)", "[0|](*,[1|]())", "[0|]([1|](),*)"], "trees of (1, 0, b)")
    check(sum(kt.count_trees(3, 1, [3])) == 587_583, "tree count of (3, 1, 3b)")
    check(trees[0].leq(trees[1]) != trees[1].leq(trees[0]), "tree order")

    check(kt.moduli_dimension(1, 0, [1]) == 2, "dimension")
    check(len(kt.normalized_boundary(1, 0, [1])) == 2, "boundary")
    check(kt.check_d_squared(2, 1, [2])["passed"], "d squared")
    r = kt.check_corner_consistency(1, 1, [1], 1, 1)
    check(r["passed"] and all(d["multiplicity"] == 2 for d in r["descriptors"]), "corner count")

    dga = kt.OperationTable.fixture("dga")
    check(kt.ainf_defect(dga, "4")["passed"], "A-infinity relation on the DGA")
    broken = dga.add([0], ["1"], "y", "1")
    check(not kt.ainf_defect(broken, "4")["passed"], "broken table detected")
    again = kt.OperationTable.from_json(dga.to_json())
    check(again.num_entries == dga.num_entries, "table round trip")

    model = kt.StratifiedModel.fixture("two-level")
    a = kt.build_cover(model)
    b = kt.build_cover(model, "reverse")
    check(kt.verify_cover(model, a)["passed"], "cover clauses")
    check(kt.compare_covers(model, a, b)["relation"] == "equivalent", "independent builds equivalent")
    c = kt.Cover.from_json(model, a.to_json(model))
    check(c.num_bases == a.num_bases, "cover round trip")

    u = kt.BlaschkeMap([0.5 + 0.1j, -0.2j], theta=1.0)
    z = cmath.exp(0.3j)
    check(abs(abs(u.evaluate(z)) - 1) < 1e-12 and u.maslov() == 4, "Blaschke map")
    check(kt.moduli_dim_check(2, 1)["passed"], "dimension formula")
    f = kt.solve_fiber_product((1, 2), (1, 1), 2, seeds=16)
    check(f["passed"] and f["within_tolerance"] == 16, "fiber product")
    d = kt.degeneration_path(1, 2)
    check(d["passed"] and math.isclose(d["steps"][-1]["eps"], 1e-6), "degeneration")

    try:
        kt.BlaschkeMap([1.5])
    except ValueError as e:
        check("inside" in str(e), "errors surface as ValueError")
    print(json.dumps({"passed": True}))


if __name__ == "__main__":
    main()
