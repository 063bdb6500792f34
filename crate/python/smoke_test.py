"""Smoke test for the pyintdec extension module.

Build and install first:

    pip install --no-build-isolation -e crates/python

then run `python3 python/smoke_test.py`.
"""

from fractions import Fraction as F

import pyintdec as p


def check(cond, what):
    if not cond:
        raise SystemExit(f"FAIL: {what}")
    print(f"ok: {what}")


def main():
    check(p.decide("forall x:real. exists z:int. z <= x and x < z+1"), "decide floor exists")
    check(not p.decide("exists x:int. x + x = 1"), "decide parity")

    le = p.IdfSet.compile("x <= y")
    check(len(le) == 2, "x <= y has two cells")
    check(le.contains([F(3, 2), 7]) and not le.contains([8, "7"]), "membership")
    w = le.witness()
    check(w is not None and le.contains(w), "witness is a member")
    check(le == p.IdfSet.compile("not (y < x)"), "equal under rewriting")
    check(le.complement().intersect(le).is_empty(), "f and not f is empty")
    check(le.union(le.complement()).is_universal(), "f or not f is everything")

    ints = p.IdfSet.compile("exists k:int. x = 2*k")
    check(ints.contains([4]) and not ints.contains([3]) and not ints.contains([F(1, 2)]), "even integers")
    proj = p.IdfSet.compile("x + y = 1 and 0 <= y and y <= 1/2", ["x", "y"]).project(1)
    check(proj.contains([F(3, 4)]) and not proj.contains([F(1, 4)]), "projection")
    swapped = le.reorder([1, 0])
    check(swapped.contains([1, 2]) is False and swapped.contains([2, 1]), "reorder")

    z = p.IntegerSet(2, [([1, -1], "<=", 0)])
    check(z.contains([1, 3]) and not z.contains([3, 1]), "integer set membership")
    check(z.union(z.complement()).is_universe(), "integer complement")
    d = p.DecimalSet(2, [([1, -1], "<=", 0)])
    check(d.contains([F(1, 4), F(1, 2)]) and d.complement().complement() == d, "decimal set")
    f = p.IdfSet.normalize(2, [(z, d)])
    check(f.contains([F(5, 4), F(7, 2)]) and not f.contains([F(7, 4), F(7, 2)]), "normalize")
    check(p.IdfSet.from_json(f.to_json()) == f, "json round trip")

    dbm = p.DBM.from_json(
        '{"n": 1, "bounds": [[{"value": 0, "strict": false}, {"value": "inf", "strict": false}],'
        ' [{"value": 3, "strict": false}, {"value": 0, "strict": false}]]}'
    )
    dec = p.CpDbm.from_dbm(dbm).decompose()
    check(dec.contains([F(5, 2)]) and not dec.contains([F(13, 4)]), "DBM decomposition")

    demo = p.timed_demo(1000000)
    shapes = demo["shapes"]
    check(demo["cpdbm"].decompose() == shapes, "timed demo: decomposed equals direct")
    check(p.IdfSet.compile(demo["formula"], ["x", "y"]) == shapes, "timed demo: compiled equals direct")
    check(len(shapes) == len(p.timed_demo(5)["shapes"]), "timed demo: size independent of the constant")

    try:
        p.IdfSet.compile("x <= (y")
    except p.ParseError as e:
        check("1:" in str(e), "parse errors raise ParseError")
    else:
        raise SystemExit("FAIL: parse error not raised")
    many = " + ".join(f"v{i}" for i in range(p.var_limit() + 1)) + " = 1"
    try:
        p.IdfSet.compile(many)
    except p.CapacityError:
        check(True, "capacity errors raise CapacityError")
    else:
        raise SystemExit("FAIL: capacity error not raised")
    print("all smoke tests passed")


if __name__ == "__main__":
    main()
