"""Smoke tests for the python bindings: the worked examples end to end."""

import pexa

INC = "var x: 0..3 wrap; x := x / 2 [1/2] x := x + 1"
TWOFLIP = "var x: 0..1; var y: 0..1; (x := 0 [1/2] x := 1); (y := 0 [1/2] y := 1)"
INC_LOOP = "var x: 0..3 wrap; do true -> x := x / 2 [1/2] x := x + 1 od"


def values(doc):
    return [entry["value"] for entry in doc["values"]]


def test_wp():
    doc = pexa.wp(INC, "[x = 0 | x = 2]")
    assert values(doc) == ["1/2", "1", "0", "1/2"]
    assert doc["exact"] is True


def test_wp_abstract():
    doc = pexa.wp(INC, "[x = 0 | x = 2]", predicates="x = 0 | x = 2")
    assert values(doc) == ["0", "1/2", "0", "1/2"]


def test_check_ip():
    good = pexa.check_ip(TWOFLIP, "x = y")
    assert good["verdict"] == "preserving"
    bad = pexa.check_ip(INC, "x = 0 | x = 2")
    assert bad["verdict"] == "not-preserving"
    witness = bad["components"][0]["witness"]
    assert witness["differing"]


def test_check_di():
    swap = "var x: 0..2; var y: 0..2; var t: 0..2; t := x; x := y; y := t"
    assert pexa.check_di(swap)["verdict"] == "data-independent"
    bump = "var x: 0..2 wrap; var y: 0..2 wrap; x := x + 1"
    assert pexa.check_di(bump)["verdict"] == "not-data-independent"


def test_mc_quotient():
    doc = pexa.mc(INC_LOOP, "Pmin=? [true U<=1 (x = 1 | x = 3)]", predicates="x = 0 | x = 2")
    vals = {entry["state"]: entry["value"] for entry in doc["result"]["values"]}
    assert vals[0] == "1/2"  # even cube
    assert vals[1] == "1"


def test_wp_bounded():
    doc = pexa.wp_bounded("var c: 0..1; do c = 1 -> c := 0 [1/2] c := 1 od", 2)
    assert values(doc) == ["1", "3/4"]


def test_errors():
    try:
        pexa.wp("var x: 0..1; x := 2", "[x = 0]")
    except ValueError as e:
        assert "domain" in str(e)
    else:
        raise AssertionError("expected a validation error")


def test_rabin():
    trace = pexa.rabin_simulate(1, 0, seed=3)
    assert trace["steps"] == 2
    assert trace["consensus"] is True

    report = pexa.rabin_paper_queries(1, 1, tmax=6)
    assert report["curve"][0]["pmin"] == "0"
    assert report["rewards_per_serve"]["rmin"] == "3"
    curve = [float(point["pmin_float"]) for point in report["curve"]]
    assert curve == sorted(curve)


def test_export():
    mdp = pexa.export_mdp(INC_LOOP)
    assert mdp["states"] == 4
    tra = pexa.export_mdp_prism(INC_LOOP)
    assert tra.splitlines()[0] == "4 4 8"


def main():
    tests = [v for k, v in globals().items() if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} python smoke tests passed (pexa {pexa.__version__})")


if __name__ == "__main__":
    main()
