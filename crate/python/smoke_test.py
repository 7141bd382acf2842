"""Smoke test for the xi_workbench extension module."""

import json

import xi_workbench as xw


def main():
    report = json.loads(xw.xi_check(-5, 5))
    assert report["status"] == "pass", report
    assert len(report["checks"]) == 9

    e = lambda c, dev=None: {"constant": c, "dev": dev or {}}
    problem = json.dumps({
        "rho": [e("1"), e("1", {"0": "-1", "1": "1"})],
        "sigma": [e("2"), e("2", {"0": "-1", "1": "1"})],
    })
    assert json.loads(xw.riesz_interpolate(problem))["t"] == "4/3"
    try:
        xw.riesz_interpolate(problem, "Z")
    except ValueError as err:
        print("over Z:", err)
    else:
        raise AssertionError("expected the integer case to fail")
    assert json.loads(xw.riesz_counterexample())["status"] == "pass"

    # N = 3: the vertex (+,+,+) at level 1 sits at 1/2 in every coordinate
    assert xw.f_eval(0, [0b111]) == ["1/2", "1/2", "1/2"]

    bundle = xw.build_h(0, 2, seed=1)
    ok, failures = xw.verify_bundle(bundle)
    assert ok, failures[:5]
    data = json.loads(bundle)
    data["pieces"][5]["offset"][0] = "7/9"
    ok, failures = xw.verify_bundle(json.dumps(data))
    assert not ok and failures

    print("xi_workbench", xw.__version__, "ok:", len(data["pieces"]), "pieces verified")


if __name__ == "__main__":
    main()
