"""Smoke test for the Python extension. Build first with `maturin develop` in crates/py."""

import json

import psh_forge_py as pf


def main():
    spec = pf.JordanSpec.uniform(2, "1/4")
    assert spec.n == 2
    assert json.loads(spec.to_json())["n"] == 2

    dm, dn = spec.distances([1.0, 0.0, 0.0, 0.0])
    assert abs(dm - 1.0 / (1.0 + 1.0 / 16.0)) < 1e-12
    assert abs(dn - 0.0) < 1e-12 or dn > 0

    cand = pf.Candidate(spec, "p21")
    point = [0.3, -0.2, 0.5, 0.1]
    assert cand.rho(point) > 0
    minors = cand.minors_at(point)
    assert len(minors) == 2 and all(m > 0 for m in minors)

    cert = cand.certify(2000, 7)
    assert cert["verdict"] == "sampled-positive", cert

    field = cand.glue()
    report = field.retraction_check(10, 3)
    assert report["pass"], report

    suite = pf.verify(seed=1, only="lemma2", quick=True)
    assert suite["pass"], suite

    th = pf.threshold("diag-uniform", 2, "p21", 1000, 1, 1e-2)
    assert th["threshold"] is None or th["threshold"] > 0.25

    assert pf.normalize_rational("2/8") == "1/4"
    try:
        pf.JordanSpec.uniform(2, "x")
    except ValueError:
        pass
    else:
        raise AssertionError("bad rational accepted")
    print("python smoke test passed")


if __name__ == "__main__":
    main()
