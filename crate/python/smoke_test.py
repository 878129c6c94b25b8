"""Smoke test for the galphac_py extension module.

Build and install first:  pip install --no-build-isolation -e crates/python
"""

import json
import math

import galphac_py as g


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    ghz3 = g.ghz(3)
    assert ghz3.local_dims == [2, 2, 2]
    assert close(g.galpha_c(ghz3, 0.5), math.sqrt(2) - 1)
    assert close(g.measure(g.w(3), "gmc"), 0.942809, 1e-6)
    assert g.concurrence_fill(g.family_state("typeB", 0.0)) == 0.0
    assert close(g.gqc(ghz3), 0.75)
    assert close(g.ggm(ghz3), 0.5)

    rep = g.report(g.w(4), "galphac", alpha=1 / 3)
    assert len(rep["per_cut"]) == 7 == g.cardinality(4)
    assert rep["aggregate"] <= rep["upper_limit"]
    assert g.bipartitions(3) == ["0|12", "1|02", "2|01"]

    h = 1 / math.sqrt(2)
    psi = g.PureState([h, 0, 0, 0, 0, 0, 0, 1j * h], [2, 2, 2])
    assert close(g.galpha_c(psi), g.galpha_c(ghz3))
    again = g.PureState.from_json(psi.to_json())
    assert again.amplitudes == psi.amplitudes
    assert json.loads(psi.to_json())["local_dims"] == [2, 2, 2]

    try:
        g.PureState([1, 1], [2])
    except ValueError:
        pass
    else:
        raise AssertionError("unnormalized state accepted")

    thetas, (values,) = g.sweep("fam4", ["galphac"], step=1e-3)
    peak = thetas[max(range(len(values)), key=values.__getitem__)]
    assert abs(peak - 0.866) <= 0.005, peak

    mix = g.DensityMatrix.from_ensemble(
        [0.5, 0.5], [g.PureState.builtin("typeB:0"), g.PureState.builtin("typeB:1.5707963267948966")]
    )
    roof = g.convex_roof(mix, restarts=4, seed=1)
    assert roof["upper_bound"] <= 1e-3, roof["upper_bound"]
    assert close(sum(roof["weights"]), 1.0)
    assert close(g.convex_roof(ghz3.projector(), restarts=2)["upper_bound"], math.sqrt(2) - 1, 1e-8)

    print("galphac_py", g.__version__, "smoke test passed")


if __name__ == "__main__":
    main()
