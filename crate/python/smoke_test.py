"""Smoke test for the akmove extension module.

Run after `pip install -e python/ --no-build-isolation`, or standalone:
the fallback builds the cdylib with cargo and loads it directly.
"""

import json
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    try:
        import akmove

        return akmove
    except ImportError:
        pass
    subprocess.run(
        ["cargo", "build", "--release", "-p", "akmove-py"], cwd=ROOT, check=True
    )
    import importlib.util

    lib = ROOT / "target" / "release" / "libakmove.so"
    spec = importlib.util.spec_from_file_location("akmove", lib)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def main():
    akmove = load_module()
    D = akmove.Diagram

    names = akmove.catalog_names()
    assert "whitehead" in names and "borromean" in names, names

    trefoil = D.from_catalog("trefoil")
    trefoil.validate()
    assert trefoil.crossings == 3
    assert trefoil.conway() == [1, 0, 1], trefoil.conway()
    assert trefoil.arf() == 1

    parsed = D.from_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)")
    assert parsed.canonical() == trefoil.canonical()

    hopf = D.from_catalog("hopf+")
    assert hopf.linking_number(0, 1) == 1
    assert hopf.mirror().linking_number(0, 1) == -1

    unknotted = trefoil.crossing_change(0)
    assert unknotted.conway() == [1], unknotted.conway()

    via_spec = trefoil.apply_move(json.dumps({"move": "crossing_change", "crossing": 0}))
    assert via_spec.canonical() == unknotted.canonical()

    report = json.loads(trefoil.report())
    assert report["writhe"] == 3 and report["a2"] == 1, report

    # The 2-singular a2 witness: both resolutions differ by one unit.
    assert json.loads(trefoil.evaluate_singular([0, 1], '{"conway_coeff": 2}')) == 1

    models = dict((name, (k, feet)) for name, k, feet in akmove.model_catalog())
    assert models["borromean"] == (2, 3), models

    wh = json.loads(akmove.whitehead_experiment())
    assert wh["verdict"] is True, wh

    scheme = {
        "base": "whitehead",
        "invariant": {"linking_number": [0, 1]},
        "n": 1,
        "k": 2,
        "attachments": [
            {
                "model": "hopf",
                "routes": [
                    {"foot": 10, "passes": []},
                    {"foot": 6, "passes": [{"arc": 5, "over": False, "side": "R"}]},
                ],
            },
            {
                "model": "hopf",
                "routes": [
                    {"foot": 8, "passes": []},
                    {"foot": 7, "passes": [{"arc": 9, "over": False, "side": "L"}]},
                ],
            },
        ],
    }
    result = json.loads(akmove.order_nk_test(json.dumps(scheme)))
    assert result["verdict"] is True, result
    assert len(result["subsets"]) == 4

    print("smoke test: all checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
