#!/usr/bin/env python3
"""Smoke test for the rotgauss_py extension module.

Builds nothing itself: it locates the cdylib produced by
`cargo build --release -p rotgauss-py`, exposes it under the importable
module name, and runs a few end-to-end calls.
"""

import importlib
import math
import pathlib
import shutil
import sys
import tempfile


def load_module():
    root = pathlib.Path(__file__).resolve().parents[1]
    candidates = [
        root / "target" / "release" / "librotgauss_py.so",
        root / "target" / "debug" / "librotgauss_py.so",
    ]
    lib = next((p for p in candidates if p.exists()), None)
    if lib is None:
        sys.exit(
            "librotgauss_py.so not found; run `cargo build --release -p rotgauss-py` first"
        )
    stage = pathlib.Path(tempfile.mkdtemp(prefix="rotgauss-py-"))
    shutil.copy2(lib, stage / "rotgauss_py.so")
    sys.path.insert(0, str(stage))
    return importlib.import_module("rotgauss_py")


def main():
    rg = load_module()

    # Indefinite algebra basics.
    e4 = rg.PseudoVector([0.0, 0.0, 0.0, 1.0], 1)
    assert e4.inner_product(e4) == -1.0
    assert e4.causal_character() == "timelike"
    light = rg.PseudoVector([1.0, 0.0, 0.0, 1.0], 1)
    assert light.causal_character() == "lightlike"

    e3 = rg.PseudoVector([0.0, 0.0, 1.0, 0.0], 1)
    b = e3.wedge(e4)
    assert b.plucker == [0.0, 0.0, 0.0, 0.0, 0.0, 1.0]
    assert b.inner_product(b) == -1.0

    (f1, f2), (s1, s2) = rg.gram_schmidt(
        rg.PseudoVector([0.0, 0.0, 0.0, 2.0], 1), rg.PseudoVector([1.0, 0.0, 0.0, 1.0], 1)
    )
    assert f1.coords == [0.0, 0.0, 0.0, 1.0] and s1 == -1.0
    assert f2.coords == [1.0, 0.0, 0.0, 0.0] and s2 == 1.0

    # First-kind witness: the de Sitter minimal surface.
    res = rg.classify("dsmin", (-1.0, 1.0, 11, 0.1, 3.0, 11), params="r0=1,a=1,b=2")
    assert res["verdict"] == "first_kind", res
    assert res["max_parallel_residual"] < 1e-8

    # Second-kind witness with the known frame components of C.
    res = rg.classify(
        "m1", (0.3, 1.2, 15, -0.8, 0.8, 15), profile="conic:l0=1,mu0=2", params="b=1"
    )
    assert res["verdict"] == "second_kind", res
    assert math.isclose(res["c12"], -0.5, abs_tol=1e-6)
    assert math.isclose(res["c34"], -0.5, abs_tol=1e-6)

    # Negative witness.
    res = rg.classify("cone", (0.2, 1.4, 11, 0.3, 1.5, 11), params="c0=0.5")
    assert res["verdict"] == "not_pointwise_1_type", res

    # Mesh sampling.
    rows = rg.mesh("dsmin", (0.0, 1.0, 3, 0.0, 1.0, 3), params="r0=1,a=1,b=1")
    assert len(rows) == 9
    s, t, x1, x2, x3, x4 = rows[0]
    assert (s, t) == (0.0, 0.0) and math.isclose(x1, 1.0)

    # One registry check end to end.
    check = rg.run_check("rem-plane")
    assert check["pass"], check
    assert set(rg.check_ids()) >= {"thm-3.4", "thm-4.1-i", "neg-cone"}
    assert any(name == "dsmin" for name, _ in rg.families())

    print("rotgauss_py smoke test: OK")


if __name__ == "__main__":
    main()
