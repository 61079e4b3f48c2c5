#!/usr/bin/env python3
"""Smoke test for the submon_py extension module.

Builds nothing itself: run `cargo build -p submon-python --release` first,
then `python3 python/smoke_test.py`. The script locates the compiled cdylib
under target/ and imports it under its module name.
"""

import shutil
import sys
import tempfile
from pathlib import Path


def locate_module() -> Path:
    root = Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / "release" / "libsubmon_py.so",
        root / "target" / "debug" / "libsubmon_py.so",
        root / "target" / "release" / "submon_py.dll",
        root / "target" / "debug" / "submon_py.dll",
        root / "target" / "release" / "libsubmon_py.dylib",
        root / "target" / "debug" / "libsubmon_py.dylib",
    ]
    for path in candidates:
        if path.exists():
            return path
    sys.exit(
        "submon_py cdylib not found; run `cargo build -p submon-python --release` first"
    )


def import_module():
    lib = locate_module()
    staging = Path(tempfile.mkdtemp(prefix="submon-py-"))
    suffix = ".so" if lib.suffix in (".so", ".dylib") else ".pyd"
    shutil.copy(lib, staging / f"submon_py{suffix}")
    sys.path.insert(0, str(staging))
    import submon_py

    return submon_py


def main() -> None:
    sm = import_module()

    # Word arithmetic in the ambient free group.
    assert sm.reduce_word(2, "aAb") == "b"
    assert sm.mul(2, "ab", "BA") == ""
    assert sm.inv(2, "ABab") == "BAba"
    assert sm.dist(2, "a", "b") == 2
    print("PASS word arithmetic")

    # Gradedness on the fixture monoids.
    ex1 = sm.Submonoid(2, ["a", "b", "ABab"])
    graded, cutoff, witness = ex1.is_graded()
    assert graded and witness is None and cutoff == 5
    ex2 = sm.Submonoid(3, ["ba", "c", "CA", "BA"])
    graded, _, witness = ex2.is_graded()
    assert not graded and witness == "A"
    print("PASS gradedness")

    # Preimage enumeration and the word problem.
    facts = ex2.factorizations("A", max_len=6)
    assert "[ba][c][CA][BA]" in facts
    assert ex1.wp("[a][b]", "[b][a][ABab]", cutoff=6)
    assert ex1.wp_exact("[a][b]", "[b][a][ABab]")
    assert not ex1.wp_exact("[a]", "[b]")
    print("PASS word problem")

    # Normal forms.
    assert ex1.normalize("[b][a][ABab]", cutoff=6) == "[a][b]"
    print("PASS normal forms")

    # Irreducibles and constants.
    assert ex2.irreducibles() == ["ba", "c", "CA", "BA"]
    free1 = sm.Submonoid(1, ["a"])
    consts = free1.constants()
    assert consts["c_wp"] == (851, 2)
    assert consts["l_prime"] == (3, 1)
    print("PASS irreducibles and constants")

    # Homomorphism and isomorphism decisions.
    outcome, witness = sm.hom_extends(ex1, 2, ["a", "b", "b"], cutoff=6)
    assert outcome == "no" and witness is not None
    outcome, _ = sm.hom_extends(ex1, 2, ["a", "b", "ABab"], cutoff=6)
    assert outcome == "yes-up-to"
    free2 = sm.Submonoid(2, ["a", "b"])
    code2 = sm.Submonoid(2, ["a", "ab"])
    isomorphic, bijection = sm.is_isomorphic(free2, code2)
    assert isomorphic and bijection is not None
    free3 = sm.Submonoid(3, ["a", "b", "c"])
    isomorphic, _ = sm.is_isomorphic(ex1, free3, cutoff=6)
    assert not isomorphic
    print("PASS homomorphism and isomorphism")

    print("smoke test OK")


if __name__ == "__main__":
    main()
