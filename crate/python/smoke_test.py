#!/usr/bin/env python3
"""Smoke test for the primcob_py extension module.

Builds the cdylib with cargo (unless PRIMCOB_SKIP_BUILD is set), stages it
under the importable name `primcob_py`, and checks a handful of known
values across every part of the API.

Usage: python3 python/smoke_test.py [--release]
"""

import json
import os
import shutil
import subprocess
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def build_and_stage(release: bool) -> Path:
    profile = "release" if release else "debug"
    if "PRIMCOB_SKIP_BUILD" not in os.environ:
        cmd = ["cargo", "build", "-p", "primcob-py"]
        if release:
            cmd.append("--release")
        subprocess.run(cmd, cwd=REPO, check=True)
    built = None
    for suffix in (".so", ".dylib"):
        candidate = REPO / "target" / profile / f"libprimcob_py{suffix}"
        if candidate.exists():
            built = candidate
            break
    if built is None:
        sys.exit("could not find the built primcob_py library")
    stage = Path(tempfile.mkdtemp(prefix="primcob-smoke-"))
    shutil.copy2(built, stage / "primcob_py.so")
    return stage


def main() -> None:
    release = "--release" in sys.argv[1:]
    stage = build_and_stage(release)
    sys.path.insert(0, str(stage))
    import primcob_py as pc

    # Bounded partitions: counts, the empty partition, the rational rule.
    assert pc.count_bounded_partitions(4, 2) == 3
    assert pc.count_bounded_partitions(0, 5) == 1
    assert pc.count_bounded_partitions(5, 0) == 0
    assert pc.count_bounded_partitions(Fraction(-1, 1), 3) == 0
    assert pc.count_bounded_partitions(Fraction(1, 2), 3) == 0
    assert pc.enumerate_bounded_partitions(4, 2) == [[2, 2], [2, 1, 1], [1, 1, 1, 1]]

    # Series ranks.
    assert pc.bso_ranks(4, 8)[8] == 3
    assert pc.projective_ranks("quaternionic", 2, 12) == [1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0]

    # Homotopy ranks and the cobordism pairing.
    assert pc.rank_pi_oriented(1, 2, 3) == 1
    assert pc.rank_pi_quaternionic(3, 11) == 1
    assert pc.rank_profile("sp", None, 3, 16) == [
        0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0,
    ]
    assert pc.cobordism_rank("sp", None, 2, [1, 0, 0, 0, 0, 0, 0, 1]) == 1
    assert pc.cobordism_rank("so", 1, 1, [1, 2, 1]) == 2

    # The unoriented flavor is rejected, not guessed.
    try:
        pc.rank_profile("o", 2, 1, 4)
    except ValueError as err:
        assert "not specified" in str(err)
    else:
        sys.exit("unoriented flavor should have raised")

    # Closed-formula comparator.
    assert pc.corollary_eval(2, 0, 2) == 1
    assert pc.corollary_first_disagreement(2, 3, 60) is None
    assert pc.corollary_first_disagreement(1, 2, 10) == 5

    # Spectral sequence bookkeeping.
    assert pc.stable_stem(3) == (0, [3, 8])
    assert pc.stable_stem(7) == (0, [3, 5, 16])
    assert pc.segal_index(3) == 360
    assert pc.segal_index(10) == 2432902008176640000  # 20!
    page = pc.e1_page(3, 10)
    assert page[(1, 6)] == "Z_24"
    assert page[(2, 6)] == "Z"
    assert page[(1, 10)] == "Z_240"
    assert pc.consistent_assignments(2) == [[24]]
    assert pc.consistent_assignments(3) == [[3, 120], [6, 60], [12, 30], [24, 15]]
    assert pc.odd_torsion_audit_passes(11)
    report = json.loads(pc.odd_torsion_audit_json(11))
    assert report["pass"] and len(report["cells"]) == 4
    assert pc.infinite_group_criterion(3, 4)
    assert not pc.infinite_group_criterion(3, 6)

    # Umbrella geometry, exact in and out.
    origin = (0, 0, 0, 0)
    assert pc.jacobian_rank(origin) == 3
    assert pc.jacobian_rank(origin, lifted=True) == 4
    assert pc.umbrella_map((1, 1, 0, 0)) == [1, 0, 0, 1, 0, 0, 1]
    assert pc.lift_map((1, 1, 0, 0)) == [1, 0, 0, 1, 0, 0, 1, 1]
    s1 = pc.section_s1((1, 0, 0, 0))
    assert s1[6] == Fraction(-2, 5) and s1[7] == Fraction(4, 5)
    assert pc.sigma2_empty_check()
    assert not pc.sigma2_empty_check_cubic_control()
    verify = json.loads(pc.umbrella_verify_json(height=2, sphere_samples=20, pair_samples=200))
    assert verify["pass"] and verify["singular_points"] == ["0;0;0;0"]

    print("primcob_py smoke test: OK")


if __name__ == "__main__":
    main()
