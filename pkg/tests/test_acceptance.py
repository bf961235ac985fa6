"""Acceptance battery: one test per verification criterion.

Every check is exact (GF(2) arithmetic, zero tolerance) and prints one
PASS line; run with -s to see them.  The canonical command-line entry
point for the same battery is `hiddensums reproduce`.

Known red checks
----------------
Criterion 4 asserts that the patched inversion x^(2^m - 2) has no coset
derivative image for every m in 3..8.  That is false at m = 3: the
exponent 6 = 2^2 + 2^1 is of Gold type, so x^6 over GF(2^3) is crooked
(every derivative image is a coset), and an exhaustive scan of all 5040
zero-fixing permutations of (F_2)^3 shows no anti-crooked permutation
exists on 3 bits at all.  The check is kept as stated rather than
weakened, so it fails, and criterion 15 (the battery exits clean)
fails with it.  Widths 4 through 8 all hold.
"""

import pytest

from hiddensums import reproduce
from hiddensums.attack import encryption_oracle, reconstruct_cp, verify_global_deduction
from hiddensums.cipher import (
    builtin_toy_spec,
    toy_brick,
    toy_coordinate_basis,
    toy_state_sum,
)
from hiddensums.cli import main
from hiddensums.vbf import diff_uniformity

CHECKS = {num: (title, fn) for num, title, fn in reproduce.CRITERIA}


@pytest.mark.parametrize("num", sorted(CHECKS))
def test_criterion(num):
    title, fn = CHECKS[num]
    detail = fn()  # raises CheckFailure with a diagnostic on failure
    print(f"PASS [{num:2d}] {title}: {detail}")


class TestHeadlineNumbers:
    """Independent spot checks of the claims the battery summarizes."""

    def test_brick_delta_exact(self):
        assert diff_uniformity(toy_brick()).delta == 4

    def test_attack_costs_seven_queries(self):
        spec = builtin_toy_spec(rounds=100)
        oracle = encryption_oracle(spec, 55)
        repr_, transcript = reconstruct_cp(oracle, toy_state_sum(), toy_coordinate_basis())
        assert transcript.encryption_count == 7
        assert transcript.decryption_count == 0
        report = verify_global_deduction(repr_, oracle, transcript)
        assert report.verified_blocks == 64
        assert report.mismatches == 0


def test_criterion_15_reproduce_exits_clean(capsys):
    """The battery, run end to end through the CLI, exits 0."""
    code = main(["reproduce"])
    out = capsys.readouterr().out
    assert out.count("PASS") + out.count("FAIL") == len(CHECKS)
    assert code == 0, "reproduce reported failures:\n" + out
