"""Exit criteria for the package, one test per criterion."""

import json
import random
import time

import pytest

from closefactor.arith import bit_size, isqrt
from closefactor.bench import SweepSpec, run_sweep, to_csv
from closefactor.cli import main
from closefactor.fermat import FactorPair, NotApplicable, Success, close_factor, count_squares
from closefactor.keygen import Mode, ModulusRecipe, gen_modulus, special_family
from closefactor.multiplier import (
    SearchConfig,
    factor_with_multiplier,
    factor_with_multiplier_pair,
    search_multiplier,
)
from closefactor.oracle import closest_divisor_pair, count_squares_naive, trial_factor

criterion = pytest.mark.criterion


@criterion(1, "close_factor(2773) = (47, 59), n0 = 53, i = 6, under 1 ms")
def test_rsa_example():
    t0 = time.perf_counter()
    out = close_factor(2773)
    elapsed = time.perf_counter() - t0
    assert out == Success(FactorPair(47, 59), 6)
    assert out.n0 == 53
    assert elapsed < 1e-3


@criterion(2, "close_factor(1081) = NotApplicable(8)")
def test_counterexample():
    assert close_factor(1081) == NotApplicable(8)


@criterion(3, "factor_with_multiplier(15211, 9): N0 = 370, i = 1, 41 * 371")
def test_single_multiplier():
    hit = factor_with_multiplier(15211, 9)
    assert (hit.n0, hit.i, hit.divisor) == (370, 1, 41)
    assert hit.cofactor(15211) == 371
    assert 41 * 371 == 15211


@criterion(4, "factor_with_multiplier_pair(24961, 23, 11) recovers {109, 229}")
def test_pair_multiplier():
    hit = factor_with_multiplier_pair(24961, 23, 11)
    assert {hit.divisor, hit.cofactor(24961)} == {109, 229}
    assert hit.n0 - hit.i == 2507 and hit.n0 + hit.i == 2519
    assert 2507 * 2519 == 23 * 11 * 24961


@criterion(5, "close_factor(155227) = (391, 397); 2^(4a+2)+1 identity for a = 1..20")
def test_composite_and_family():
    assert close_factor(155227) == Success(FactorPair(391, 397), 3)
    for alpha in range(1, 21):
        p = 2 ** (2 * alpha + 1) - 2 ** (alpha + 1) + 1
        q = 2 ** (2 * alpha + 1) + 2 ** (alpha + 1) + 1
        m = 2 ** (4 * alpha + 2) + 1
        assert p * q == m
        assert m % 5 == 0
        assert special_family(alpha) == (m, p, q)


@criterion(6, "search_multiplier(136793, r_max=50) hits r = 17, divisor 89; r = 49 hits")
def test_multiplier_search():
    hit = search_multiplier(136793, SearchConfig(r_max=50, s_max=1))
    assert hit.r == 17 and hit.divisor == 89
    hit49 = factor_with_multiplier(136793, 49)
    assert hit49 is not None and 136793 % hit49.divisor == 0


def _odd_primes(limit):
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(3, limit + 1) if sieve[p]]


@criterion(7, "every odd prime pair p < q <= 10^4 within the gap bound factors")
def test_exhaustive_guarantee():
    t0 = time.perf_counter()
    primes = _odd_primes(10**4)
    checked = failures = 0
    for a, p in enumerate(primes):
        for q in primes[a + 1 :]:
            n = p * q
            if (q - p) ** 4 > 2 ** (bit_size(n) + 5):
                continue
            checked += 1
            if close_factor(n) != Success(FactorPair(p, q), (q - p) // 2):
                failures += 1
    assert failures == 0
    assert checked > 0
    assert time.perf_counter() - t0 < 60


@criterion(8, "count_squares == naive count on 10^4 pairs, and the lemma bound holds")
def test_square_counting():
    rng = random.Random(2101)
    for _ in range(10**4):
        n = rng.randint(1, 10**5)
        m = rng.randint(n, 10**5)
        c = count_squares(n, m)
        assert c == count_squares_naive(n, m)
        # c < sqrt(m) - sqrt(n) + 1, squared out exactly
        d = c - 1
        if d >= 0:
            rhs = m - n - d * d
            assert rhs > 0 and 4 * d * d * n < rhs * rhs


@criterion(9, "trial_factor reconstructs n <= 10^6; closest pairs of 1081 and 155227")
def test_oracle_coherence():
    for n in range(1, 10**6 + 1):
        assert trial_factor(n).value == n
    assert closest_divisor_pair(1081) == FactorPair(23, 47)
    assert closest_divisor_pair(155227) == FactorPair(391, 397)


@criterion(10, "seeded close_gap moduli factor, safe moduli do not, regeneration is identical")
def test_generator_round_trip():
    for bits in (64, 128, 256):
        for seed in range(100):
            close = ModulusRecipe(Mode.CLOSE_GAP, bits=bits, seed=seed)
            n, p, q = gen_modulus(close)
            assert close_factor(n) == Success(FactorPair(p, q), (q - p) // 2)
            safe = ModulusRecipe(Mode.SAFE, bits=bits, seed=seed)
            sn, _, _ = gen_modulus(safe)
            assert isinstance(close_factor(sn), NotApplicable)
            assert repr(gen_modulus(close)).encode() == repr((n, p, q)).encode()
            assert gen_modulus(safe) == gen_modulus(safe)


def _cli(*argv):
    import io

    out = io.StringIO()
    return main(list(argv), out), out.getvalue()


@criterion(11, "CLI exit codes and JSON schema; 1000-line batch gives 1000 ordered reports")
def test_cli_contract(tmp_path):
    keys = {"modulus", "verdict", "factors", "r", "s", "i", "n0", "elapsed_ms"}
    assert _cli("factor", "2773") == (0, "47 59\n")
    assert _cli("factor", "0xAD5") == (0, "47 59\n")
    assert _cli("factor", "1081")[0] == 2
    assert _cli("factor", "nonsense")[0] == 64
    assert _cli("factor", "2774")[0] == 65

    code, out = _cli("audit", "2773", "--json")
    rec = json.loads(out)
    assert code == 0 and set(rec) == keys
    assert rec["verdict"] == "VULNERABLE_CLOSE_GAP" and rec["factors"] == ["47", "59"]
    code, out = _cli("audit", "136793", "--r-max", "50", "--json")
    rec = json.loads(out)
    assert rec["verdict"] == "VULNERABLE_WITH_MULTIPLIER" and rec["r"] == "17" and "89" in rec["factors"]
    code, out = _cli("audit", "1081", "--r-max", "1", "--json")
    assert json.loads(out)["verdict"] == "NOT_VULNERABLE_AT_TESTED_DEPTH"

    assert _cli("gen", "--mode", "special", "--alpha", "1") == (0, "n=65 p=5 q=13 mode=special\n")
    assert _cli("gen", "--mode", "close", "--bits", "64", "--seed", "7") == _cli(
        "gen", "--mode", "close", "--bits", "64", "--seed", "7"
    )
    code, out = _cli("gen", "--mode", "safe", "--bits", "64", "--seed", "7", "--json")
    assert _cli("factor", json.loads(out)["n"])[0] == 2

    assert _cli("count-squares", "2773", "2809") == (0, "1\n")
    assert _cli("count-squares", "5", "5") == (0, "0\n")
    assert _cli("count-squares", "0", "100") == (0, "10\n")
    assert _cli("count-squares", "9", "5")[0] == 64

    rng = random.Random(1000)
    lines = []
    for k in range(1000):
        if k % 97 == 13:
            lines.append("not-a-number")
        else:
            lines.append(str(rng.randrange(10**6, 10**12) | 1))
    path = tmp_path / "batch.txt"
    path.write_text("\n".join(lines) + "\n")
    code, out = _cli("audit", "--batch", str(path), "--r-max", "15", "--json")
    recs = [json.loads(line) for line in out.splitlines()]
    assert len(recs) == 1000
    assert [r["modulus"] for r in recs] == lines
    assert code == 65


@criterion(12, "bench: cells with multiplier <= 1 succeed fully; success non-increasing")
def test_bench_sharpness():
    spec = SweepSpec(
        bit_sizes=[32, 64, 128, 256],
        gap_multipliers=["0", "1/4", "1/2", "3/4", "1", "9/8", "5/4", "3/2", "2", "4"],
        trials_per_cell=50,
        seed=2024,
    )
    results = run_sweep(spec)
    for c in results:
        if c.gap_multiplier <= 1:
            assert c.success_fraction == 1.0
    for k in spec.bit_sizes:
        fracs = [c.success_fraction for c in results if c.bit_size == k]
        assert fracs == sorted(fracs, reverse=True)
    assert to_csv(results).startswith("bit_size,gap_multiplier,trials,successes,success_fraction,median_us\n")
