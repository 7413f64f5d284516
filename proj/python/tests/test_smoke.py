# Copyright (C) 2026 The hekl Authors
# SPDX-License-Identifier: Apache-2.0

import random

import pytest

import hekl


def test_modular_arith():
    q = hekl.Modulus(97)
    assert hekl.add_mod(96, 96, q) == 95
    assert hekl.mul_mod(10, 20, q) == 6
    assert hekl.mad_mod(10, 20, 3, q) == 9
    with pytest.raises(hekl.ParameterError):
        hekl.Modulus(15)


def test_ntt_round_trip_and_variants_agree():
    n = 1024
    q = hekl.generate_primes(n, 50, 1)[0]
    t = hekl.NttTables(n, q)
    rng = random.Random(1)
    a = [rng.randrange(q.value) for _ in range(n)]
    ref = hekl.forward_ntt(a, t)
    for name in ("staged2@256", "radix4@256", "radix8@256", "radix16@256"):
        v = hekl.NttVariant.parse(name)
        assert hekl.forward_ntt(a, t, v) == ref
        assert hekl.inverse_ntt(ref, t, v) == a


def test_negacyclic_product():
    n = 16
    q = hekl.generate_primes(n, 30, 1)[0]
    t = hekl.NttTables(n, q)
    x = [0] * n
    x[n - 1] = 1  # x^(n-1) * x = x^n = -1
    y = [0] * n
    y[1] = 1
    out = hekl.negacyclic_poly_mul(x, y, t)
    assert out[0] == q.value - 1 and not any(out[1:])


def test_perf_model():
    c = hekl.radix_cost(8)
    assert (c.other_ops, c.butterfly_ops, c.total_ops) == (120, 336, 456)
    assert hekl.operational_density(hekl.NttVariant.naive(), 4096) == 1.5
    assert abs(hekl.operational_density(hekl.NttVariant.high_radix(8), 32768) - 8.9) <= 0.05


def test_ckks_routines():
    ctx = hekl.CkksContext(1024, 3, 40, seed=3)
    keys = hekl.keygen(ctx, [1])
    enc = hekl.Encoder(ctx)
    encryptor = hekl.Encryptor(ctx, keys)
    decryptor = hekl.Decryptor(ctx, keys)
    ev = hekl.Evaluator(ctx)
    rng = random.Random(2)
    h = enc.slot_count
    z1 = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(h)]
    z2 = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(h)]
    c1 = encryptor.encrypt(enc.encode(z1))
    c2 = encryptor.encrypt(enc.encode(z2))

    def err(ct, want):
        got = enc.decode(decryptor.decrypt(ct))
        return max(abs(g - w) for g, w in zip(got, want))

    assert err(c1, z1) <= 1e-4
    assert err(ev.add(c1, c2), [a + b for a, b in zip(z1, z2)]) <= 2e-4
    prod = ev.mul_lin_rs(c1, c2, keys)
    assert prod.level == 2
    assert err(prod, [a * b for a, b in zip(z1, z2)]) <= 1e-3
    assert err(ev.rotate(c1, 1, keys), z1[1:] + z1[:1]) <= 1e-4
    with pytest.raises(hekl.StateError):
        decryptor.decrypt(ev.multiply(c1, c2))
    with pytest.raises(hekl.ParameterError):
        ev.rotate(c1, 2, keys)


def test_density_report():
    report = hekl.bench("density", sizes=[32768], variants=["naive", "radix8"], peak_gops=100, bandwidth_gbs=50)
    assert report["all_passed"]
    rows = {r["variant"]: r for r in report["rows"]}
    assert rows["naive"]["density"] == 1.5
    with pytest.raises(hekl.ParameterError):
        hekl.bench("density")
