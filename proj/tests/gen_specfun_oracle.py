#!/usr/bin/env python3
"""Regenerate tests/specfun_oracle.inc.

High-precision reference values for the special-function layer, computed with
mpmath at 40 digits and frozen into a C++ table. Run from the repo root:

    python3 tests/gen_specfun_oracle.py > tests/specfun_oracle.inc

The sample domains track how the library actually calls these functions:
confluent hypergeometric arguments sit near the imaginary axis (oscillatory
radial arguments z = 2ikr) or on the positive real axis (bound-state tails
z = 2*tau*r), with small-to-moderate parameters derived from the coupling.
The random seed is fixed so reruns are byte-identical.
"""

import random

import mpmath as mp

mp.mp.dps = 40

rows = []


def emit(kind, a, b, z, ref):
    ref = mp.mpc(ref)
    rows.append(
        "    {%s, {%.17e, %.17e}, {%.17e, %.17e}, {%.17e, %.17e}, "
        "{%.17e, %.17e}},"
        % (
            kind,
            float(mp.re(a)), float(mp.im(a)),
            float(mp.re(b)), float(mp.im(b)),
            float(mp.re(z)), float(mp.im(z)),
            float(mp.re(ref)), float(mp.im(ref)),
        )
    )


def add_gamma(z):
    emit("OracleKind::Gamma", 0, 0, z, mp.gamma(z))


def add_digamma(z):
    emit("OracleKind::Digamma", 0, 0, z, mp.digamma(z))


def add_phi(a, b, z):
    emit("OracleKind::KummerPhi", a, b, z, mp.hyp1f1(a, b, z))


def add_psi(a, b, z):
    emit("OracleKind::TricomiPsi", a, b, z, mp.hyperu(a, b, z))


# pinned spot checks
add_gamma(mp.mpc(2, 3))
add_digamma(mp.mpc(0.5, 1.5))
add_phi(mp.mpc(0.3, 0.2), mp.mpf(1.6), mp.mpc(0, -3.4))
add_psi(mp.mpc(0.25, -0.4), mp.mpf(1.5), mp.mpc(0, -3))

rng = random.Random(20260826)


def away_from_poles(x):
    # keep real parts off the nonpositive integers where gamma/digamma throw
    return abs(x - round(x)) > 0.1 or round(x) > 0


for _ in range(30):
    while True:
        z = mp.mpc(rng.uniform(-8, 8), rng.uniform(-10, 10))
        if abs(mp.im(z)) > 0.05 or away_from_poles(float(mp.re(z))):
            break
    add_gamma(z)
    add_digamma(z)

for i in range(60):
    # parameters shaped like gamma +- i q E / k with |gamma| < 2, |q E / k| < 6
    a = mp.mpc(rng.uniform(-2, 2), rng.uniform(-6, 6))
    b = mp.mpf(rng.uniform(0.15, 3.8))
    if i < 36:  # oscillatory radial arguments
        z = mp.mpc(0, rng.choice([-1, 1]) * rng.uniform(0.2, 70))
    elif i < 48:  # decaying radial arguments
        z = mp.mpc(rng.uniform(0.1, 35), 0)
    else:
        z = mp.mpc(rng.uniform(-12, 12), rng.uniform(-25, 25))
    add_phi(a, b, z)

for i in range(60):
    a = mp.mpc(rng.uniform(-2, 3), rng.uniform(-5, 5))
    if i % 3 == 0:
        b = mp.mpf(rng.choice([1, 2, 3]))  # the logarithmic cases
    else:
        b = mp.mpf(rng.uniform(-1.5, 2.8))
        while min(abs(float(b) - n) for n in range(-3, 5)) < 0.05:
            b = mp.mpf(rng.uniform(-1.5, 2.8))
    if i < 24:  # bound-state tails, including the 10 < z < 35 midrange
        z = mp.mpc(rng.uniform(0.5, 55), 0)
    elif i < 44:
        z = mp.mpc(0, rng.choice([-1, 1]) * rng.uniform(1.0, 70))
    else:
        z = mp.mpc(rng.uniform(0.5, 20), rng.uniform(-20, 20))
    add_psi(a, b, z)

print("// Generated by tests/gen_specfun_oracle.py -- do not edit by hand.")
print("// clang-format off")
print("inline constexpr OracleRow kOracleTable[] = {")
print("\n".join(rows))
print("};")
print("// clang-format on")
