"""Smoke test for the ik_solitary extension module.

Build the module and put it on the path first, for example

    cargo build --release -p ik-solitary-py
    cp target/release/libik_solitary_py.so python/ik_solitary.so
    python3 python/smoke_test.py
"""

import math
import sys

import ik_solitary as ik


def check(cond, msg):
    if not cond:
        print("FAIL", msg)
        sys.exit(1)
    print("ok  ", msg)


params = ik.build_params([2])
check(abs(params["gamma"] - 1 / 3) < 1e-15, "gamma = 1/3")
check(params["positive"], "matrices positive")

check(ik.quartic_coeffs(1.0) == [7.0, 42.0, 78.0, 40.0, 0.0], "quartic at c = 1")

crest = ik.solve_crest(0.6)
check(abs(crest.eta0 - 0.581258) < 1e-6, f"crest height {crest.eta0}")
check(abs(-crest.kappa0 - 2.34087) < 1e-4, f"crest curvature {crest.kappa0}")

cp = ik.solve_critical()
check(abs(cp.delta_c - 0.62633493) < 5e-9, f"critical delta {cp.delta_c}")
check(abs(cp.theta_deg - 152.6) < 0.05, f"crest angle {cp.theta_deg}")
check(abs(ik.included_angle(math.tan(math.radians(30))) - 120) < 1e-12, "120 degree reference")

prof = ik.solve_solitary(0.3)
i1, i2 = prof.max_identity_residuals()
check(max(i1, i2) < 1e-8, f"first integrals {i1:.1e} {i2:.1e}")
check(len(prof) == len(prof.x) == len(prof.eta), "profile lengths")
check(prof.eta[len(prof) // 2] == prof.eta_max, "crest in the middle")

ratio = ik.compare_kdv(ik.solve_solitary(0.2)) / ik.compare_kdv(ik.solve_solitary(0.1))
check(12 <= ratio <= 20, f"KdV error ratio {ratio:.3f}")

fine = ik.solve_solitary(0.45, dx=0.1)
check(abs(fine.x[1] - fine.x[0] - 0.1) < 1e-12, "uniform resampling")
dim = fine.dimensional(2.0)
check(abs(dim["c"] - fine.c * math.sqrt(9.81 * 2.0)) < 1e-12, "dimensional speed")

ext = ik.extreme_profile()
check(abs(ext.eta_max - 0.687926) < 1e-6, f"extreme crest {ext.eta_max}")
check(ext.kappa0 is None and math.isnan(ext.eta_prime[len(ext) // 2]), "corner crest")

rows = ik.diagnostics_table([0.6, 0.62])
check(len(rows) == 2 and rows[1][0] == 0.62, "table order")

report = ik.fundamental_checks([x / 100 for x in range(-1000, 1001)])
check(report["passes"], "fundamental solutions")
check(ik.verify_kdv_solution(1 / 3, [0.0, 1.0, 5.0]) < 1e-12, "KdV profile equation")
check(abs(ik.q_positivity([2]) - 4 / 9) < 1e-14, "symbol for p = [2]")
check(ik.q_positivity([1, 2]) > 0 and ik.q_positivity([2, 4]) > 0, "symbol positivity")
c, eta, phi0, phi = ik.first_order_family(0.1, 2 / 3, [0.0, 1.0])
check(abs(eta[0] - 4 / 3 * 0.01) < 1e-15 and phi[0][0] == 0.0, "first-order family")

try:
    ik.solve_solitary(0.7)
    check(False, "supercritical delta rejected")
except ik.SolverError as e:
    check("no admissible real crest root" in str(e), "supercritical delta rejected")

try:
    ik.build_params([2, 2])
    check(False, "repeated exponents rejected")
except ValueError:
    check(True, "repeated exponents rejected")

print("all smoke checks passed")
