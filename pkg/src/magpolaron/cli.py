"""Command-line front end: configuration, orchestration, CSV/JSON emission.

Subcommands: oned, minimize, trial, sweep, fit, decompose, certify, verify.
Exit codes: 0 success, 1 validation error, 2 convergence failure,
3 invariant failure.  B values accept the shorthand "eN" meaning e^N.
Optional plain-text config files hold "key = value" lines; explicit flags win.
The worker count for sweeps can also come from MAGPOLARON_WORKERS.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import certificate as cert_mod
from . import decomposition as dec
from . import pekar
from .errors import ConvergenceError, MagpolaronError, ParameterError
from .grids import Field1D, standard_grid, mass as field_mass
from .oned import (OneDProblem, closed_form_energy, distance_to_profile,
                   gn_ratio, SHARP_GN_Q4, solve_numeric)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONVERGENCE = 2
EXIT_INVARIANT = 3

CSV_HEADER = ["B", "alpha", "E_total", "E_kin3", "E_coulomb", "trial_E",
              "cert_bound", "iters", "residual"]


def parse_b(text: str) -> float:
    """Parse a field-strength token; 'e12' means e^12, otherwise float."""
    text = text.strip()
    if text.startswith("e") and len(text) > 1:
        try:
            return float(np.exp(float(text[1:])))
        except ValueError:
            pass
    return float(text)


def _fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


def load_config(path: str) -> dict:
    """Plain-text 'key = value' configuration; '#' starts a comment."""
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"malformed config line: {raw!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            out[key] = val
    return out


def _merged(args: argparse.Namespace, key: str, default=None):
    val = getattr(args, key, None)
    if val is not None:
        return val
    cfg = getattr(args, "_config", {})
    return cfg.get(key, default)


def write_sweep_csv(records, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow([
                _fmt(r.B), _fmt(r.alpha), _fmt(r.E_total), _fmt(r.E_kin3),
                _fmt(r.E_coulomb), _fmt(r.trial_E), _fmt(r.cert_bound),
                str(r.iters), _fmt(r.residual)])


def read_sweep_csv(path: str):
    records = []
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(CSV_HEADER) - set(reader.fieldnames or [])
        if missing:
            raise ParameterError(f"sweep CSV missing columns: {sorted(missing)}")
        for row in reader:
            records.append(pekar.SweepRecord(
                B=float(row["B"]), alpha=float(row["alpha"]),
                E_total=float(row["E_total"]), E_kin3=float(row["E_kin3"]),
                E_coulomb=float(row["E_coulomb"]), trial_E=float(row["trial_E"]),
                cert_bound=float(row["cert_bound"]) if row["cert_bound"] else None,
                iters=int(row["iters"]), residual=float(row["residual"])))
    return records


# ----------------------------------------------------------------------------
# subcommands


def cmd_oned(args) -> int:
    a = float(_merged(args, "a", 1.0))
    b = float(_merged(args, "b", 1.0))
    tol = float(_merged(args, "tol", 1e-8))
    problem = OneDProblem(a, b)
    exact = closed_form_energy(problem)
    if b == 0.0:
        print(f"a={a} b={b}: closed-form energy 0 (degenerate: infimum not attained)")
        return EXIT_OK
    sol = solve_numeric(problem, standard_grid(), tol)
    dist = distance_to_profile(sol.minimizer, problem)
    print(f"a={a} b={b}")
    print(f"closed-form energy : {_fmt(exact)}")
    print(f"numeric energy     : {_fmt(sol.energy)}  "
          f"(iters={sol.iterations}, residual={sol.gradient_residual:.3e})")
    print(f"L2 distance to centered profile: {dist:.3e}")
    agree = abs(sol.energy - exact) <= max(tol, 1e-9 * abs(exact))
    print(f"agreement within tol={tol:g}: {'yes' if agree else 'NO'}")
    return EXIT_OK if agree else EXIT_INVARIANT


def cmd_minimize(args) -> int:
    B = parse_b(_merged(args, "B"))
    alpha = float(_merged(args, "alpha", 1.0))
    tol = float(_merged(args, "tol", 1e-11))
    params = pekar.PhysParams(B, alpha)
    sol, breakdown = pekar.pekar_minimize(params, tol=tol)
    print(f"B={_fmt(B)} alpha={alpha}")
    if sol.degenerate:
        print("zero coupling: minimizer degenerate, E_total = B")
        print(f"E_total = {_fmt(B)}")
        return EXIT_OK
    print(f"E_total    = {_fmt(breakdown.total)}")
    print(f"  transverse   = {_fmt(breakdown.transverse)}")
    print(f"  kinetic(3)   = {_fmt(breakdown.longitudinal_kinetic)}")
    print(f"  coulomb      = {_fmt(breakdown.coulomb)} "
          f"(+/- {breakdown.coulomb_error:.2e})")
    print(f"  E_total - B  = {_fmt(breakdown.total - B)}")
    print(f"iters={sol.iterations} residual={sol.gradient_residual:.3e}")
    return EXIT_OK


def cmd_trial(args) -> int:
    B = parse_b(_merged(args, "B"))
    alpha = float(_merged(args, "alpha", 1.0))
    breakdown = pekar.trial_energy(B, alpha)
    lnB = np.log(B)
    print(f"B={_fmt(B)} alpha={alpha} (sech trial profile, coupling lnB/2)")
    print(f"E_trial    = {_fmt(breakdown.total)}")
    print(f"  transverse   = {_fmt(breakdown.transverse)}")
    print(f"  kinetic(3)   = {_fmt(breakdown.longitudinal_kinetic)} "
          f"(= (lnB)^2/48 = {_fmt(lnB * lnB / 48)})")
    print(f"  coulomb      = {_fmt(breakdown.coulomb)}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    tokens = str(_merged(args, "B")).split(",")
    lnBs = sorted(float(np.log(parse_b(tok))) for tok in tokens if tok.strip())
    if not lnBs:
        raise ParameterError("sweep needs at least one B value")
    alpha = float(_merged(args, "alpha", 1.0))
    out = _merged(args, "out", "sweep.csv")
    workers = int(_merged(args, "workers",
                          os.environ.get("MAGPOLARON_WORKERS", "1")))
    do_cert = bool(getattr(args, "certify", False))
    records = pekar.sweep(lnBs, alpha, certify=do_cert, workers=workers)
    write_sweep_csv(records, out)
    print(f"wrote {len(records)} rows to {out}")
    for r in records:
        print(f"  B={r.B:.6g}  E_total-B={r.E_total - r.B:+.8g}  "
              f"trial-B={r.trial_E - r.B:+.8g}")
    return EXIT_OK


def cmd_fit(args) -> int:
    path = _merged(args, "infile")
    records = read_sweep_csv(path)
    fit = pekar.fit_asymptotics(records)
    print(f"fit over {len(records)} points:")
    print(f"c2 = {_fmt(fit.c2)}   (leading coefficient; compare alpha^2/48)")
    print(f"c3 = {_fmt(fit.c3)}   (mixed log coefficient; compare alpha^2/12)")
    print(f"c4 = {_fmt(fit.c4)}   (linear-in-lnB remainder)")
    print(f"residual rms = {fit.residual_rms:.3e}")
    return EXIT_OK


def cmd_decompose(args) -> int:
    B = parse_b(_merged(args, "B"))
    alpha = float(_merged(args, "alpha", 1.0))
    state = pekar.trial_state(B, alpha)
    ledger = dec.decompose(state.f, B)
    print(f"B={_fmt(B)} (sech trial profile, coupling lnB/2)")
    print(f"D_total          = {_fmt(ledger.d_total)} "
          f"(+/- {ledger.quadrature_error_estimate:.2e})")
    print(f"main coefficient = {_fmt(ledger.main_coefficient)}")
    print(f"main term        = {_fmt(ledger.main_term)}")
    print(f"r1 (closure)     = {_fmt(ledger.r1)}   bound {_fmt(ledger.r1_bound)}")
    print(f"r2 (kernel)      = {_fmt(ledger.r2)}")
    ok = ledger.r1_within_bound()
    print(f"|r1| within bound: {'yes' if ok else 'NO'}")
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_certify(args) -> int:
    B = parse_b(_merged(args, "B"))
    alpha = float(_merged(args, "alpha", 1.0))
    K = _merged(args, "K")
    K = parse_b(K) if K is not None else None
    cutoffs = None
    overrides = {key: _merged(args, key) for key in
                 ("K3", "Kperp", "gamma", "L", "M")}
    if any(v is not None for v in overrides.values()):
        defaults = cert_mod.default_cutoffs(
            B, alpha, K if K is not None else B * np.log(B) ** (-4.0 / 3.0))
        cutoffs = cert_mod.CutoffParams(
            K=defaults.K,
            K3=float(overrides["K3"]) if overrides["K3"] is not None else defaults.K3,
            Kperp=float(overrides["Kperp"]) if overrides["Kperp"] is not None else defaults.Kperp,
            gamma=float(overrides["gamma"]) if overrides["gamma"] is not None else defaults.gamma,
            L=float(overrides["L"]) if overrides["L"] is not None else defaults.L,
            M=int(overrides["M"]) if overrides["M"] is not None else defaults.M)
    cert = cert_mod.certify_projected(B, alpha, K, cutoffs)
    cm = _merged(args, "C_M")
    if cm is not None:
        cert.conditional_full_bound = cert_mod.conditional_full_bound(
            cert, float(cm))
    payload = cert_mod.certificate_to_dict(cert)
    out = _merged(args, "out")
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"wrote certificate to {out}")
    else:
        print(text)
    print(f"valid={cert.valid} p0_bound={_fmt(cert.p0_bound)}")
    return EXIT_OK if cert.valid else EXIT_INVARIANT


def _verify_suites():
    """Deterministic invariant battery; yields (name, passed, detail)."""
    from .grids import DensityProfile, density_fourier, kinetic, quartic

    grid = standard_grid()
    t = grid.points()

    # closed-form functionals
    prob = OneDProblem(1.0, 1.0)
    f11 = Field1D(grid, 0.5 / np.cosh(t / 2.0))
    ok = (abs(field_mass(f11) - 1) < 1e-10
          and abs(kinetic(f11) - 1.0 / 12.0) < 1e-8
          and abs(quartic(f11) - 1.0 / 6.0) < 1e-8)
    yield "grid functionals on the sech profile", ok, ""

    # Parseval
    rng = np.random.default_rng(202406)
    bump = np.zeros(grid.n)
    for _ in range(4):
        c, s, amp = rng.uniform(-4, 4), rng.uniform(0.7, 2.0), rng.uniform(0.2, 1.0)
        bump += amp * np.exp(-((t - c) / s) ** 2)
    rho = DensityProfile(grid, bump)
    k, rho_hat = density_fourier(rho)
    lhs = (k[1] - k[0]) * np.sum(np.abs(rho_hat) ** 2)
    rhs = 2 * np.pi * grid.spacing * np.sum(bump ** 2)
    ok = abs(lhs - rhs) <= 1e-10 * abs(rhs)
    yield "Parseval identity on a random density", ok, f"rel={(lhs-rhs)/rhs:.2e}"

    # interpolation-ratio floor on random fields
    worst = np.inf
    for _ in range(50):
        vals = np.zeros(grid.n)
        for _ in range(rng.integers(1, 4)):
            c, s, amp = rng.uniform(-4, 4), rng.uniform(0.7, 2.2), rng.uniform(-1, 1)
            vals += amp * np.exp(-((t - c) / s) ** 2)
        if np.max(np.abs(vals)) < 1e-3:
            continue
        worst = min(worst, gn_ratio(Field1D(grid, vals)))
    ok = worst >= SHARP_GN_Q4 - 1e-9
    yield "sharp interpolation ratio floor", ok, f"min ratio={worst:.9f}"

    # coupling rescaling identity
    gscale = standard_grid(4096, 20.0)
    f12 = Field1D(gscale, (np.sqrt(2.0) / 2.0) / np.cosh(gscale.points()))
    passed, rel = pekar.scaling_identity_check(np.exp(8.0), 2.0, f12)
    yield "coupling rescaling identity", passed, f"rel={rel:.2e}"

    # dual-path Coulomb agreement
    d_r = dec.d_product_real(f11, 4.0)
    d_f = dec.d_product_fourier(f11, 4.0)
    rel = abs(d_r - d_f) / abs(d_f)
    yield "dual-path Coulomb agreement", rel < 1e-9, f"rel={rel:.2e}"

    # ledger closure
    ledger = dec.decompose(pekar.trial_state(np.exp(6.0)).f, np.exp(6.0))
    ok = (abs(ledger.closure_defect()) < 1e-12 and ledger.r1_within_bound())
    yield "decomposition ledger closure", ok, ""

    # classical-field amplitude route
    state = pekar.trial_state(np.exp(6.0))
    e1 = pekar.pekar_energy(state).total
    e2 = pekar.coherent_infimum(state)
    rel = abs(e1 - e2) / abs(e1)
    yield "classical-amplitude energy route", rel < 1e-8, f"rel={rel:.2e}"

    # certificate sanity
    cert = cert_mod.certify_projected(np.exp(12.0), 1.0)
    floor = cert_mod.analytic_infimum_floor(
        cert.ledger.kappa1, cert.cutoffs.gamma, cert.cutoffs.Kperp, 1.0)
    ok = (cert.valid and cert.ledger.kappa1 <= cert.ledger.kappa
          and cert.ledger.kappa2 <= cert.ledger.kappa
          and cert.I_value >= floor
          and abs(cert.recompute_bound() - cert.p0_bound) == 0.0)
    yield "certificate chain at B=e^12", ok, f"p0={cert.p0_bound:.6g}"


def cmd_verify(_args) -> int:
    failures = 0
    for name, ok, detail in _verify_suites():
        tag = "PASS" if ok else "FAIL"
        suffix = f"  [{detail}]" if detail else ""
        print(f"[{tag}] {name}{suffix}")
        if not ok:
            failures += 1
    if failures:
        print(f"{failures} invariant suite(s) failed")
        return EXIT_INVARIANT
    print("all invariant suites passed")
    return EXIT_OK


# ----------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magpolaron",
        description="Ground-state energy laboratory for the magnetopolaron")
    parser.add_argument("--config", help="plain-text key = value file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("oned", help="1D quartic problem: closed form vs numeric")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_oned)

    p = sub.add_parser("minimize", help="minimize the product-ansatz energy")
    p.add_argument("--B", required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("trial", help="energy of the sech trial state")
    p.add_argument("--B", required=True)
    p.add_argument("--alpha", type=float)
    p.set_defaults(func=cmd_trial)

    p = sub.add_parser("sweep", help="minimize across a list of B values")
    p.add_argument("--B", required=True, help="comma-separated (e.g. e10,e12)")
    p.add_argument("--alpha", type=float)
    p.add_argument("--out")
    p.add_argument("--certify", action="store_true")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="fit sweep energies to the log expansion")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("decompose", help="Coulomb decomposition ledger")
    p.add_argument("--B", required=True)
    p.add_argument("--alpha", type=float)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("certify", help="projected lower-bound certificate")
    p.add_argument("--B", required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--K")
    p.add_argument("--K3", type=float)
    p.add_argument("--Kperp", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--L", type=float)
    p.add_argument("--M", type=int)
    p.add_argument("--C_M", type=float, help="conditional full-operator constant")
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="run the invariant battery")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args._config = load_config(args.config) if args.config else {}
    except (OSError, MagpolaronError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"convergence failure: {exc} "
              f"(iterations={exc.iterations}, residual={exc.residual})",
              file=sys.stderr)
        return EXIT_CONVERGENCE
    except (MagpolaronError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
