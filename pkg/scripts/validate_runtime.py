"""Mesure les temps d'exécution réels de la CLI, processus neuf à chaque run.

Lance `python -m indexbound` en sous-processus (aucun cache chaud) :
  - constant --method slepian      : budget 30 s
  - design --modes N (N = 5 20 50) : budget 300 s chacun
  - chi-plot sur [0, 60] pas 0.01  : budget 5 s

Relit le JSON produit pour contrôler la chaîne (C = 30σ, bornes publiées).

Critère PASS : chaque run termine avec le code 0, dans son budget, et
ses valeurs respectent les bornes.

Usage : python scripts/validate_runtime.py [--modes 5 20] [--keep]
"""

from __future__ import annotations

import argparse
import json
import os
import shutil
import subprocess
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

if hasattr(sys.stdout, "reconfigure"):
    sys.stdout.reconfigure(encoding="utf-8", errors="replace")

SIGMA_BOUNDS = {5: 1.42, 20: 1.37, 50: 1.36}


def run_cli(args: list[str], workdir: Path, timeout: float) -> tuple[int, float, str]:
    """Exécute la CLI, retourne (code, secondes, stderr)."""
    env = os.environ.copy()
    env["PYTHONUNBUFFERED"] = "1"
    env["PYTHONIOENCODING"] = "utf-8"
    env["PYTHONPATH"] = str(ROOT / "src") + os.pathsep + env.get("PYTHONPATH", "")
    cmd = [sys.executable, "-m", "indexbound", *args]
    started = time.perf_counter()
    try:
        proc = subprocess.run(
            cmd,
            cwd=str(ROOT),
            env=env,
            capture_output=True,
            text=True,
            encoding="utf-8",
            errors="replace",
            timeout=timeout,
        )
    except subprocess.TimeoutExpired:
        return -1, time.perf_counter() - started, f"timeout {timeout:.0f}s"
    return proc.returncode, time.perf_counter() - started, proc.stderr


def check_slepian(workdir: Path) -> tuple[bool, str, float]:
    out = workdir / "slepian.json"
    rc, secs, err = run_cli(["constant", "--method", "slepian", "--out", str(out)], workdir, timeout=120)
    if rc != 0:
        return False, f"exit {rc} : {err.strip()[-300:]}", secs
    report = json.loads(out.read_text(encoding="utf-8"))
    sigma, c = report["result"]["sigma"], report["result"]["C"]
    ok = abs(c - 86.0463) <= 0.2 and c == 30.0 * sigma and secs < 30
    return ok, f"σ = {sigma:.6f}, C = {c:.4f}", secs


def check_design(workdir: Path, n: int) -> tuple[bool, str, float]:
    out = workdir / f"design_n{n}.json"
    rc, secs, err = run_cli(["design", "--modes", str(n), "--out", str(out)], workdir, timeout=900)
    if rc != 0:
        return False, f"exit {rc} : {err.strip()[-300:]}", secs
    report = json.loads(out.read_text(encoding="utf-8"))
    sigma = report["result"]["sigma"]
    verification = report["diagnostics"]["verification"]
    ok = verification["passes"] and secs < 300
    bound = SIGMA_BOUNDS.get(n)
    if bound is not None:
        ok = ok and sigma <= bound
    detail = f"σ = {sigma:.5f}, pire marge {verification['worst_slack']:.2e} ({verification['worst_family']})"
    return ok, detail, secs


def check_plot(workdir: Path) -> tuple[bool, str, float]:
    out = workdir / "chi.csv"
    rc, secs, err = run_cli(
        ["chi-plot", "--x-min", "0", "--x-max", "60", "--step", "0.01", "--out", str(out)],
        workdir,
        timeout=60,
    )
    if rc != 0:
        return False, f"exit {rc} : {err.strip()[-300:]}", secs
    rows = out.read_text(encoding="utf-8").strip().splitlines()
    ok = len(rows) == 6002 and rows[1] == "0,0" and secs < 5
    return ok, f"{len(rows) - 1} échantillons", secs


def main() -> int:
    parser = argparse.ArgumentParser(description="Validation des temps d'exécution de la CLI")
    parser.add_argument("--modes", type=int, nargs="+", default=[5, 20, 50])
    parser.add_argument("--keep", action="store_true", help="Conserve le dossier de travail")
    args = parser.parse_args()

    workdir = ROOT / "validation_runtime_workdir"
    if workdir.exists():
        shutil.rmtree(workdir)
    workdir.mkdir(parents=True)

    results: list[tuple[str, bool, str, float]] = []
    print("[runtime] constant --method slepian ...")
    results.append(("slepian", *check_slepian(workdir)))
    for n in args.modes:
        print(f"[runtime] design --modes {n} ... (peut prendre plusieurs minutes)")
        results.append((f"design n={n}", *check_design(workdir, n)))
    print("[runtime] chi-plot [0, 60] ...")
    results.append(("chi-plot", *check_plot(workdir)))

    print()
    print("=" * 72)
    for name, ok, detail, secs in results:
        print(f"{'✓' if ok else '✗'} {name:<14} {secs:>7.1f}s  {detail}")
    print("=" * 72)

    if not args.keep:
        shutil.rmtree(workdir, ignore_errors=True)

    failed = [name for name, ok, _, _ in results if not ok]
    if failed:
        print(f"VERDICT : FAIL — {', '.join(failed)}")
        return 1
    print("VERDICT : PASS — budgets et bornes respectés")
    return 0


if __name__ == "__main__":
    sys.exit(main())
