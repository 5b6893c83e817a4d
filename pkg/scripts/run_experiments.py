#!/usr/bin/env python3
"""Run all built-in scenarios end to end and print a one-line digest of each.

Trajectory/metrics CSVs and summaries land under --out, one subdirectory per
scenario. Expect the uncontrolled baseline to synchronize without converging
to the reference, and every pinned scenario to drive the pin ratio to zero.
"""

import argparse
from pathlib import Path

import pinnet as pn

SCENARIOS = [
    "fig2-sym-uncontrolled",
    "fig4-sym-pinned",
    "fig5-asym-pinned",
    "nonlinear-pinned",
    "reducible-pinned",
]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results", help="output root (default: results)")
    args = ap.parse_args()

    rows = []
    for name in SCENARIOS:
        cfg = pn.parse_scenario(name)
        result = pn.run_scenario(cfg, out_dir=Path(args.out) / name)
        gate = result.report.gate_verdict
        rows.append(
            (
                name,
                "holds" if gate is not None and gate.holds else "fails",
                result.final_sync,
                result.final_pin,
                result.fitted_rate,
                result.exit_code,
            )
        )
        print(f"[{name}] done (exit {result.exit_code})")

    print()
    print(f"{'scenario':<24} {'condition':<10} {'sync(T)':>12} {'pin(T)':>12} {'rate':>10}")
    for name, verdict, sync, pin, rate, code in rows:
        sync_s = f"{sync:.3e}" if sync is not None else "n/a"
        pin_s = f"{pin:.3e}" if pin is not None else "n/a"
        rate_s = f"{rate:+.3f}" if rate is not None else "n/a"
        print(f"{name:<24} {verdict:<10} {sync_s:>12} {pin_s:>12} {rate_s:>10}")
    return 0 if all(r[-1] == 0 for r in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
