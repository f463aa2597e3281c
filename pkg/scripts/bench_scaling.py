"""Horizon-scaling benchmark: restricted mode over D in {20, 80, 320}.

Generates a seeded corpus (three instances per horizon), runs the solver in
restricted mode with eps = 1, and writes the per-stage timing table to
bench_scaling.csv. Smooth growth of the timings over the horizon column is
the scaling evidence; the LP size is governed by the point set, not by D.
"""
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from powersched.cli import main as cli_main
from powersched.gen import generate_instance
from powersched.fileio import emit_instance

HORIZONS = (20, 80, 320)
PER_HORIZON = 3


def main() -> None:
    out = Path(__file__).resolve().parent.parent / "bench_scaling.csv"
    with tempfile.TemporaryDirectory() as tmp:
        corpus = Path(tmp)
        for horizon in HORIZONS:
            for k in range(PER_HORIZON):
                inst = generate_instance(
                    seed=97 * horizon + k, n=3, machines=1,
                    horizon=horizon, wakeup=4, density=0.3,
                )
                name = f"d{horizon:04d}_{k}.txt"
                (corpus / name).write_text(emit_instance(inst))
        code = cli_main([
            "bench", str(corpus), "--mode", "restricted", "--epsilon", "1",
            "--out", str(out),
        ])
        if code != 0:
            raise SystemExit(code)
    print(out.read_text())
    print(f"table written to {out}")


if __name__ == "__main__":
    main()
