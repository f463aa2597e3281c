"""Walk the five-unit-job integrality-gap instance through the pipeline.

Prints the LP optimum, the two rounding candidates with their repairs, the
final schedule, and the exhaustive optimum for comparison.
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from powersched.core import Instance
from powersched.fileio import emit_schedule
from powersched.pipeline import PipelineConfig, solve_instance

GAP_JOBS = [(0, 1, 1), (1, 7, 1), (2, 4, 1), (4, 6, 1), (7, 8, 1)]


def main() -> None:
    inst = Instance.build(GAP_JOBS, machines=1, wakeup=1)
    result = solve_instance(inst, PipelineConfig(exact=True))
    print(f"jobs: {len(inst.jobs)}, horizon {inst.horizon}, "
          f"total volume {inst.total_ptime}, wake-up {inst.wakeup}")
    print(f"LP optimum: {result.lp_objective} "
          f"(= {float(result.lp_objective):.3f})")
    for i, cand in enumerate(result.candidates):
        marker = " <- chosen" if i == result.chosen else ""
        print(f"candidate {i}: weight {cand.weight}, "
              f"energy {cand.pre_energy} -> {cand.post_energy} "
              f"(+{cand.added_length} slots){marker}")
    print(f"final energy {result.energy}, guarantee bound {result.bound}, "
          f"exhaustive optimum {result.oracle_energy}")
    print("schedule:")
    print(emit_schedule(inst, result.schedule), end="")


if __name__ == "__main__":
    main()
