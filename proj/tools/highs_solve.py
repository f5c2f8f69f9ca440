#!/usr/bin/env python3
"""Solve an LP-format model with HiGHS and write `name value` lines.

Usage: highs_solve.py MODEL SOLUTION [--time-limit S] [--gap G]

Uses the `highspy` package when installed, otherwise the copy of HiGHS that
ships inside SciPy. Exit code 0 only when an optimal solution was written.
"""
import argparse
import sys


def load_highs():
    try:
        import highspy
        return highspy.Highs(), highspy.HighsModelStatus
    except ImportError:
        from scipy.optimize._highspy import _core
        return _core._Highs(), _core.HighsModelStatus


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("model")
    ap.add_argument("solution")
    ap.add_argument("--time-limit", type=float, default=None)
    ap.add_argument("--gap", type=float, default=1e-9)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    h, status_enum = load_highs()
    h.setOptionValue("output_flag", True)
    h.setOptionValue("log_to_console", True)
    h.setOptionValue("threads", args.threads)
    h.setOptionValue("random_seed", 0)
    h.setOptionValue("mip_rel_gap", args.gap)
    h.setOptionValue("mip_abs_gap", 1e-9)
    h.setOptionValue("mip_feasibility_tolerance", 1e-9)
    h.setOptionValue("primal_feasibility_tolerance", 1e-9)
    h.setOptionValue("dual_feasibility_tolerance", 1e-9)
    if args.time_limit:
        h.setOptionValue("time_limit", args.time_limit)

    h.readModel(args.model)
    h.run()
    status = h.getModelStatus()
    text = h.modelStatusToString(status)
    if status != status_enum.kOptimal:
        with open(args.solution, "w") as f:
            f.write(f"# status {text.lower()}\n")
        print(f"highs_solve: model status {text}", file=sys.stderr)
        return 1

    sol = h.getSolution()
    lp = h.getLp()
    names = list(lp.col_names_)
    values = list(sol.col_value)
    with open(args.solution, "w") as f:
        f.write("# status optimal\n")
        f.write(f"# objective {h.getInfo().objective_function_value!r}\n")
        for name, v in zip(names, values):
            f.write(f"{name} {v!r}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
