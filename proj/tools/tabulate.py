#!/usr/bin/env python3
"""Generate CSV tables in the two formats nlstokes consumes.

kernel mode writes a radial profile table (rows "r,value", r covering [0,1])
suitable for the config form  {"kernel": {"table": "..."}}.  forcing mode
writes point samples (rows "x1,x2,f1,f2") on a lattice covering [-1,1]^2 for
{"case": {"forcing": "..."}}; the solver picks the nearest row per cloud
point, so choose a spacing a few times finer than the run's h.

Expressions are evaluated with everything from python's math module in scope,
plus r (kernel mode) or x and y (forcing mode).  Examples:

  tools/tabulate.py kernel  --expr "(1-r)**2" --rows 257 -o quad.csv
  tools/tabulate.py forcing --f1="-y*exp(-8*(x*x+y*y))" \
                            --f2="x*exp(-8*(x*x+y*y))" --spacing 0.02 -o swirl.csv

(use the --opt=value form when an expression starts with a minus sign)
"""

import argparse
import math
import sys

SCOPE = {k: getattr(math, k) for k in dir(math) if not k.startswith("_")}


def sample(expr, **vars):
    value = eval(expr, {"__builtins__": {}}, {**SCOPE, **vars})  # noqa: S307
    if not math.isfinite(value):
        raise SystemExit(f"expression {expr!r} is not finite at {vars}")
    return value


def write_kernel(args):
    if args.rows < 4:
        raise SystemExit("kernel tables need at least 4 rows")
    with open(args.output, "w") as out:
        out.write("r,value\n")
        for i in range(args.rows):
            r = i / (args.rows - 1)
            out.write(f"{r:.17g},{sample(args.expr, r=r):.17g}\n")
    print(f"wrote {args.rows} rows to {args.output}")


def write_forcing(args):
    n = round(2.0 / args.spacing)
    with open(args.output, "w") as out:
        out.write("x1,x2,f1,f2\n")
        for i in range(n + 1):
            for j in range(n + 1):
                x, y = -1.0 + i * args.spacing, -1.0 + j * args.spacing
                f1 = sample(args.f1, x=x, y=y)
                f2 = sample(args.f2, x=x, y=y)
                out.write(f"{x:.17g},{y:.17g},{f1:.17g},{f2:.17g}\n")
    print(f"wrote {(n + 1) ** 2} rows to {args.output}")


def main(argv):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="mode", required=True)

    k = sub.add_parser("kernel", help="radial profile table on [0,1]")
    k.add_argument("--expr", required=True, help="R(r), e.g. '(1-r)**2'")
    k.add_argument("--rows", type=int, default=257)
    k.add_argument("-o", "--output", required=True)
    k.set_defaults(run=write_kernel)

    f = sub.add_parser("forcing", help="forcing samples on [-1,1]^2")
    f.add_argument("--f1", required=True, help="first component f1(x,y)")
    f.add_argument("--f2", required=True, help="second component f2(x,y)")
    f.add_argument("--spacing", type=float, default=0.02)
    f.add_argument("-o", "--output", required=True)
    f.set_defaults(run=write_forcing)

    args = ap.parse_args(argv)
    args.run(args)


if __name__ == "__main__":
    main(sys.argv[1:])
