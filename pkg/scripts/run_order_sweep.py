"""Recognition rate as a function of mixture order on the synthetic corpus.

    python3 scripts/run_order_sweep.py --orders 2,4,8,16,32,64,128 --out sweep.csv
"""

import argparse
from pathlib import Path

from _corpus import synthetic_split

from scriptgmm.classifier import sweep_orders, sweep_to_csv
from scriptgmm.config import DEFAULT_ORDERS


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--side", type=int, default=64)
    p.add_argument("--per-class", type=int, default=200)
    p.add_argument("--orders", default=",".join(map(str, DEFAULT_ORDERS)))
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", type=Path)
    args = p.parse_args()

    orders = [int(o) for o in args.orders.split(",")]
    rows = sweep_orders(*synthetic_split(args.side, args.per_class, args.seed), orders, args.seed)
    for order in orders:
        avg = next(r.accuracy for r in rows if r.order == order and r.label == "average")
        print(f"order {order:4d}  average {avg:6.2f}%  " + "#" * int(avg / 2))
    if args.out:
        args.out.write_text(sweep_to_csv(rows))


if __name__ == "__main__":
    main()
