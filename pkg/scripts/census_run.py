"""Cross-check the structural, minor and matrix methods on every complex with n vertices."""
import argparse
import json

from unimodular.census import verify_theorem


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--sample", type=int, default=100, help="matrix-oracle sample size for n >= 5")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    reports = [verify_theorem(n, seed=args.seed, sample=args.sample) for n in range(args.max_n + 1)]
    if args.json:
        print(json.dumps([r.to_json() for r in reports], indent=2))
    else:
        for r in reports:
            print(r.summary())
    raise SystemExit(0 if all(r.ok for r in reports) else 1)


if __name__ == "__main__":
    main()
