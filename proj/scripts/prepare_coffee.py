"""Convert a copy of the pgmm coffee table into data/coffee.csv and data/coffee_class.csv.

Usage: python scripts/prepare_coffee.py <coffee.csv> [data_dir]

The input is the coffee data frame exported to CSV (for example with
write.csv(coffee, "coffee.csv") in R). Row-name, Variety and Country columns
are dropped from the numeric table; Variety becomes the class file.
"""

import csv
import sys
from pathlib import Path

DROP = {"", "rownames", "Variety", "Country"}


def main(argv):
    if len(argv) < 2:
        sys.exit(__doc__)
    src = Path(argv[1])
    out_dir = Path(argv[2]) if len(argv) > 2 else Path(__file__).resolve().parents[1] / "data"
    with src.open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or "Variety" not in rows[0]:
        sys.exit(f"{src}: expected a Variety column")
    keep = [c for c in rows[0] if c not in DROP]
    if len(keep) != 12 or len(rows) != 43:
        sys.exit(f"{src}: expected 43 rows and 12 numeric columns, got {len(rows)} and {len(keep)}")
    with (out_dir / "coffee.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(keep)
        for r in rows:
            w.writerow([r[c] for c in keep])
    names = {"1": "Arabica", "2": "Robusta"}
    with (out_dir / "coffee_class.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["Class"])
        for r in rows:
            w.writerow([names.get(r["Variety"], r["Variety"])])
    print(f"wrote {out_dir / 'coffee.csv'} and {out_dir / 'coffee_class.csv'}")


if __name__ == "__main__":
    main(sys.argv)
