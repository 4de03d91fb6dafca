"""Synthesize one attack per category into a clean PDF and scan it back.

Shows the guard's round trip: every deterministic category is flagged by
the rule stages alone; the contextual category needs a semantic model,
so without one it reports as clean (which is why the service wires a
gateway into the scanner when semantic verification is enabled).

Usage: python3 scripts/guard_demo.py [--out-dir DIR]
"""

import argparse
from pathlib import Path

from paperloop.guard import AttackCategory, scan, synthesize_attack
from paperloop.pdfio import PdfBuilder


def clean_pdf() -> bytes:
    builder = PdfBuilder(title="A Clean Study", author="demo")
    page = builder.add_page()
    page.text_lines(
        72,
        720,
        [
            "A Clean Study of Sparse Training",
            "We report results on three benchmarks.",
            "All code and data are released.",
        ],
        size=11,
    )
    return builder.to_bytes()


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default=None, help="also write the PDFs here")
    args = ap.parse_args()
    out = Path(args.out_dir) if args.out_dir else None
    if out:
        out.mkdir(parents=True, exist_ok=True)

    base = clean_pdf()
    report = scan(base)
    print(f"{'clean':<18} flagged={report.flagged!s:<5} score={report.risk_score:.2f}")

    for category in AttackCategory:
        adv = synthesize_attack(base, category, seed=0)
        report = scan(adv)
        cats = ",".join(sorted(c.value for c in report.categories)) or "-"
        print(
            f"{category.value:<18} flagged={report.flagged!s:<5} "
            f"score={report.risk_score:<6.2f} categories={cats}"
        )
        if out:
            (out / f"{category.value.lower()}.pdf").write_bytes(adv)


if __name__ == "__main__":
    main()
