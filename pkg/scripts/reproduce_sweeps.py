"""
reproduce_sweeps.py - desk-scale reiteration sweeps.

Runs the P2 sweep on a drug-like (F=10) and a breast-cancer (F=30) dataset and
prints the directional checks:

  (a) LIME reiteration for lin/log >= for mlp/kn, on average
  (b) SHAP reiteration is 1.0 at F=10 and below 1.0 at F=30
  (c) LIME reiteration at K=8 >= at K=4, on average

With --architectures it also sweeps mlp widths (one hidden layer) and depths
(layers of 5 neurons) at K=4 on the drug-like data, and prints the mean
reiteration similarity of correctly and incorrectly classified instances
per architecture. That table carries no pass/fail check.

Usage:
    python scripts/reproduce_sweeps.py --seed 0 [--instances 100] [--repetitions 50]
        [--architectures]

The breast-cancer data comes from scikit-learn (a dev dependency).
"""

import argparse
import logging
import sys
import tempfile
from pathlib import Path

import pandas as pd
from sklearn.datasets import load_breast_cancer

from leaf.data import Dataset, write_csv
from leaf.harness import build_config, run_p2, summary_frame
from leaf.harness.report import MetricReport

logger = logging.getLogger("reproduce_sweeps")

FAMILIES = "lin,log,rf,kn,mlp"
WIDTHS = "1,2,5,10,50,100"
DEPTHS = "5,5x5,5x5x5,5x5x5x5,5x5x5x5x5"


def breast_cancer_csv(directory: Path) -> Path:
    data = load_breast_cancer()
    names = tuple(name.replace(" ", "_") for name in data.feature_names)
    d = Dataset(features=data.data, labels=data.target, feature_names=names, name="breastcancer")
    return write_csv(d, directory / "breastcancer.csv")


def sweep(dataset: dict[str, str], args: argparse.Namespace, **overrides: str) -> MetricReport:
    values = {
        **dataset,
        "model.families": FAMILIES,
        "explain.k": "4,8",
        "instances.count": str(args.instances),
        "metrics.repetitions": str(args.repetitions),
        "run.seed": str(args.seed),
        **overrides,
    }
    if args.workers:
        values["run.workers"] = str(args.workers)
    return run_p2(build_config(values))


def reiteration(table: pd.DataFrame, explainer: str, **where: object) -> float:
    rows = table[table["explainer"] == explainer]
    for column, value in where.items():
        rows = rows[rows[column].isin(value if isinstance(value, list) else [value])]
    return float(rows["reiteration_similarity_mean"].mean())


def reiteration_by_correctness(report: MetricReport) -> pd.DataFrame:
    """Mean reiteration per (model name, explainer), split by correct classification."""
    cells = pd.DataFrame(
        [
            {
                "model_name": cell.model_name,
                "explainer": str(cell.explainer),
                "classified": "correct" if cell.correctly_classified else "incorrect",
                "reiteration_similarity": cell.reiteration_similarity,
            }
            for cell in report.cells
        ]
    )
    cells["reiteration_similarity"] = pd.to_numeric(cells["reiteration_similarity"])
    table = cells.pivot_table(
        index=["model_name", "explainer"],
        columns="classified",
        values="reiteration_similarity",
        aggfunc=["mean", "count"],
    )
    order = [f"mlp[{architecture}]" for architecture in f"{WIDTHS},{DEPTHS}".split(",")]
    return table.reindex(order, level="model_name")


def architecture_sweep(args: argparse.Namespace) -> None:
    for label, architectures in (("width", WIDTHS), ("depth", DEPTHS)):
        report = sweep(
            {"dataset.synthetic": "drug_like"},
            args,
            **{
                "model.families": "mlp",
                "model.mlp_architectures": architectures,
                "explain.k": "4",
            },
        )
        print(f"\n== drug_like mlp {label}")
        for descriptor in report.models:
            print(f"{descriptor.name}: test accuracy {descriptor.test_accuracy:.3f}")
        print(reiteration_by_correctness(report).to_string(float_format="%.3f"))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--seed", type=int, required=True)
    parser.add_argument("--instances", type=int, default=100)
    parser.add_argument("--repetitions", type=int, default=50)
    parser.add_argument("--workers", type=int)
    parser.add_argument("--architectures", action="store_true", help="also run the mlp sweep")
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO)

    with tempfile.TemporaryDirectory() as tmp:
        path = breast_cancer_csv(Path(tmp))
        tables = {
            "drug_like": summary_frame(sweep({"dataset.synthetic": "drug_like"}, args)),
            "breastcancer": summary_frame(sweep({"dataset.path": str(path)}, args)),
        }

    checks = []
    for name, table in tables.items():
        print(f"\n== {name}")
        print(table.to_string(index=False, float_format="%.3f"))
        simple = reiteration(table, "lime", model=["lin", "log"])
        flexible = reiteration(table, "lime", model=["mlp", "kn"])
        checks.append((f"{name}: lime lin/log >= mlp/kn", simple >= flexible))
        wide = reiteration(table, "lime", K=8)
        narrow = reiteration(table, "lime", K=4)
        checks.append((f"{name}: lime K=8 >= K=4", wide >= narrow))
    checks.append(("shap exact at F=10", reiteration(tables["drug_like"], "shap") == 1.0))
    checks.append(("shap sampled at F=30", reiteration(tables["breastcancer"], "shap") < 1.0))

    if args.architectures:
        architecture_sweep(args)

    print()
    for label, passed in checks:
        print(f"{'PASS' if passed else 'FAIL'}  {label}")
    return 0 if all(passed for _, passed in checks) else 1


if __name__ == "__main__":
    sys.exit(main())
