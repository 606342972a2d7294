#!/usr/bin/env python3
"""Generate the bundled credit-scoring dataset.

Writes a 1000-row CSV with 13 numeric columns, 3 three-level categorical
columns (22 features after one-hot encoding), a binary sex column used only
for group partitions, and a binary credit_risk label. Fully deterministic:
rerunning reproduces the file byte for byte.
"""

import csv
from pathlib import Path

import numpy as np

N = 1000
SEED = 20240917
OUT = Path(__file__).resolve().parent.parent / "data" / "german_credit_synth.csv"

NUMERIC = [
    "duration_months", "credit_amount", "installment_rate",
    "present_residence_since", "age_years", "existing_credits",
    "num_dependents", "checking_balance", "savings_balance",
    "employment_years", "disposable_income", "credit_history_score",
    "utilization",
]
PURPOSE = ["car", "furniture", "education"]
HOUSING = ["own", "rent", "free"]
JOB = ["skilled", "unskilled", "management"]


def main():
    rng = np.random.default_rng(SEED)

    duration = np.clip(rng.gamma(2.2, 10.0, N), 4, 72).round(0)
    amount = np.clip(rng.lognormal(7.8, 0.75, N), 250, 20000).round(0)
    installment = rng.integers(1, 5, N).astype(float)
    residence = rng.integers(1, 5, N).astype(float)
    age = np.clip(rng.normal(35.5, 11.0, N), 19, 75).round(0)
    credits = rng.integers(1, 5, N).astype(float)
    dependents = rng.integers(1, 3, N).astype(float)
    checking = np.clip(rng.normal(200.0, 450.0, N), -500, 2500).round(2)
    savings = np.clip(rng.lognormal(5.5, 1.3, N) - 150.0, 0, 15000).round(2)
    employment = np.clip(rng.gamma(2.0, 3.5, N), 0, 40).round(1)
    income = np.clip(rng.normal(1800.0, 650.0, N), 300, 5000).round(2)
    history = np.clip(rng.normal(0.6, 0.25, N), 0, 1).round(3)
    utilization = np.clip(rng.beta(2.0, 3.2, N), 0, 1).round(3)

    purpose = rng.choice(len(PURPOSE), N, p=[0.5, 0.3, 0.2])
    housing = rng.choice(len(HOUSING), N, p=[0.55, 0.3, 0.15])
    job = rng.choice(len(JOB), N, p=[0.6, 0.25, 0.15])
    sex = rng.choice(2, N, p=[0.63, 0.37])  # 0 male, 1 female

    z = (
        0.27
        - 0.030 * (duration - 21)
        - 0.00010 * (amount - 2800)
        - 0.22 * (installment - 2.5)
        + 0.022 * (age - 35)
        + 0.0009 * checking
        + 0.00012 * savings
        + 0.055 * employment
        + 0.00045 * (income - 1800)
        + 2.1 * (history - 0.6)
        - 1.3 * (utilization - 0.38)
        - 0.25 * (housing == 1)
        - 0.18 * (job == 1)
        + 0.15 * (purpose == 0)
        - 0.28 * sex
        + rng.normal(0.0, 0.9, N)
    )
    label = (z > 0).astype(int)

    OUT.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(NUMERIC + ["purpose", "housing", "job", "sex", "credit_risk"])
        for i in range(N):
            row = [
                int(duration[i]), int(amount[i]), int(installment[i]),
                int(residence[i]), int(age[i]), int(credits[i]),
                int(dependents[i]), f"{checking[i]:.2f}", f"{savings[i]:.2f}",
                f"{employment[i]:.1f}", f"{income[i]:.2f}", f"{history[i]:.3f}",
                f"{utilization[i]:.3f}",
                PURPOSE[purpose[i]], HOUSING[housing[i]], JOB[job[i]],
                "male" if sex[i] == 0 else "female", label[i],
            ]
            w.writerow(row)
    print(f"{OUT}: {N} rows, label mean {label.mean():.3f}, "
          f"female share {sex.mean():.3f}")


if __name__ == "__main__":
    main()
