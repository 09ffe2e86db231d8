"""Print the closed-form tables side by side with their sample sizes."""

from adaptive_alpha.simlab import TABLE_IDS, reproduce_table

for tid in TABLE_IDS:
    table = reproduce_table(tid)
    print(f"== {tid} ==")
    print(table.to_csv())
