"""Regenerate the two headline figure datasets with the sweep engine.

Writes sweep_cop_vs_zeta.csv (detection-success curves over the warden
threshold, port-rich vs single-port warden at 20 and 25 dBm) and
sweep_suc_vs_power.csv (success probability over transmit power for the
four who-gets-ports scenarios).  Both runs are fully deterministic for a
fixed master seed; re-running reproduces the files byte for byte.

The CSVs feed the plotting frontend:
    render_figs --csv sweep_cop_vs_zeta.csv  --kind cop_vs_zeta  --out fig_cop.svg
    render_figs --csv sweep_suc_vs_power.csv --kind suc_vs_power --out fig_suc.svg --log-y
"""

from pathlib import Path

from covertfas.cli import main

HERE = Path(__file__).parent

# Threshold sweep: the preset's default axis and scenario set.
out_zeta = HERE / "sweep_cop_vs_zeta.csv"
assert main(["sweep", "--preset", "paper-sec4", "--out", str(out_zeta)]) == 0

# Power sweep: switch the axis; the scenario set follows automatically
# (single-port baseline plus the three port-upgrade variants).
power_cfg = HERE / "fig3_power_sweep.ini"
out_power = HERE / "sweep_suc_vs_power.csv"
assert main(["sweep", "--preset", "paper-sec4", "--config", str(power_cfg), "--out", str(out_power)]) == 0

for path in (out_zeta, out_power):
    lines = path.read_text().splitlines()
    print(f"{path.name}: {len(lines) - 1} rows")
    print("  " + lines[0])
    print("  " + lines[1])
