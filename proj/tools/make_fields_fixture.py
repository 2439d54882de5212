#!/usr/bin/env python3
"""Writes data/fields66: 66 synthetic fields in five offshore groups, daily templates and landing sites."""
import math
import pathlib
import random
import sys

out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parent.parent / "data" / "fields66")
out.mkdir(parents=True, exist_ok=True)
rng = random.Random(20240617)

GROUPS = [  # centre lat, lon, members
    (56.55, 3.20, 14),
    (58.45, 1.95, 13),
    (59.75, 2.55, 13),
    (61.25, 2.10, 13),
    (64.95, 7.10, 13),
]
HOURS = [744, 672, 744, 720, 744, 720, 744, 744, 720, 744, 720, 744]
STREAMS = ["oil", "gas_export", "gas_injection", "water_injection", "water_lift", "produced_water"]
DEVICES = ["turbine_capacity", "separator_cap", "export_compressor_cap", "injection_compressor_cap",
           "pump_oil_cap", "pump_water_injection_cap", "pump_water_lift_cap"]

# Load coefficients used by the system builder (MW per kg/h).
SEP = 8.0e-6
COMP = 5.0e-5 * (3.0 ** (0.4 / 1.4) - 1.0)
PUMP_OIL, PUMP_WI, PUMP_WL = 5.0e-6, 3.0e-6, 2.0e-6
MARGIN = 1.6  # covers template peaks and noise


def offset(lat, lon, km, bearing):
    dlat = km * math.cos(bearing) / 111.2
    dlon = km * math.sin(bearing) / (111.2 * math.cos(math.radians(lat)))
    return round(lat + dlat, 5), round(lon + dlon, 5)


rows = []
n = 0
for glat, glon, count in GROUPS:
    for _ in range(count):
        n += 1
        lat, lon = offset(glat, glon, 40.0 * math.sqrt(rng.random()), rng.uniform(0, 2 * math.pi))
        life = round(rng.uniform(0.15, 1.0), 3)
        oil_rate = rng.uniform(5.0e4, 6.0e5)
        rate = {
            "oil": oil_rate,
            "gas_export": oil_rate * rng.uniform(0.3, 0.8),
            "gas_injection": oil_rate * rng.uniform(0.1, 0.4),
            "water_injection": oil_rate * rng.uniform(1.0, 2.5),
            "water_lift": oil_rate * rng.uniform(0.5, 1.2) * (1.5 - life),
            "produced_water": oil_rate * rng.uniform(1.0, 2.0) * (1.5 - life),
        }
        monthly = {}
        for s in STREAMS:
            vals = []
            for m, h in enumerate(HOURS):
                season = 1.0 + 0.04 * math.cos(2 * math.pi * m / 12)
                decline = 1.0 - 0.5 * (1.0 - life) * (m + 0.5) / 12
                vals.append(round(rate[s] * h * season * decline, 1))
            monthly[s] = vals
        peak = {s: max(v / h for v, h in zip(monthly[s], HOURS)) * MARGIN for s in STREAMS}
        dev = {
            "separator_cap": SEP * peak["oil"],
            "export_compressor_cap": COMP * peak["gas_export"],
            "injection_compressor_cap": COMP * peak["gas_injection"],
            "pump_oil_cap": PUMP_OIL * peak["oil"],
            "pump_water_injection_cap": PUMP_WI * peak["water_injection"],
            "pump_water_lift_cap": PUMP_WL * peak["water_lift"],
        }
        electric = sum(v for k, v in dev.items() if k != "separator_cap")
        dev["turbine_capacity"] = 1.5 * electric + dev["separator_cap"]
        row = [f"F{n:02d}", repr(lat), repr(lon), repr(life)] + [repr(round(dev[d], 4)) for d in DEVICES]
        for s in STREAMS:
            row += [repr(v) for v in monthly[s]]
        rows.append(",".join(row))

header = ["id", "lat", "lon", "lifetime"] + DEVICES + [f"{s}_m{m:02d}" for s in STREAMS for m in range(1, 13)]
(out / "fields.csv").write_text(",".join(header) + "\n" + "\n".join(rows) + "\n")

lines = ["hour," + ",".join(STREAMS) + ",wind"]
for h in range(24):
    wave = math.sin(2 * math.pi * (h - 9) / 24)
    vals = [1.0 + 0.05 * wave, 1.0 - 0.04 * wave, 1.0, 1.0 + 0.02 * wave, 1.0 + 0.03 * wave, 1.0,
            min(1.0, max(0.0, 0.45 + 0.2 * math.sin(2 * math.pi * h / 24 + 0.7)))]
    lines.append(str(h) + "," + ",".join(repr(round(v, 6)) for v in vals))
(out / "templates.csv").write_text("\n".join(lines) + "\n")

sites = [("farsund", 58.09, 6.80), ("karsto", 59.27, 5.52), ("kollsnes", 60.55, 4.84),
         ("mongstad", 60.81, 5.03), ("floro", 61.60, 5.03), ("nyhamna", 62.85, 6.95)]
(out / "onshore_sites.csv").write_text(
    "id,lat,lon,price,pfs_cap_limit\n" + "".join(f"{i},{a},{b},140,400\n" for i, a, b in sites))
