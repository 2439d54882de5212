#!/usr/bin/env python3
"""Writes data/desk: two clusters of two platforms, one hub, one onshore bus, 2 x 48 h."""
import json
import math
import pathlib
import sys

out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parent.parent / "data" / "desk")
out.mkdir(parents=True, exist_ok=True)

HOURS = 48
SLICES = [("winter", 0.0), ("summer", 1.0)]
T = HOURS * len(SLICES)

platforms = {
    "P1": dict(cluster="C1", lat=61.20, lon=2.20, scale=1.00, gt=40.0),
    "P2": dict(cluster="C1", lat=61.05, lon=2.45, scale=0.85, gt=35.0),
    "P3": dict(cluster="C2", lat=60.40, lon=2.75, scale=1.10, gt=45.0),
    "P4": dict(cluster="C2", lat=60.30, lon=2.50, scale=0.70, gt=30.0),
}
hub = dict(id="H1", lat=60.80, lon=2.90)
onshore = dict(id="O1", lat=60.55, lon=5.00)


def hour(t):
    return t % HOURS, t // HOURS


columns = {}
for pid, p in platforms.items():
    s = p["scale"]
    oil, gx, gi, wi, wl, pw = [], [], [], [], [], []
    for t in range(T):
        h, k = hour(t)
        decline = 1.0 - 0.04 * k
        wave = 1.0 + 0.05 * math.sin(2 * math.pi * (h + 7 * s) / 24)
        oil.append(round(1.0e6 * s * decline * wave, 3))
        gx.append(round(5.0e5 * s * decline * (2 - wave), 3))
        gi.append(round(3.0e5 * s * decline, 3))
        wi.append(round(2.0e6 * s * (1 + 0.02 * k), 3))
        wl.append(round(1.0e6 * s * (1 + 0.03 * k) * wave, 3))
        pw.append(round(1.5e6 * s, 3))
    columns[pid + ".oil"] = oil
    columns[pid + ".gas_export"] = gx
    columns[pid + ".gas_injection"] = gi
    columns[pid + ".water_injection"] = wi
    columns[pid + ".water_lift"] = wl
    columns[pid + ".produced_water"] = pw

wind = []
for t in range(T):
    h, k = hour(t)
    base = 0.55 if k == 0 else 0.35
    v = base + 0.25 * math.sin(2 * math.pi * h / 24 + 0.7) + 0.12 * math.sin(2 * math.pi * h / 37 + 1.3 * k)
    wind.append(round(min(1.0, max(0.0, v)), 6))
columns["wind.H1"] = wind

price = []
for t in range(T):
    h, k = hour(t)
    base = 150.0 if k == 0 else 125.0
    price.append(round(base + 20.0 * math.sin(2 * math.pi * (h - 6) / 24), 4))
columns["O1.price"] = price

locations = []
for pid, p in platforms.items():
    locations.append({
        "id": pid, "kind": "platform", "cluster": p["cluster"], "lat": p["lat"], "lon": p["lon"],
        "turbines": [{"id": "GT1", "capacity": p["gt"], "efficiency": 0.33, "heat_recovery": 0.35, "ramp": 0.5,
                      "fuel_emission": 0.2, "fuel_cost": 20.0, "var_cost": 5.0}],
        "process": {
            "separator_cap": 20.0, "separator_heat_coeff": 8.0e-6,
            "export_compressor_cap": 25.0, "injection_compressor_cap": 15.0,
            "compression_ratio": 3.0, "polytropic_exponent": 1.4, "head_density_coeff": 5.0e-5,
            "pump_oil_cap": 12.0, "pump_oil_coeff": 5.0e-6,
            "pump_water_injection_cap": 15.0, "pump_water_injection_coeff": 3.0e-6,
            "pump_water_lift_cap": 6.0, "pump_water_lift_coeff": 2.0e-6,
            "compressor_efficiency": 0.75, "separator_efficiency": 0.9, "pump_oil_efficiency": 0.8,
            "pump_water_injection_efficiency": 0.8, "pump_water_lift_efficiency": 0.8,
        },
    })
locations.append({"id": hub["id"], "kind": "hub", "cluster": "", "lat": hub["lat"], "lon": hub["lon"],
                  "hub": {"electrolysis_storage": 0.055, "electrolysis_fuel_cell": 0.05, "energy_content": 0.0333}})
locations.append({"id": onshore["id"], "kind": "onshore", "cluster": "", "lat": onshore["lat"], "lon": onshore["lon"],
                  "pfs_cap_limit": 400.0})

plats = list(platforms)
technologies = [
    {"id": "wind", "kind": "wind", "unit_inv_cost": 1.2e7, "fixed_om": 4.0e4, "fixed_inv_cost": 0.0, "unit_max": 10.0,
     "sites": [{"location": "H1", "max_units": 30, "hist_cap": 0.0, "max_cap": 300.0}]},
    {"id": "electrolyser", "kind": "electrolyser", "unit_inv_cost": 4.0e6, "fixed_om": 2.0e4, "unit_max": 20.0,
     "sites": [{"location": "H1", "max_units": 10, "max_cap": 200.0}]},
    {"id": "fuel_cell", "kind": "fuel_cell", "unit_inv_cost": 5.0e6, "fixed_om": 2.0e4, "unit_max": 20.0,
     "efficiency": 0.5, "ramp": 0.5, "sites": [{"location": "H1", "max_units": 10, "max_cap": 200.0}]},
    {"id": "h2_store", "kind": "hydrogen_storage", "unit_inv_cost": 400.0, "fixed_om": 2.0, "unit_max": 50000.0,
     "sites": [{"location": "H1", "max_units": 20, "max_cap": 1.0e6}]},
    {"id": "battery", "kind": "battery", "unit_inv_cost": 3.0e6, "fixed_om": 1.0e4, "unit_max": 10.0,
     "efficiency": 0.9, "power_ratio": 0.5, "sites": [{"location": z, "max_units": 4, "max_cap": 40.0} for z in plats]},
    {"id": "boiler", "kind": "boiler", "unit_inv_cost": 1.5e5, "fixed_om": 1.0e3, "unit_max": 5.0,
     "efficiency": 0.98, "sites": [{"location": z, "max_units": 6, "max_cap": 30.0} for z in plats]},
    {"id": "pfs", "kind": "power_from_shore", "unit_inv_cost": 2.0e5, "fixed_om": 2.0e3, "fixed_inv_cost": 0.0,
     "unit_max": 50.0, "sites": [{"location": "O1", "max_units": 20, "max_cap": 1000.0}]},
]

branches = [{"id": "O1-H1", "from": "O1", "to": "H1", "kind": "HVDC", "length_km": 150.0, "unit_inv_cost": 3000.0,
             "per_km_fixed": 2.0e4, "fixed_inv": 5.0e6, "fixed_om": 10.0, "max_cap": 1000.0, "unit_max": 250.0,
             "max_cables": 4, "efficiency": 0.96}]
for z in plats:
    p = platforms[z]
    d = 6371.0 * 2 * math.asin(math.sqrt(
        math.sin(math.radians(p["lat"] - hub["lat"]) / 2) ** 2
        + math.cos(math.radians(p["lat"])) * math.cos(math.radians(hub["lat"]))
        * math.sin(math.radians(p["lon"] - hub["lon"]) / 2) ** 2))
    branches.append({"id": "H1-" + z, "from": "H1", "to": z, "kind": "HVAC", "length_km": round(d, 3),
                     "unit_inv_cost": 2500.0, "per_km_fixed": 1.5e4, "fixed_inv": 1.0e6, "fixed_om": 8.0,
                     "max_cap": 120.0, "unit_max": 60.0, "max_cables": 2, "efficiency": 0.98})

system = {
    "name": "desk",
    "profiles": ["flows.csv", "renewables.csv", "prices.csv"],
    "time": {"hour_duration": 1.0, "kappa": 20.0,
             "slices": [{"id": name, "hours": HOURS, "weight": 8760.0 / T} for name, _ in SLICES]},
    "policy": {"co2_tax": 55.0, "co2_cap": None},
    "reserve": {"sigma": 0.2, "gen_shed_cost": 0.0, "demand_factor": 1.0},
    "locations": locations,
    "technologies": technologies,
    "branches": branches,
}
(out / "system.json").write_text(json.dumps(system, indent=2) + "\n")


def write_csv(name, keys):
    lines = [",".join(keys)]
    for t in range(T):
        lines.append(",".join(repr(columns[k][t]) for k in keys))
    (out / name).write_text("\n".join(lines) + "\n")


write_csv("flows.csv", [k for k in columns if k.startswith("P")])
write_csv("renewables.csv", ["wind.H1"])
write_csv("prices.csv", ["O1.price"])
