"""End-to-end checks of the levy-emm command line.

Usage: cli_reports.py <levy-emm binary> <repo root>

Every report produced here is validated against docs/report.schema.json.
"""

import json
import os
import subprocess
import sys
import tempfile

import jsonschema

BIN, ROOT = sys.argv[1], sys.argv[2]
MODELS = os.path.join(ROOT, "data", "models")
with open(os.path.join(ROOT, "docs", "report.schema.json")) as f:
    SCHEMA = json.load(f)
VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)

failures = []
checks = 0


def check(cond, what):
    global checks
    checks += 1
    if not cond:
        failures.append(what)
        print("FAIL:", what)


def run(args, env=None, want_json=True):
    e = dict(os.environ)
    if env:
        e.update(env)
    p = subprocess.run([BIN] + args, capture_output=True, text=True, env=e, timeout=600)
    if not want_json:
        return p.returncode, p.stdout, None
    try:
        report = json.loads(p.stdout)
    except json.JSONDecodeError:
        check(False, f"{args}: stdout is not JSON: {p.stdout[:200]!r} {p.stderr[:200]!r}")
        return p.returncode, p.stdout, None
    errs = sorted(VALIDATOR.iter_errors(report), key=lambda x: list(x.path))
    check(not errs, f"{args}: schema: " + "; ".join(f"{list(x.path)}: {x.message[:160]}" for x in errs[:3]))
    check(report["exit_code"] == p.returncode, f"{args}: exit_code field {report['exit_code']} != {p.returncode}")
    return p.returncode, p.stdout, report


def model(name):
    return os.path.join(MODELS, name + ".json")


def write_tmp(obj_or_text):
    f = tempfile.NamedTemporaryFile("w", suffix=".json", delete=False)
    f.write(obj_or_text if isinstance(obj_or_text, str) else json.dumps(obj_or_text))
    f.close()
    return f.name


# Linear models whose jumps reach below -1 have no log-price counterpart.
TWO_SIDED_LINEAR = {"cgmy", "kou", "merton", "stable_0_8", "stable_1_5", "variance_gamma"}

# Every shipped model through every command.
names = sorted(n[:-5] for n in os.listdir(MODELS) if n.endswith(".json"))
for n in names:
    with open(model(n)) as f:
        geometric = json.load(f)["market"] == "geometric"
    for args in (["solve"], ["domain"], ["approx", "--n-max", "16"],
                 ["convert", "--direction", "g2l" if geometric else "l2g"],
                 ["mc-check", "--samples", "20000", "--seed", "5"]):
        code, _, rep = run(args[:1] + [model(n)] + args[1:])
        if args[0] in ("approx", "mc-check") and n == "arbitrage":
            check(code == 3 and rep["error"]["name"] == "ArbitrageMarket", f"{n} {args[0]}: arbitrage refused")
            continue
        if args[0] == "convert" and n in TWO_SIDED_LINEAR:
            check(code == 2 and rep["error"]["name"] == "JumpBelowMinusOne", f"{n} l2g: jumps below -1 refused")
            continue
        check(code == 0, f"{n} {args[0]}: exit {code}")

# Closed-form and reference values.
_, _, rep = run(["solve", model("brownian")])
check(abs(rep["result"]["kappa0"] + 5 / 9) < 1e-9, "brownian kappa0 = -5/9")
check(abs(rep["result"]["entropy"] - 0.05 ** 2 / (2 * 0.09)) < 1e-9, "brownian entropy b^2/(2 sigma^2)")
_, _, rep = run(["domain", model("stable_1_5")])
check(rep["result"]["I"]["a"] == 0 and rep["result"]["I"]["b"] == 0, "stable domain I = {0}")
code, _, rep = run(["solve", model("arbitrage")])
check(code == 0 and rep["status"] == "ok" and rep["result"]["status"] == "ArbitrageMarket",
      "arbitrage gate: exit 0 with explicit status")
_, _, rep = run(["solve", model("stable_0_8")])
check(rep["result"]["status"] == "NoEmm" and rep["result"]["infimum_entropy"] == 0, "alpha 0.8: NoEmm, infimum 0")

# Geometric market solved as if linear.
_, _, lin = run(["solve", model("kou_geometric"), "--market", "linear"])
_, _, geo = run(["solve", model("kou_geometric")])
check(lin["result"]["market"] == "linear" and geo["result"]["market"] == "geometric", "--market override")
check(lin["result"]["kappa0"] != geo["result"]["kappa0"], "linear and geometric parameters differ")

# Conversion round trip.
_, _, g2l = run(["convert", model("kou_geometric"), "--direction", "g2l"])
lin_path = write_tmp(g2l["result"]["converted_spec"])
_, _, back = run(["convert", lin_path, "--direction", "l2g"])
with open(model("kou_geometric")) as f:
    orig = json.load(f)
conv = back["result"]["converted_spec"]
check(abs(conv["b"] - orig["b"]) < 1e-6 and abs(conv["sigma2"] - orig["sigma2"]) < 1e-12, "g2l/l2g drift round trip")
check(conv["nu"] == {k: float(v) if not isinstance(v, str) else v for k, v in orig["nu"].items()},
      "g2l/l2g measure round trip")

# Deterministic commands are bit-identical across runs; MC is bit-identical per seed and thread count.
for args in (["solve", model("merton")], ["approx", model("brownian_atom"), "--n-max", "32"],
             ["domain", model("cgmy")]):
    _, a, _ = run(args)
    _, b, _ = run(args, env={"LEVY_EMM_THREADS": "3"})
    ra, rb = json.loads(a), json.loads(b)
    check(ra["result"] == rb["result"] and ra["spec"] == rb["spec"], f"{args[0]} reproducible")
mc = ["mc-check", model("kou"), "--samples", "30000", "--seed", "42"]
_, a, ra = run(mc, env={"LEVY_EMM_THREADS": "1"})
_, b, rb = run(mc, env={"LEVY_EMM_THREADS": "4"})
check(ra["threads"] == 1 and rb["threads"] == 4, "LEVY_EMM_THREADS reported")
check(ra["result"] == rb["result"] and ra["seed"] == 42, "mc-check identical for a seed across thread counts")
_, _, rc = run(mc[:-1] + ["43"])
check(rc["result"]["martingale_defect"] != ra["result"]["martingale_defect"], "different seed, different sample")
check(abs(ra["result"]["martingale_defect"]["z_score"]) < 5, "kou martingale defect within 5 SE")

# Pathwise density process.
_, _, rep = run(["mc-check", model("zn_atom"), "--samples", "50000", "--zn", "4"])
zn = rep["result"]["zn"]
check(zn["bound_holds"] and abs(zn["z_score"]) < 5, "Z^n_T: unit mean and bound")

# CSV trace and --out.
code, out, _ = run(["approx", model("stable_0_8"), "--n-max", "4", "--csv"], want_json=False)
lines = out.strip().splitlines()
check(code == 0 and lines[0] == "n,kappa_n,entropy_n,correction_n,entropy_vs_P,mass_gap" and len(lines) == 4,
      "CSV trace columns")
out_path = write_tmp("")
code, out, _ = run(["solve", model("brownian"), "--out", out_path], want_json=False)
with open(out_path) as f:
    written = json.load(f)
check(code == 0 and out == "" and not list(VALIDATOR.iter_errors(written)), "--out writes a valid report")

# Exit-code contract.
valid = {"version": 1, "name": "x", "market": "linear", "b": 0, "sigma2": 0.04, "T": 1, "nu": {"type": "none"}}
bad_specs = {
    "unknown field": dict(valid, extra=1),
    "missing field": {k: v for k, v in valid.items() if k != "T"},
    "bad version": dict(valid, version=2),
    "negative variance": dict(valid, sigma2=-1),
    "S0 on a linear market": dict(valid, S0=1),
    "geometric without S0": dict(valid, market="geometric"),
    "bad number": dict(valid, b="1e"),
    "bad measure": dict(valid, nu={"type": "symmetric_stable", "alpha": 3, "scale": 1}),
    "empty atoms": dict(valid, nu={"type": "atoms", "atoms": []}),
    "negative mass": dict(valid, nu={"type": "atoms", "atoms": [{"x": 1, "mass": -1}]}),
    "zero at atom": dict(valid, nu={"type": "atoms", "atoms": [{"x": 0, "mass": 1}]}),
}
for what, spec in bad_specs.items():
    for cmd in ("solve", "domain"):
        code, _, rep = run([cmd, write_tmp(spec)])
        check(code == 2 and rep["status"] == "error" and rep["error"]["category"] == "validation",
              f"{what} ({cmd}): exit {code}")
code, _, rep = run(["solve", write_tmp("{not json")])
check(code == 2 and rep["error"]["category"] == "validation", "invalid JSON exits 2")
code, _, rep = run(["solve", os.path.join(ROOT, "no_such_spec.json")])
check(code == 2, "missing spec file exits 2")
code, _, rep = run(["approx", model("brownian"), "--penalty", "cubic"])
check(code == 2, "unknown penalty exits 2")
code, _, rep = run(["approx", model("stable_0_8"), "--penalty", "power:1"])
check(code == 2 and rep["error"]["name"] == "PenaltyViolation", "linear penalty rejected")
code, _, rep = run(["mc-check", model("brownian"), "--epsilon", "3"])
check(code == 2, "bad epsilon exits 2")
code, _, _ = run(["frobnicate", model("brownian")], want_json=False)
check(code == 2, "unknown subcommand exits 2")
code, _, _ = run(["convert", model("brownian")], want_json=False)
check(code == 2, "missing required flag exits 2")
code, _, rep = run(["solve", model("brownian_atom"), "--max-abs-kappa", "0.5"])
check(code == 3 and rep["error"]["category"] == "numerical" and rep["result"]["status"] == "NoEmm",
      "bracket limit exits 3 with a structured error")
code, _, rep = run(["mc-check", model("brownian"), "--samples", "20", "--kappa", "300"])
check(code == 3 and rep["error"]["name"] == "DegenerateWeights", "degenerate weights exit 3")

print(f"{checks - len(failures)}/{checks} checks passed")
sys.exit(1 if failures else 0)
