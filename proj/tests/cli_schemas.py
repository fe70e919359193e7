"""Run every CLI subcommand and validate its JSON outputs against schemas/."""

import json
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema

cli, schema_dir, work = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
shutil.rmtree(work, ignore_errors=True)
work.mkdir(parents=True)

schemas = {p.name.removesuffix(".schema.json"): json.loads(p.read_text()) for p in schema_dir.glob("*.schema.json")}
for s in schemas.values():
    jsonschema.Draft202012Validator.check_schema(s)

failures = []


def run(args, expect=0):
    proc = subprocess.run([cli, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        failures.append(f"{' '.join(args)}: exit {proc.returncode}, wanted {expect}: {proc.stderr.strip()}")
    return proc


def check(path, schema):
    try:
        jsonschema.validate(json.loads(path.read_text()), schemas[schema])
    except (jsonschema.ValidationError, json.JSONDecodeError, FileNotFoundError) as e:
        failures.append(f"{path.name} vs {schema}: {e}")


group_file = work / "group.txt"
group_file.write_text("invariants: 2 12\ngenerator: 1 1 a\ngenerator: 0 5 b\n")

runs = {
    "classgroup": (["classgroup", "-D", "-23"], {"classgroup.json": "classgroup"}),
    "classgroup_real": (["classgroup", "-D", "60"], {"classgroup.json": "classgroup"}),
    "spectrum": (["spectrum", "-D", "-47", "--bound", "20", "--delta", "0.3"],
                 {"spectrum.json": "spectrum", "scan.json": "scan"}),
    "spectrum_file": (["spectrum", "--group-file", str(group_file)], {"spectrum.json": "spectrum"}),
    "mix": (["mix", "-D", "-431", "--bound", "30", "--random-targets", "3", "--trials", "5000", "--seed", "4"],
            {"mix.json": "mix"}),
    "path": (["path", "-D", "-199", "--bound", "30", "--from", "1:1:50", "--to", "5:1:10", "--seed", "3"],
             {"certificate.json": "certificate"}),
    "ecgraph": (["ecgraph", "-p", "107", "-t", "3", "--primes", "3,5,7,13"], {"isogeny.json": "isogeny"}),
    "path_iso": (["path", "--ec-p", "107", "--ec-t", "3", "--primes", "3,5,7,13", "--from", "0", "--to", "0"],
                 {"certificate.json": "certificate"}),
    "dlpdemo": (["dlpdemo", "-p", "1009", "-t", "13", "--primes", "3,5,7,11,13", "--seed", "5"], {"dlp.json": "dlp"}),
    "dlpdemo_small": (["dlpdemo", "-p", "31", "-t", "3", "--primes", "7", "--seed", "1"], {"dlp.json": "dlp"}),
}

for name, (args, outputs) in runs.items():
    out = work / name
    if name == "path_iso":
        # Vertices of an isogeny graph are named by j-invariant; pick two real ones.
        iso = json.loads((work / "ecgraph" / "isogeny.json").read_text())
        js = [str(v["j"]) for v in iso["vertices"]]
        args = args[:-4] + ["--from", js[0], "--to", js[-1]]
    run([*args, "--out", str(out)])
    check(out / "manifest.json", "manifest")
    for file, schema in outputs.items():
        check(out / file, schema)
    manifest = json.loads((out / "manifest.json").read_text()) if (out / "manifest.json").exists() else {}
    for file, meta in manifest.get("outputs", {}).items():
        if (out / file).stat().st_size != meta["bytes"]:
            failures.append(f"{name}/{file}: manifest size mismatch")

# stdout format selection
proc = run(["classgroup", "-D", "-23", "--format", "json"])
try:
    jsonschema.validate(json.loads(proc.stdout), schemas["classgroup"])
    if json.loads(proc.stdout)["invariants"] != [3]:
        failures.append("classgroup -D -23 does not report invariants [3]")
except (json.JSONDecodeError, jsonschema.ValidationError) as e:
    failures.append(f"classgroup stdout: {e}")
proc = run(["spectrum", "-D", "-47", "--bound", "12", "--format", "csv"])
if not proc.stdout.startswith("B,lambda_triv,c,delta2,li_over_index,error_envelope\n"):
    failures.append("spectrum --format csv header")
proc = run(["spectrum", "-D", "-47", "--bound", "12", "--format", "dot"])
if not proc.stdout.startswith("graph "):
    failures.append("spectrum --format dot")

# verify: untampered, flipped inversion flag, edited endpoint
for name in ("path", "path_iso"):
    cert_path = work / name / "certificate.json"
    run(["verify", str(cert_path)], expect=0)
    cert = json.loads(cert_path.read_text())
    if cert["steps"]:
        cert["steps"][0]["inverted"] = not cert["steps"][0]["inverted"]
        bad = work / f"{name}_flipped.json"
        bad.write_text(json.dumps(cert))
        run(["verify", str(bad)], expect=1)

# error categories
run(["classgroup", "-D", "-5"], expect=2)
run(["ecgraph", "-p", "13", "-t", "4", "--primes", "3"], expect=2)
run(["path", "-D", "-47", "--bound", "12", "--from", "1:1:12", "--to", "2:1:6"], expect=3)
run(["classgroup"], expect=2)

if failures:
    print("\n".join(failures))
    sys.exit(1)
print(f"validated {len(runs)} runs against {len(schemas)} schemas")
