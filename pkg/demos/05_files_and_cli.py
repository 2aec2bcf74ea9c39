"""Problem files, the generator, and the command line."""
import subprocess
import sys
import tempfile
from pathlib import Path

from passalloc.io import parse_problem, serialize_problem
from passalloc.randgen import GenConfig, generate

d = generate(GenConfig(museums=(3, 4), consortia=(2, 2), seed=42))
text = serialize_problem(d)
print(text.decode()[:400], "...")
assert parse_problem(text) == d

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "p.json"
    path.write_bytes(text)
    for args in (["validate", str(path)],
                 ["allocate", "--rule", "pe", str(path)],
                 ["transform", str(path), "--split-museum", "1", "--prices", f"{d.price(-1) / 2},{d.price(-1) / 2}"]):
        run = subprocess.run([sys.executable, "-m", "passalloc", *args], capture_output=True, text=True)
        print("$ passalloc", " ".join(args[:3]), "-> exit", run.returncode)
        print(run.stdout[:300])
