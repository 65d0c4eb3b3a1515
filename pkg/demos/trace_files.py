"""Generate a trace file, replay it through the command-line driver, check it.

Equivalent shell session:

    python -m dynvc gen window --n 20 --tau 300 --window 25 --seed 3 --eps 3/10 -o w.tr
    python -m dynvc run   --trace w.tr --mode float --summary-only
    python -m dynvc check --trace w.tr --summary-only

Run:  python demos/trace_files.py
"""

import tempfile
from pathlib import Path

from dynvc.cli import main as cli
from dynvc.tracegen import gen_sliding_window, read_trace, write_trace


def main():
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "window.tr"
        write_trace(gen_sliding_window(20, 300, 25, seed=3, eps="3/10"), path)
        print("".join(path.read_text().splitlines(keepends=True)[:9]), "...")
        print(f"{len(read_trace(path))} events\n")

        print("float replay, summary only:")
        status = cli(["run", "--trace", str(path), "--summary-only", "--no-timing"])
        print(f"exit {status}\n")

        print("exact replay with every check and the ledger:")
        status = cli(["check", "--trace", str(path), "--summary-only", "--no-timing"])
        print(f"exit {status}")


if __name__ == "__main__":
    main()
