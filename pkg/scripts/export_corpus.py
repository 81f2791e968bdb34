"""Write every corpus proof to corpus/<name>.proof."""

import argparse
from pathlib import Path

from jstit.proofkit import corpus, format_proof


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=Path(__file__).resolve().parent.parent / "corpus", type=Path)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, entry in corpus().items():
        path = args.out / f"{name.lower()}.proof"
        path.write_text(f"# {entry.description}\n" + format_proof(entry.proof))
        print(f"{path.name}: {len(entry.proof)} lines, conclusion {entry.formula}")


if __name__ == "__main__":
    main()
