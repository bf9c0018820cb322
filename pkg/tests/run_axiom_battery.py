from __future__ import annotations

from pathlib import Path
import sys


def main() -> int:
    root = Path(__file__).resolve().parents[1]
    if str(root) not in sys.path:
        sys.path.insert(0, str(root))

    from bondcat.harness import verify_axioms
    from bondcat.scalar import Field

    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 1
    trials = int(sys.argv[2]) if len(sys.argv) > 2 else 5

    print(f"Running every battery with seed={seed}, trials={trials} over gf:5")
    summary = verify_axioms(seed=seed, trials=trials, field=Field(5))
    for battery in summary.batteries:
        print("\n" + "=" * 80)
        print(f"Battery: {battery.name}")
        print(f"passed: {battery.passed}/{battery.trials}")
        for note, count in sorted(battery.notes.items()):
            print(f"  - {note}: {count}")
        for failure in battery.failures[:3]:
            print(f"  [FAIL] {failure}")

    print(f"\nDone. {summary.failure_count} failure(s).")
    return 0 if summary.failure_count == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
