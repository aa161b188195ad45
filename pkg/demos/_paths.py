from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
PLANTED = ROOT / "tests" / "data" / "planted"
TOY = ROOT / "tests" / "data" / "toy"
