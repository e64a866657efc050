"""Access to the scenario files shipped with the package."""

from __future__ import annotations

from pathlib import Path

_DIR = Path(__file__).parent / "scenarios"

BUNDLED = ("k2_4_pi2", "k2_5_sympl", "cover_k3", "cover_b2plus3")


def names() -> tuple[str, ...]:
    return BUNDLED


def path(name: str) -> Path:
    p = _DIR / f"{name}.scn"
    if not p.exists():
        raise KeyError(f"no bundled scenario named {name!r}")
    return p


def text(name: str) -> str:
    return path(name).read_text(encoding="utf-8")
