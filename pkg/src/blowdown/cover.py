"""Unramified double-cover lifting of configurations.

Which curves split upstairs is monodromy data that cannot be inferred from
intersection numbers alone, so a lift is driven by a declaration: every base
curve maps either to two disjoint copies (Split) or to one connected double
cover (Connected), and the cover's pairing table is declared explicitly and
validated against the pullback rule

    sum of cover pairings over the preimages of {a, b}  =  2 * (a . b).

Ambient invariants double (e, sigma, K^2), the fundamental-group order
halves, and each base blow-up lifts to exactly two cover blow-ups at the two
preimages of its centre.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .configuration import (Configuration, Curve, InvariantSet, PointSpec,
                            pair_key)


class CoverError(ValueError):
    pass


@dataclass(frozen=True)
class SplittingDecl:
    """Lift declaration: preimage names per base curve plus cover pairings."""

    splits: tuple[tuple[str, tuple[str, str]], ...]
    connected: tuple[tuple[str, str], ...] = ()
    pairings: tuple[tuple[tuple[str, str], int], ...] = ()

    @classmethod
    def build(cls, splits: Mapping[str, tuple[str, str]],
              connected: Mapping[str, str] | None = None,
              pairings: Mapping[tuple[str, str], int] | None = None) -> "SplittingDecl":
        return cls(
            splits=tuple(sorted((k, (v[0], v[1])) for k, v in splits.items())),
            connected=tuple(sorted((connected or {}).items())),
            pairings=tuple(sorted((pair_key(*k), v)
                                  for k, v in (pairings or {}).items())),
        )

    def preimages(self, base_id: str) -> tuple[str, ...]:
        for k, (a, b) in self.splits:
            if k == base_id:
                return (a, b)
        for k, v in self.connected:
            if k == base_id:
                return (v,)
        raise CoverError(f"no lift declared for base curve {base_id!r}")


def lift_configuration(base: Configuration, decl: SplittingDecl) -> Configuration:
    """Lift a configuration along the declared unramified double cover."""
    if base.pi1_order is None:
        raise CoverError("base fundamental-group order unknown; cannot certify "
                         "a connected double cover")
    if base.pi1_order % 2 != 0:
        raise CoverError(f"base pi1 order {base.pi1_order} is odd; no connected "
                         "double cover exists")

    declared = [k for k, _ in decl.splits] + [k for k, _ in decl.connected]
    if sorted(declared) != sorted(base.curves):
        missing = set(base.curves) - set(declared)
        extra = set(declared) - set(base.curves)
        raise CoverError(f"splitting declaration mismatch: missing {sorted(missing)}, "
                         f"unknown {sorted(extra)}")
    if len(set(declared)) != len(declared):
        raise CoverError("a base curve is declared twice")

    curves: dict[str, Curve] = {}
    for base_id, (a, b) in decl.splits:
        src = base.curves[base_id]
        for new_id in (a, b):
            if new_id in curves:
                raise CoverError(f"cover curve id {new_id!r} reused")
            curves[new_id] = Curve(new_id, self_int=src.self_int, genus=src.genus,
                                   k_degree=src.k_degree, node_count=src.node_count,
                                   labels=src.labels)
    for base_id, new_id in decl.connected:
        src = base.curves[base_id]
        if src.genus < 1:
            raise CoverError(
                f"{base_id!r}: a rational curve has no connected unramified "
                "double cover; declare a split")
        if new_id in curves:
            raise CoverError(f"cover curve id {new_id!r} reused")
        curves[new_id] = Curve(new_id, self_int=2 * src.self_int,
                               genus=2 * src.genus - 1,
                               k_degree=2 * src.k_degree,
                               node_count=2 * src.node_count, labels=src.labels)

    pairings: dict[tuple[str, str], int] = {}
    for (a, b), v in decl.pairings:
        for cid in (a, b):
            if cid not in curves:
                raise CoverError(f"cover pairing names unknown curve {cid!r}")
        if v < 0:
            raise CoverError(f"negative cover pairing {a}.{b}")
        if v:
            pairings[pair_key(a, b)] = v

    # pullback sum rule for every base pair, and disjoint preimages of splits
    ids = sorted(base.curves)
    for i, a in enumerate(ids):
        pre_a = decl.preimages(a)
        if len(pre_a) == 2:
            x, y = pre_a
            if pairings.get(pair_key(x, y), 0) != 0:
                raise CoverError(
                    f"the two preimages of split curve {a!r} must be disjoint "
                    "(their self-intersections already account for the pullback)")
        for b in ids[i + 1:]:
            want = 2 * base.pairing(a, b)
            got = 0
            for x in pre_a:
                for y in decl.preimages(b):
                    got += pairings.get(pair_key(x, y), 0)
            if got != want:
                raise CoverError(
                    f"pullback pairing sum violated for {a}.{b}: cover total "
                    f"{got}, expected {want}")

    ambient = InvariantSet.derive(2 * base.ambient.e, 2 * base.ambient.sigma)
    return Configuration(curves, pairings, ambient, base.pi1_order // 2)


def lift_program(decl_steps: Sequence[tuple[PointSpec, PointSpec]]) -> list[PointSpec]:
    """Flatten a declared lift plan (two cover steps per base step)."""
    out: list[PointSpec] = []
    for pair in decl_steps:
        if len(pair) != 2:
            raise CoverError("each base blow-up lifts to exactly two cover blow-ups")
        out.extend(pair)
    return out


def check_doubling(base: Configuration, cover: Configuration) -> list[str]:
    """Verify the invariant-doubling identity; empty list means clean."""
    problems = []
    for name in ("e", "sigma", "k2"):
        b, c = getattr(base.ambient, name), getattr(cover.ambient, name)
        if c != 2 * b:
            problems.append(f"{name}: cover {c} != 2 * base {b}")
    if base.pi1_order is not None and cover.pi1_order is not None:
        if base.pi1_order != 2 * cover.pi1_order:
            problems.append(
                f"pi1 order: base {base.pi1_order} != 2 * cover {cover.pi1_order}")
    return problems
