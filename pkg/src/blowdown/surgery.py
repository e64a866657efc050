"""Rational blow-down bookkeeping.

Replacing a disjoint union of Wahl-chain neighbourhoods C_{p,q} (length l,
negative definite) by rational homology balls B_{p,q} changes the ambient
invariants by  e -> e - l,  sigma -> sigma + l,  K^2 -> K^2 + l  per chain,
leaves b2+ fixed, and drops b2 (and b2-) by l.  The surgery is modelled at
this level only; no handle decompositions.  The geometric facts the surgery
quietly relies on are emitted as a declarative assumption ledger with
citations to the literature, never computed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .configuration import Configuration, InvariantSet
from .hjcf import WahlParams, wahl_recognize
from .lattice import gram, is_negative_definite


class SurgeryError(ValueError):
    pass


@dataclass(frozen=True)
class SurgeryResult:
    before: InvariantSet
    after: InvariantSet
    pieces: tuple[tuple[WahlParams, int], ...]  # (params, chain length)
    removed_curve_ids: tuple[str, ...]

    @property
    def total_length(self) -> int:
        return sum(l for _, l in self.pieces)


@dataclass(frozen=True)
class Assumption:
    key: str
    claim: str
    citation: str

    def as_dict(self) -> dict:
        return {"key": self.key, "claim": self.claim, "citation": self.citation}


SURGERY_ASSUMPTIONS: tuple[Assumption, ...] = (
    Assumption(
        "qgorenstein_smoothing",
        "the contracted singular surface admits a global Q-Gorenstein smoothing",
        "Lee-Park smoothing theory; obstruction vanishing via H^2 of the log tangent sheaf",
    ),
    Assumption(
        "milnor_fiber",
        "a general fiber of the smoothing is diffeomorphic to the rational blow-down",
        "Milnor fiber theory for Q-Gorenstein smoothings of Wahl singularities",
    ),
    Assumption(
        "minimality",
        "the resulting surface / 4-manifold is minimal",
        "Ozsvath-Szabo obstruction techniques",
    ),
    Assumption(
        "symplectic_structure",
        "the rational blow-down carries a symplectic structure",
        "Symington: rational blow-downs are symplectic",
    ),
)

COVER_ASSUMPTIONS: tuple[Assumption, ...] = (
    Assumption(
        "log_h2_blowup_invariance",
        "h^2 of the log tangent sheaf is unchanged by blow-ups at points of the divisor",
        "Flenner-Zaidenberg",
    ),
    Assumption(
        "residue_exact_sequence",
        "residue exact sequences peel log poles off one component at a time",
        "Esnault-Viehweg",
    ),
    Assumption(
        "pushforward_injection",
        "log forms downstairs inject into the pushed-forward log forms of the double cover",
        "projection formula for the unramified double covering",
    ),
)

ASSUMPTION_REGISTRY: dict[str, Assumption] = {
    a.key: a for a in SURGERY_ASSUMPTIONS + COVER_ASSUMPTIONS
}


def rational_blowdown(config: Configuration,
                      embeddings: Sequence[Sequence[str]]) -> SurgeryResult:
    """Blow down the embedded Wahl chains; exact invariant bookkeeping.

    Each embedding must come from find_chains on this configuration: the
    encoded chain must be Wahl-recognizable and negative definite, and the
    chains must be pairwise disjoint with no pairings between them.
    """
    pieces = []
    removed: list[str] = []
    seen: set[str] = set()
    for emb in embeddings:
        ids = tuple(emb)
        for cid in ids:
            if cid not in config.curves:
                raise SurgeryError(f"unknown curve id {cid!r}")
            if cid in seen:
                raise SurgeryError(f"chains overlap at {cid!r}")
        entries = tuple(-config.curves[cid].self_int for cid in ids)
        params = wahl_recognize(entries)
        if params is None:
            raise SurgeryError(f"embedded chain {list(entries)} is not a Wahl chain")
        g = gram(config, ids)
        if not is_negative_definite(g):
            raise SurgeryError(f"chain {list(ids)} is not negative definite")
        for other in removed:
            for cid in ids:
                if config.pairing(cid, other) != 0:
                    raise SurgeryError(
                        f"chains are not disjoint: {cid} pairs with {other}")
        pieces.append((params, len(ids)))
        removed.extend(ids)
        seen.update(ids)

    total = sum(l for _, l in pieces)
    before = config.ambient
    after = InvariantSet.from_base(
        e=before.e - total,
        sigma=before.sigma + total,
        pg=(before.b2_plus - 1) // 2,
        q=before.q,
    )
    if after.b2_plus != before.b2_plus:
        raise SurgeryError("b2+ changed under surgery; bookkeeping bug")
    return SurgeryResult(before, after, tuple(pieces), tuple(removed))


def smoothing_ledger(result: SurgeryResult) -> list[Assumption]:
    """The cited-but-not-computed assumptions attached to a surgery."""
    if not result.pieces:
        return []
    return list(SURGERY_ASSUMPTIONS)
