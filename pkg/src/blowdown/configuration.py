"""Curve configurations on surfaces and blow-up calculus.

A Configuration is a collection of curves with self-intersections, genera,
canonical degrees and node counts, a symmetric pairing table of intersection
numbers, ambient topological invariants, and the order of the ambient
fundamental group when finite cyclic.  Blow-ups transform all of this
exactly; each curve must satisfy the adjunction relation

    C.C + K.C = 2*(genus + nodes) - 2

throughout (arithmetic-genus form for curves whose only singularities are
ordinary double points).  Operations never mutate: they return new values.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

from .hjcf import Chain, as_chain


class BlowupError(ValueError):
    """A blow-up step is inconsistent with the configuration."""


class AdjunctionError(BlowupError):
    """A curve violates the adjunction relation."""


def pair_key(a: str, b: str) -> tuple[str, str]:
    if a == b:
        raise ValueError(f"a curve does not pair with itself ({a!r}); nodes live in node_count")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Curve:
    id: str
    self_int: int
    genus: int = 0
    k_degree: int = 0
    node_count: int = 0
    labels: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.genus < 0 or self.node_count < 0:
            raise ValueError(f"{self.id}: genus and node_count must be >= 0")

    def adjunction_defect(self) -> int:
        """Zero iff the adjunction ledger balances."""
        return self.self_int + self.k_degree - (2 * (self.genus + self.node_count) - 2)


@dataclass(frozen=True)
class InvariantSet:
    """(e, sigma, K2, p_g, q, b2, b2+, b2-) with the b_1 = 0 consistency relations."""

    e: int
    sigma: int
    k2: int
    pg: int
    q: int
    b2: int
    b2_plus: int
    b2_minus: int

    @classmethod
    def from_base(cls, e: int, sigma: int, pg: int, q: int = 0) -> "InvariantSet":
        b2 = e - 2
        if (b2 + sigma) % 2 != 0:
            raise ValueError(f"b2 + sigma must be even, got e={e}, sigma={sigma}")
        b2_plus = (b2 + sigma) // 2
        b2_minus = (b2 - sigma) // 2
        inv = cls(e=e, sigma=sigma, k2=2 * e + 3 * sigma, pg=pg, q=q,
                  b2=b2, b2_plus=b2_plus, b2_minus=b2_minus)
        inv.validate()
        return inv

    @classmethod
    def derive(cls, e: int, sigma: int) -> "InvariantSet":
        """Fill p_g from b2+ = 2 p_g + 1 (b_1 = 0, q = 0 scope)."""
        b2_plus = (e - 2 + sigma) // 2
        return cls.from_base(e, sigma, pg=(b2_plus - 1) // 2, q=0)

    def validate(self):
        if self.k2 != 2 * self.e + 3 * self.sigma:
            raise ValueError(f"K2 = 2e + 3sigma violated: {self}")
        if self.b2 != self.e - 2:
            raise ValueError(f"b2 = e - 2 violated: {self}")
        if self.b2_plus + self.b2_minus != self.b2 or self.b2_plus - self.b2_minus != self.sigma:
            raise ValueError(f"b2 split inconsistent: {self}")
        if self.b2_plus < 0 or self.b2_minus < 0:
            raise ValueError(f"negative b2 part: {self}")
        if self.pg < 0 or self.q < 0:
            raise ValueError(f"negative pg or q: {self}")
        if self.b2_plus != 2 * self.pg + 1:
            raise ValueError(f"b2+ = 2 p_g + 1 violated: {self}")

    def as_dict(self) -> dict:
        return {"e": self.e, "sigma": self.sigma, "K2": self.k2, "pg": self.pg,
                "q": self.q, "b2": self.b2, "b2_plus": self.b2_plus,
                "b2_minus": self.b2_minus}


@dataclass(frozen=True)
class PointSpec:
    """A blow-up centre: incident curves with local multiplicities.

    node_of names a curve blown up at one of its own nodes (local
    multiplicity 2 there).  pairwise_local overrides the local intersection
    number consumed between two incident curves at this point (default is
    the product of their local multiplicities).  new_id names the
    exceptional curve introduced by this step.
    """

    new_id: str
    incidences: tuple[tuple[str, int], ...] = ()
    node_of: Optional[str] = None
    pairwise_local: tuple[tuple[tuple[str, str], int], ...] = ()

    def __post_init__(self):
        seen = set()
        for cid, m in self.incidences:
            if m < 1:
                raise ValueError(f"local multiplicity must be >= 1, got {m} on {cid}")
            if cid in seen:
                raise ValueError(f"curve {cid!r} listed twice in one point")
            seen.add(cid)
        if self.node_of is not None and self.node_of in seen:
            raise ValueError(f"{self.node_of!r} is both node_of and an incidence")

    def multiplicity(self, cid: str) -> int:
        if cid == self.node_of:
            return 2
        for c, m in self.incidences:
            if c == cid:
                return m
        return 0

    def touched(self) -> tuple[str, ...]:
        ids = [cid for cid, _ in self.incidences]
        if self.node_of is not None:
            ids.append(self.node_of)
        return tuple(ids)


@dataclass(frozen=True)
class Configuration:
    curves: dict[str, Curve]
    pairings: dict[tuple[str, str], int]
    ambient: InvariantSet
    pi1_order: Optional[int] = None  # None = unknown

    def pairing(self, a: str, b: str) -> int:
        if a == b:
            raise ValueError("self-pairing is undefined; nodes live in node_count")
        return self.pairings.get(pair_key(a, b), 0)

    def neighbours(self, cid: str) -> dict[str, int]:
        out = {}
        for (a, b), v in self.pairings.items():
            if v == 0:
                continue
            if a == cid:
                out[b] = v
            elif b == cid:
                out[a] = v
        return out

    def with_pairing(self, a: str, b: str, value: int) -> "Configuration":
        if a not in self.curves or b not in self.curves:
            raise KeyError(f"unknown curve in pairing {a}.{b}")
        if value < 0:
            raise ValueError(f"pairing {a}.{b} must be >= 0")
        pairings = dict(self.pairings)
        key = pair_key(a, b)
        if value == 0:
            pairings.pop(key, None)
        else:
            pairings[key] = value
        return replace(self, pairings=pairings)

    def with_curve(self, curve: Curve) -> "Configuration":
        curves = dict(self.curves)
        curves[curve.id] = curve
        return replace(self, curves=curves)


# --- presets --------------------------------------------------------------

ENRIQUES_I9_IDS = tuple(f"D{i}" for i in range(1, 10))
K3_I9A_IDS = tuple(f"Da{i}" for i in range(1, 10))
K3_I9B_IDS = tuple(f"Db{i}" for i in range(1, 10))


def _cycle(config_pairings: dict, ids: Sequence[str]):
    n = len(ids)
    for i in range(n):
        config_pairings[pair_key(ids[i], ids[(i + 1) % n])] = 1


def preset(name: str) -> Configuration:
    """Named starting surfaces.

    enriques_kondo: Enriques surface with an I9 fiber (9-cycle of (-2)-spheres
    D1..D9), a nodal fiber F, and bisections S1, S2.  Which I9 components and
    which points of F the bisections pass through is not determined here;
    scenarios declare those pairings explicitly.

    k3_kondo_cover: its K3 double cover, with two I9 fibers (Da*, Db*), two
    nodal fibers F1, F2, and four sections T1..T4.  Section incidences are
    likewise scenario-declared.
    """
    if name == "enriques_kondo":
        curves = {}
        for cid in ENRIQUES_I9_IDS:
            curves[cid] = Curve(cid, self_int=-2, labels=frozenset({"fiber-component"}))
        curves["F"] = Curve("F", self_int=0, node_count=1, labels=frozenset({"nodal-fiber"}))
        curves["S1"] = Curve("S1", self_int=-2, labels=frozenset({"bisection"}))
        curves["S2"] = Curve("S2", self_int=-2, labels=frozenset({"bisection"}))
        pairings: dict = {}
        _cycle(pairings, ENRIQUES_I9_IDS)
        ambient = InvariantSet.from_base(e=12, sigma=-8, pg=0, q=0)
        return Configuration(curves, pairings, ambient, pi1_order=2)
    if name == "k3_kondo_cover":
        curves = {}
        for cid in K3_I9A_IDS + K3_I9B_IDS:
            curves[cid] = Curve(cid, self_int=-2, labels=frozenset({"fiber-component"}))
        curves["F1"] = Curve("F1", self_int=0, node_count=1, labels=frozenset({"nodal-fiber"}))
        curves["F2"] = Curve("F2", self_int=0, node_count=1, labels=frozenset({"nodal-fiber"}))
        for cid in ("T1", "T2", "T3", "T4"):
            curves[cid] = Curve(cid, self_int=-2, labels=frozenset({"section"}))
        pairings = {}
        _cycle(pairings, K3_I9A_IDS)
        _cycle(pairings, K3_I9B_IDS)
        ambient = InvariantSet.from_base(e=24, sigma=-16, pg=1, q=0)
        return Configuration(curves, pairings, ambient, pi1_order=1)
    raise KeyError(f"unknown preset {name!r}")


# --- blow-up calculus -----------------------------------------------------

def blow_up(config: Configuration, point: PointSpec) -> Configuration:
    """Blow up one point; exact transform of curves, pairings, and invariants."""
    if point.new_id in config.curves:
        raise BlowupError(f"curve id {point.new_id!r} already exists")
    for cid in point.touched():
        if cid not in config.curves:
            raise BlowupError(f"unknown curve id {cid!r}")
    if point.node_of is not None and config.curves[point.node_of].node_count < 1:
        raise BlowupError(f"{point.node_of!r} has no node to blow up")

    curves = dict(config.curves)
    pairings = dict(config.pairings)

    # strict transforms
    for cid in point.touched():
        m = point.multiplicity(cid)
        old = curves[cid]
        node_fix = 1 if cid == point.node_of else 0
        curves[cid] = replace(
            old,
            self_int=old.self_int - m * m,
            k_degree=old.k_degree + m,
            node_count=old.node_count - node_fix,
        )
        defect = curves[cid].adjunction_defect()
        if defect != 0:
            raise AdjunctionError(
                f"blow-up at {point.new_id}: curve {cid!r} leaves the adjunction "
                f"ledger unbalanced (defect {defect}); a multiplicity-{m} point "
                "needs a matching singularity"
            )

    # exceptional curve
    exceptional = Curve(point.new_id, self_int=-1, k_degree=-1,
                        labels=frozenset({"exceptional"}))
    curves[point.new_id] = exceptional

    # pairings with the new exceptional curve
    for cid in point.touched():
        m = point.multiplicity(cid)
        pairings[pair_key(cid, point.new_id)] = m

    # local intersections consumed between incident curves
    touched = point.touched()
    overrides = {pair_key(a, b): v for (a, b), v in point.pairwise_local}
    for i in range(len(touched)):
        for j in range(i + 1, len(touched)):
            a, b = touched[i], touched[j]
            key = pair_key(a, b)
            consumed = overrides.get(key, point.multiplicity(a) * point.multiplicity(b))
            remaining = pairings.get(key, 0) - consumed
            if remaining < 0:
                raise BlowupError(
                    f"blow-up at {point.new_id}: consuming {consumed} from pairing "
                    f"{a}.{b} = {pairings.get(key, 0)} would go negative"
                )
            if remaining == 0:
                pairings.pop(key, None)
            else:
                pairings[key] = remaining
    for key in overrides:
        if key[0] not in touched or key[1] not in touched:
            raise BlowupError(f"pairwise override {key} names a curve not at the point")

    ambient = InvariantSet.from_base(
        e=config.ambient.e + 1,
        sigma=config.ambient.sigma - 1,
        pg=config.ambient.pg,
        q=config.ambient.q,
    )
    return Configuration(curves, pairings, ambient, config.pi1_order)


def run_program(config: Configuration, steps: Iterable[PointSpec]) -> Configuration:
    """Fold blow_up over a program; errors are annotated with the step index."""
    current = config
    for i, step in enumerate(steps):
        try:
            current = blow_up(current, step)
        except BlowupError as err:
            raise BlowupError(f"step {i + 1} ({step.new_id}): {err}") from err
    return current


def adjunction_audit(config: Configuration) -> list[str]:
    """All adjunction/consistency violations; empty means clean."""
    problems = []
    for cid in sorted(config.curves):
        defect = config.curves[cid].adjunction_defect()
        if defect != 0:
            problems.append(f"curve {cid}: adjunction defect {defect}")
    for (a, b), v in sorted(config.pairings.items()):
        if v < 0:
            problems.append(f"pairing {a}.{b} negative ({v})")
        if a not in config.curves or b not in config.curves:
            problems.append(f"pairing {a}.{b} references a missing curve")
    try:
        config.ambient.validate()
    except ValueError as err:
        problems.append(f"ambient invariants: {err}")
    return problems


# --- chain search ----------------------------------------------------------

@dataclass(frozen=True)
class ChainSearch:
    """Result of find_chains: embeddings on success, the first bad target on failure."""

    found: bool
    embeddings: tuple[tuple[str, ...], ...] = ()
    failed_target: Optional[int] = None

    def __bool__(self) -> bool:
        return self.found


def _chain_candidates(config: Configuration, b: int) -> list[str]:
    out = []
    for cid in sorted(config.curves):
        cu = config.curves[cid]
        if cu.self_int == -b and cu.genus == 0 and cu.node_count == 0:
            out.append(cid)
    return out


def find_chains(config: Configuration,
                targets: Sequence["Chain | Sequence[int]"]) -> ChainSearch:
    """Find pairwise-disjoint embeddings of the target chains.

    An embedding of [b_1..b_l] is an ordered list of distinct curves with
    self-intersections -b_i, genus 0, no nodes, consecutive pairings exactly
    1, all other pairings within the chain 0, and no curve or positive
    pairing shared with any other embedded chain.  Deterministic: candidates
    are tried in sorted id order.
    """
    if not targets:
        raise ValueError("targets must be nonempty")
    chains = [as_chain(t) for t in targets]
    used: set[str] = set()
    embeddings: list[tuple[str, ...]] = []

    def blocked(cid: str) -> bool:
        # disjointness across chains: no shared curves, no pairings between chains
        if cid in used:
            return True
        for prev in embeddings:
            for other in prev:
                if config.pairing(cid, other) != 0:
                    return True
        return False

    def extend(target: Chain, partial: list[str]) -> bool:
        pos = len(partial)
        if pos == len(target):
            return True
        for cid in _chain_candidates(config, target[pos]):
            if blocked(cid) or cid in partial:
                continue
            if pos > 0 and config.pairing(partial[-1], cid) != 1:
                continue
            if any(config.pairing(earlier, cid) != 0 for earlier in partial[:-1]):
                continue
            partial.append(cid)
            if extend(target, partial):
                return True
            partial.pop()
        return False

    def solve(i: int) -> Optional[int]:
        if i == len(chains):
            return None
        partial: list[str] = []
        if not extend(chains[i], partial):
            return i
        embeddings.append(tuple(partial))
        used.update(partial)
        failed = solve(i + 1)
        if failed is None:
            return None
        # backtrack across chains: try other embeddings of chain i
        used.difference_update(partial)
        embeddings.pop()
        return _solve_backtracking(i, failed)

    def _solve_backtracking(i: int, first_failed: int) -> Optional[int]:
        # exhaustive joint backtracking; keeps the first failure index stable
        all_embs = _enumerate_embeddings(chains[i])
        for emb in all_embs:
            embeddings.append(emb)
            used.update(emb)
            failed = solve(i + 1)
            if failed is None:
                return None
            used.difference_update(emb)
            embeddings.pop()
        return first_failed

    def _enumerate_embeddings(target: Chain) -> list[tuple[str, ...]]:
        results: list[tuple[str, ...]] = []

        def rec(partial: list[str]):
            pos = len(partial)
            if pos == len(target):
                results.append(tuple(partial))
                return
            for cid in _chain_candidates(config, target[pos]):
                if blocked(cid) or cid in partial:
                    continue
                if pos > 0 and config.pairing(partial[-1], cid) != 1:
                    continue
                if any(config.pairing(earlier, cid) != 0 for earlier in partial[:-1]):
                    continue
                partial.append(cid)
                rec(partial)
                partial.pop()

        rec([])
        return results

    failed = solve(0)
    if failed is None:
        return ChainSearch(True, tuple(embeddings))
    return ChainSearch(False, (), failed)


# --- randomized programs (property-test support) ---------------------------

def random_program(rng: random.Random, max_steps: int = 6) -> tuple[Configuration, list[PointSpec]]:
    """A random valid blow-up program on the Enriques preset.

    Used by property tests: steps blow up nothing, single curves, transverse
    intersections, or the node of F, whichever is available.
    """
    config = preset("enriques_kondo")
    steps: list[PointSpec] = []
    current = config
    for i in range(rng.randint(0, max_steps)):
        new_id = f"R{i + 1}"
        choices = ["free"]
        positive = [(a, b) for (a, b), v in current.pairings.items() if v >= 1]
        if positive:
            choices.append("intersection")
        if any(c.node_count > 0 for c in current.curves.values()):
            choices.append("node")
        choices.append("on-curve")
        kind = rng.choice(choices)
        if kind == "free":
            step = PointSpec(new_id=new_id)
        elif kind == "on-curve":
            cid = rng.choice(sorted(current.curves))
            step = PointSpec(new_id=new_id, incidences=((cid, 1),))
        elif kind == "node":
            nodal = sorted(c.id for c in current.curves.values() if c.node_count > 0)
            step = PointSpec(new_id=new_id, node_of=rng.choice(nodal))
        else:
            a, b = rng.choice(sorted(positive))
            step = PointSpec(new_id=new_id, incidences=((a, 1), (b, 1)))
        steps.append(step)
        current = blow_up(current, step)
    return config, steps
