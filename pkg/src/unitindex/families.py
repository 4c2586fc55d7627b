"""The special families D_2, D_-2, the unit-index family SD, and censuses over them."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .arith import FactoredInteger, Segment, squarefree_segments
from .parallel import map_blocks, split_range
from .pell import hasse_unit_index

EXCLUSION_NOTE = "d = 2 and d = 3 are excluded from SD (torsion of Q(sqrt(d), i) exceeds 4)"
BLOCK_SIZE = 1 << 18


class FamilyTag(enum.Enum):
    D2 = "d2"
    DM2 = "dm2"
    SD = "sd"


@dataclass(frozen=True)
class CensusRecord:
    d: FactoredInteger
    memberships: frozenset[FamilyTag]
    residue_mod8: int

    def csv_row(self) -> list[int]:
        return [
            self.d.value,
            self.d.omega,
            self.residue_mod8,
            int(FamilyTag.D2 in self.memberships),
            int(FamilyTag.DM2 in self.memberships),
            int(FamilyTag.SD in self.memberships),
        ]


CSV_HEADER = ["d", "omega", "mod8", "in_d2", "in_dm2", "in_sd"]


@dataclass
class Census:
    X: int
    tags: frozenset[FamilyTag]
    residue_filter: tuple[int, int] | None
    counts: dict[FamilyTag, int]
    records: list[CensusRecord] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


def _special(n: FactoredInteger, allowed: tuple[int, ...]) -> bool:
    if n.value < 2 or n.value % 4 == 1 or not n.is_squarefree:
        return False
    return all(p == 2 or p % 8 in allowed for p in n.primes)


def in_D2(n: FactoredInteger) -> bool:
    """Squarefree, not 1 mod 4, and every odd prime factor is +-1 mod 8."""
    return _special(n, (1, 7))


def in_DM2(n: FactoredInteger) -> bool:
    """Squarefree, not 1 mod 4, and every odd prime factor is 1 or 3 mod 8."""
    return _special(n, (1, 3))


def in_SD(d: FactoredInteger, local_check: bool = True) -> bool:
    return hasse_unit_index(d.value, local_check) == 2


def _check_filter(residue_filter):
    if residue_filter is None:
        return
    r, m = residue_filter
    if m not in (4, 8) or not 0 <= r < m:
        raise ValueError(f"unsupported residue filter {r} mod {m}; modulus must be 4 or 8")


def _family_masks(seg: Segment) -> tuple[np.ndarray, np.ndarray]:
    # odd prime factors are nonzero entries other than 2
    f = seg.factors
    odd = (f != 0) & (f != 2)
    r8 = f % 8
    d2 = ~np.any(odd & ((r8 == 3) | (r8 == 5)), axis=1)
    dm2 = ~np.any(odd & ((r8 == 5) | (r8 == 7)), axis=1)
    base = (seg.values >= 2) & (seg.values % 4 != 1)
    return base & d2, base & dm2


def _census_block(args) -> tuple[dict[FamilyTag, int], list[CensusRecord]]:
    lo, hi, tags, residue_filter, keep = args
    counts = {t: 0 for t in tags}
    records = []
    for seg in squarefree_segments(lo, hi, hi - lo + 1):
        d2, dm2 = _family_masks(seg)
        # SD lies inside D2 | DM2, so nothing else needs a norm-equation solve
        mask = d2 | dm2
        if residue_filter is not None:
            r, m = residue_filter
            mask &= (seg.values % 2 == 0) & ((seg.values // 2) % m == r)
        for rec, i2, im2 in zip(seg.select(mask).records(), d2[mask].tolist(), dm2[mask].tolist()):
            members = set()
            if i2:
                members.add(FamilyTag.D2)
            if im2:
                members.add(FamilyTag.DM2)
            if (keep or FamilyTag.SD in tags) and rec.value > 3 and in_SD(rec):
                members.add(FamilyTag.SD)
            hit = members & tags
            if not hit:
                continue
            for t in hit:
                counts[t] += 1
            if keep:
                records.append(CensusRecord(rec, frozenset(members), rec.value % 8))
    return counts, records


def census(
    X: int,
    tags: Iterable[FamilyTag],
    residue_filter: tuple[int, int] | None = None,
    jobs: int = 1,
    keep_records: bool = True,
) -> Census:
    """Enumerate squarefree 2 <= n <= X lying in any of ``tags``.

    With ``residue_filter=(r, m)`` only even n = 2d with d = r (mod m) are
    kept, so ``census(X, {D2}, (3, 4))`` enumerates the restricted family
    counted by A(X; 3, 4). SD membership is decided for every kept record (and
    whenever SD is requested); d in {2, 3} never belongs to SD.
    """
    tags = frozenset(tags)
    if X < 2:
        raise ValueError(f"X must be at least 2, got {X}")
    if not tags:
        raise ValueError("at least one family tag is required")
    _check_filter(residue_filter)
    blocks = [(lo, hi, tags, residue_filter, keep_records) for lo, hi in split_range(2, X, BLOCK_SIZE)]
    counts = {t: 0 for t in tags}
    records: list[CensusRecord] = []
    for c, recs in map_blocks(_census_block, blocks, jobs):
        for t, v in c.items():
            counts[t] += v
        records.extend(recs)
    notes = [EXCLUSION_NOTE] if FamilyTag.SD in tags else []
    return Census(X, tags, residue_filter, counts, records, notes)


def a_members(X: int, jobs: int = 1) -> list[FactoredInteger]:
    """The odd d <= X/2 with d = 3 mod 4 and 2d in D_2, as factored integers."""
    recs = census(X, {FamilyTag.D2}, (3, 4), jobs=jobs).records
    return [FactoredInteger(r.d.value // 2, r.d.primes[1:], r.d.exponents[1:]) for r in recs]
