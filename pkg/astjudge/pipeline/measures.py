"""Similarity measures over one algorithm's refined mappings.

Statement pairs: NIT (mapped identical tokens), PM (parents mapped),
LLCS (longest order-preserving run of mapped token pairs).
Token pairs: TYPE (same token kind), STMT (inside a mapped statement pair),
VAL (same text).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from astjudge.pipeline.refine import RefinedMappings


@dataclass(frozen=True)
class MeasureVector:
    nit: int | None = None
    pm: bool | None = None
    llcs: int | None = None
    type_ok: bool | None = None
    stmt_ok: bool | None = None
    val_ok: bool | None = None

    def describe(self) -> str:
        parts = []
        for name, value in (("NIT", self.nit), ("PM", self.pm),
                            ("LLCS", self.llcs), ("TYPE", self.type_ok),
                            ("STMT", self.stmt_ok), ("VAL", self.val_ok)):
            if value is not None:
                parts.append(f"{name}={str(value).lower() if isinstance(value, bool) else value}")
        return " ".join(parts)


def nit(refined: RefinedMappings, src_stmt: int, dst_stmt: int,
        names_only: bool = False) -> int:
    """Mapped token pairs of the statement pair whose texts are equal."""
    count = 0
    for i, j in refined.tokens.within(src_stmt, dst_stmt):
        a, b = refined.src_tokens[i], refined.dst_tokens[j]
        if a.text != b.text:
            continue
        if names_only and not (a.kind.is_name and b.kind.is_name):
            continue
        count += 1
    return count


def pm(refined: RefinedMappings, src_stmt: int, dst_stmt: int) -> bool:
    """True iff the parents of the two statements are mapped to each other."""
    ps = refined.src.parent(src_stmt)
    pd = refined.dst.parent(dst_stmt)
    if ps is None or pd is None:
        return ps is None and pd is None
    return refined.nodes.dst_of(ps) == pd


def longest_chain(pairs: Sequence[tuple[int, int]]) -> int:
    """Longest subsequence strictly increasing in both coordinates."""
    ordered = sorted(pairs)
    best = [1] * len(ordered)
    for k, (si, di) in enumerate(ordered):
        for m in range(k):
            sj, dj = ordered[m]
            if sj < si and dj < di and best[m] + 1 > best[k]:
                best[k] = best[m] + 1
    return max(best, default=0)


def llcs(refined: RefinedMappings, src_stmt: int, dst_stmt: int) -> int:
    return longest_chain(refined.tokens.within(src_stmt, dst_stmt))


def statement_measures(refined: RefinedMappings, src_stmt: int, dst_stmt: int,
                       names_only: bool = False) -> MeasureVector:
    return MeasureVector(
        nit=nit(refined, src_stmt, dst_stmt, names_only),
        pm=pm(refined, src_stmt, dst_stmt),
        llcs=llcs(refined, src_stmt, dst_stmt),
    )


# ── token measures ──

def type_ok(refined: RefinedMappings, src_token: int, dst_token: int) -> bool:
    return refined.src_tokens[src_token].kind == refined.dst_tokens[dst_token].kind


def stmt_ok(refined: RefinedMappings, src_token: int, dst_token: int) -> bool:
    s = refined.src_tokens.statement_of(src_token)
    d = refined.dst_tokens.statement_of(dst_token)
    return s is not None and refined.statements.src_to_dst.get(s) == d


def val_ok(refined: RefinedMappings, src_token: int, dst_token: int) -> bool:
    return refined.src_tokens[src_token].text == refined.dst_tokens[dst_token].text


def token_measures(refined: RefinedMappings, src_token: int,
                   dst_token: int) -> MeasureVector:
    s = refined.src_tokens.statement_of(src_token)
    d = refined.dst_tokens.statement_of(dst_token)
    return MeasureVector(
        type_ok=type_ok(refined, src_token, dst_token),
        stmt_ok=stmt_ok(refined, src_token, dst_token),
        val_ok=val_ok(refined, src_token, dst_token),
        llcs=longest_chain(refined.tokens.within(s, d)),
    )
