"""Judge: decides which of two algorithms maps an element inaccurately.

Flow (per algorithm pair A, B on one revision):
  1. find_inconsistent_statements: statements (either file side) that A and
     B map to different partners, or whose tokens they map differently
  2. Step 1, per algorithm: mapped non-block statements with NIT 0, mapped
     blocks whose parents are not mapped to each other, token pairs of
     different kinds. These verdicts need no competitor.
  3. Step 2, statements the two algorithms map differently: NIT, then PM
  4. Step 3, tokens of statements both map to the same partner: STMT, then
     VAL, then LLCS of the enclosing statement pair
  5. determine_inaccurate: the losing algorithm is only condemned when the
     winning pair also beats the loser's own pairing of the winning partner
     (e0-e1 against e4-e1); otherwise the element is Undecided

Every tie is Undecided, never Inaccurate.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from astjudge.config import JudgeConfig
from astjudge.pipeline.measures import (
    MeasureVector,
    nit,
    pm,
    statement_measures,
    token_measures,
)
from astjudge.pipeline.refine import RefinedMappings
from astjudge.tree.labels import StatementKind

log = logging.getLogger("astjudge.judge")

SIDES = ("src", "dst")


def other_side(side: str) -> str:
    return "dst" if side == "src" else "src"


# ═══════════════════════════════════════════════════════════════
#  TYPES
# ═══════════════════════════════════════════════════════════════

class Status(str, Enum):
    INACCURATE = "Inaccurate"
    UNDECIDED = "Undecided"


class Preference(str, Enum):
    A = "A"
    B = "B"
    TIE = "tie"

    def swapped(self) -> "Preference":
        if self is Preference.A:
            return Preference.B
        if self is Preference.B:
            return Preference.A
        return self


@dataclass(frozen=True, order=True)
class StatementRef:
    side: str
    id: int


@dataclass(frozen=True, order=True)
class ElementRef:
    granularity: str    # statement | token
    side: str
    id: int


@dataclass(frozen=True, order=True)
class Verdict:
    algorithm: str
    element: ElementRef
    statement: StatementRef
    status: Status
    decided_by: str
    evidence: str = ""
    against: str | None = None

    @property
    def inaccurate(self) -> bool:
        return self.status is Status.INACCURATE


@dataclass(frozen=True)
class TokenDisagreement:
    token: int
    choices: Mapping[str, int | None]


@dataclass(frozen=True)
class InconsistentStatement:
    statement: StatementRef
    stmt_choice: Mapping[str, int | None]
    token_disagreements: tuple[TokenDisagreement, ...] = ()

    @property
    def statement_differs(self) -> bool:
        return len(set(self.stmt_choice.values())) > 1


@dataclass(frozen=True)
class PairJudgement:
    a: str
    b: str
    inconsistent: tuple[InconsistentStatement, ...]
    verdicts: tuple[Verdict, ...] = field(default=())

    def flagged(self, algorithm: str) -> set[StatementRef]:
        return {v.statement for v in self.verdicts
                if v.algorithm == algorithm and v.inaccurate}

    def undecided(self, algorithm: str) -> list[Verdict]:
        return [v for v in self.verdicts
                if v.algorithm == algorithm and not v.inaccurate]


# ═══════════════════════════════════════════════════════════════
#  ELEMENT HELPERS
# ═══════════════════════════════════════════════════════════════

def _partner(refined: RefinedMappings, granularity: str, side: str,
             nid: int) -> int | None:
    if granularity == "statement":
        return refined.statements.partner(side, nid)
    return refined.tokens.partner(side, nid)


def statement_of(refined: RefinedMappings, element: ElementRef) -> StatementRef:
    """Statement an element is reported under (root for tokens outside any)."""
    if element.granularity == "statement":
        return StatementRef(element.side, element.id)
    stmt = refined.token_list(element.side).statement_of(element.id)
    if stmt is None:
        stmt = refined.ast(element.side).root
    return StatementRef(element.side, stmt)


def describe(refined: RefinedMappings, granularity: str, side: str,
             nid: int | None) -> str:
    if nid is None:
        return "unmapped"
    ast = refined.ast(side)
    if granularity == "statement":
        node = ast[nid]
        return f"{side}:{node.label}@L{ast.line_of(node.start)}"
    token = refined.token_list(side)[nid]
    return f"{side}:'{token.text}'@L{ast.line_of(token.start)}"


def _orient(side: str, e_from: int, e_to: int) -> tuple[int, int]:
    return (e_from, e_to) if side == "src" else (e_to, e_from)


def _measures(refined: RefinedMappings, granularity: str, side: str,
              e_from: int | None, e_to: int | None,
              names_only: bool) -> MeasureVector | None:
    if e_from is None or e_to is None:
        return None
    s, d = _orient(side, e_from, e_to)
    if granularity == "statement":
        return statement_measures(refined, s, d, names_only)
    return token_measures(refined, s, d)


# ═══════════════════════════════════════════════════════════════
#  COMPARATORS
# ═══════════════════════════════════════════════════════════════

def _rank_statements(a: MeasureVector | None,
                     b: MeasureVector | None) -> tuple[Preference, str]:
    if a is None and b is None:
        return Preference.TIE, "tie"
    if a is None:
        return Preference.B, "NIT"
    if b is None:
        return Preference.A, "NIT"
    if a.nit != b.nit:
        return (Preference.A if a.nit > b.nit else Preference.B), "NIT"
    if a.pm != b.pm:
        return (Preference.A if a.pm else Preference.B), "PM"
    return Preference.TIE, "tie"


def _rank_tokens(a: MeasureVector | None,
                 b: MeasureVector | None) -> tuple[Preference, str]:
    sa = bool(a and a.stmt_ok)
    sb = bool(b and b.stmt_ok)
    if sa != sb:
        return (Preference.A if sa else Preference.B), "STMT"
    if not sa:
        return Preference.TIE, "tie"
    if a.val_ok != b.val_ok:
        return (Preference.A if a.val_ok else Preference.B), "VAL"
    if a.llcs != b.llcs:
        return (Preference.A if a.llcs > b.llcs else Preference.B), "LLCS"
    return Preference.TIE, "tie"


def compare_statement_choices(measures_a: MeasureVector | None,
                              measures_b: MeasureVector | None) -> Preference:
    """Larger NIT wins, then mapped parents; None is an unmapped choice."""
    return _rank_statements(measures_a, measures_b)[0]


def compare_token_choices(measures_a: MeasureVector | None,
                          measures_b: MeasureVector | None) -> Preference:
    """STMT, then VAL, then LLCS; None is an unmapped choice."""
    return _rank_tokens(measures_a, measures_b)[0]


def _rank(granularity: str, a: MeasureVector | None,
          b: MeasureVector | None) -> tuple[Preference, str]:
    if granularity == "statement":
        return _rank_statements(a, b)
    return _rank_tokens(a, b)


# ═══════════════════════════════════════════════════════════════
#  STEP 1
# ═══════════════════════════════════════════════════════════════

def step1_rules(refined: RefinedMappings) -> list[Verdict]:
    """Verdicts that hold for a single algorithm, whatever it is compared to.

    NIT here always counts every token kind.
    """
    out: list[Verdict] = []
    src, dst = refined.src, refined.dst
    alg = refined.algorithm

    def emit(granularity: str, s: int, d: int, rule: str, evidence: str):
        for side, nid in (("src", s), ("dst", d)):
            element = ElementRef(granularity, side, nid)
            out.append(Verdict(alg, element, statement_of(refined, element),
                               Status.INACCURATE, rule, evidence))

    for s, d in sorted(refined.statements.pairs):
        pair_text = (f"{describe(refined, 'statement', 'src', s)} -> "
                     f"{describe(refined, 'statement', 'dst', d)}")
        if src.statement_kind(s) is StatementKind.BLOCK:
            if not pm(refined, s, d):
                emit("statement", s, d, "PM-block",
                     f"{alg} maps {pair_text}; parents not mapped to each other")
        elif nit(refined, s, d) == 0:
            emit("statement", s, d, "NIT",
                 f"{alg} maps {pair_text} with no identical tokens")

    for i, j in sorted(refined.tokens.pairs):
        a, b = refined.src_tokens[i], refined.dst_tokens[j]
        if a.kind != b.kind:
            emit("token", i, j, "TYPE",
                 f"{alg} maps {describe(refined, 'token', 'src', i)} ({a.kind}) -> "
                 f"{describe(refined, 'token', 'dst', j)} ({b.kind})")
    return out


# ═══════════════════════════════════════════════════════════════
#  INCONSISTENT STATEMENTS
# ═══════════════════════════════════════════════════════════════

def find_inconsistent_statements(a: RefinedMappings,
                                 b: RefinedMappings) -> list[InconsistentStatement]:
    """Statements of either side that a and b map differently, each listed once."""
    out: list[InconsistentStatement] = []
    for side in SIDES:
        ast = a.ast(side)
        tokens = a.token_list(side)
        for stmt in ast.statements():
            choice = {a.algorithm: a.statements.partner(side, stmt),
                      b.algorithm: b.statements.partner(side, stmt)}
            disagreements = []
            for t in tokens.in_statement(stmt):
                pa = a.tokens.partner(side, t)
                pb = b.tokens.partner(side, t)
                if pa != pb:
                    disagreements.append(TokenDisagreement(
                        t, {a.algorithm: pa, b.algorithm: pb}))
            if len(set(choice.values())) > 1 or disagreements:
                out.append(InconsistentStatement(StatementRef(side, stmt), choice,
                                                 tuple(disagreements)))
    return out


# ═══════════════════════════════════════════════════════════════
#  ACCURACY DETERMINATION
# ═══════════════════════════════════════════════════════════════

def _condemn(e0: ElementRef, winner: RefinedMappings, loser: RefinedMappings,
             e_win: int | None, e_lose: int | None, e_back: int | None,
             cfg: JudgeConfig,
             step1_condemned: Mapping[str, set[ElementRef]]) -> list[Verdict]:
    """Verdicts against `loser` on e0 when `winner`'s choice is better."""
    g, x = e0.granularity, e0.side
    y = other_side(x)
    names_only = cfg.nit_names_only
    m_win = _measures(winner, g, x, e0.id, e_win, names_only)
    m_lose = _measures(loser, g, x, e0.id, e_lose, names_only)
    pref, measure = _rank(g, m_win, m_lose)
    if pref is Preference.B:
        return []

    def undecided(reason: str, evidence: str) -> list[Verdict]:
        return [Verdict(loser.algorithm, e0, statement_of(loser, e0),
                        Status.UNDECIDED, reason, evidence, winner.algorithm)]

    win_text = (f"{winner.algorithm} maps {describe(winner, g, x, e0.id)} -> "
                f"{describe(winner, g, y, e_win)}"
                f" [{m_win.describe() if m_win else '-'}]")
    lose_text = (f"{loser.algorithm} maps it -> {describe(loser, g, y, e_lose)}"
                 f" [{m_lose.describe() if m_lose else '-'}]")
    if pref is Preference.TIE:
        return undecided("tie", f"{win_text}; {lose_text}")

    if (g == "statement" and e_lose is None
            and e0 in step1_condemned.get(winner.algorithm, set())):
        return undecided("step1-rule",
                         f"{lose_text}; {win_text} fails a step-1 rule")

    # second condition: e0-e_win must also beat the loser's pairing of e_win
    m_back = _measures(loser, g, x, e_back, e_win, names_only)
    second, _ = _rank(g, m_win, m_back)
    if second is not Preference.A:
        back = (f"{loser.algorithm} maps {describe(loser, g, x, e_back)} -> "
                f"{describe(loser, g, y, e_win)}"
                f" [{m_back.describe() if m_back else '-'}]")
        return undecided("sim-two-condition", f"{win_text}; {back}")

    evidence = f"{win_text} beats {lose_text} by {measure}"
    out = []
    for element in (e0, ElementRef(g, y, e_win)):
        out.append(Verdict(loser.algorithm, element, statement_of(loser, element),
                           Status.INACCURATE, measure, evidence, winner.algorithm))
    return out


def determine_inaccurate(e0: ElementRef, a0: RefinedMappings,
                         a1: RefinedMappings, cfg: JudgeConfig | None = None,
                         step1_condemned: Mapping[str, set[ElementRef]] | None = None,
                         ) -> list[Verdict]:
    """Judge element e0, which a0 maps to e1 and a1 maps to e2 (either may be None).

    a1 is Inaccurate on e0 and e1 iff Sim(e0, e1) beats Sim(e0, e2) and also
    beats Sim(e4, e1), e4 being a1's partner of e1. The same check runs the
    other way for a0. Ties and a failed second condition give Undecided.
    """
    cfg = cfg or JudgeConfig()
    step1_condemned = step1_condemned or {}
    g, x = e0.granularity, e0.side
    y = other_side(x)
    e1 = _partner(a0, g, x, e0.id)
    e2 = _partner(a1, g, x, e0.id)
    if e1 == e2:
        return []
    e3 = _partner(a0, g, y, e2) if e2 is not None else None
    e4 = _partner(a1, g, y, e1) if e1 is not None else None
    out = _condemn(e0, a0, a1, e1, e2, e4, cfg, step1_condemned)
    out += _condemn(e0, a1, a0, e2, e1, e3, cfg, step1_condemned)
    return out


def merge_verdicts(verdicts: Iterable[Verdict]) -> tuple[Verdict, ...]:
    """One verdict per (algorithm, element); Inaccurate outranks Undecided."""
    best: dict[tuple[str, ElementRef], Verdict] = {}
    for v in verdicts:
        key = (v.algorithm, v.element)
        cur = best.get(key)
        if cur is None or _verdict_rank(v) < _verdict_rank(cur):
            best[key] = v
    return tuple(sorted(best.values()))


def _verdict_rank(v: Verdict) -> tuple:
    return (0 if v.inaccurate else 1, v.decided_by, v.evidence, v.against or "")


def judge_pair(a: RefinedMappings, b: RefinedMappings,
               cfg: JudgeConfig | None = None) -> PairJudgement:
    cfg = cfg or JudgeConfig()
    inconsistent = find_inconsistent_statements(a, b)
    step1 = {r.algorithm: step1_rules(r) for r in (a, b)}
    condemned = {alg: {v.element for v in vs} for alg, vs in step1.items()}

    verdicts: list[Verdict] = [*step1[a.algorithm], *step1[b.algorithm]]
    for item in inconsistent:
        side, stmt = item.statement.side, item.statement.id
        if item.statement_differs:
            verdicts += determine_inaccurate(ElementRef("statement", side, stmt),
                                             a, b, cfg, condemned)
        elif item.stmt_choice[a.algorithm] is not None:
            for dis in item.token_disagreements:
                verdicts += determine_inaccurate(ElementRef("token", side, dis.token),
                                                 a, b, cfg, condemned)
    merged = merge_verdicts(verdicts)
    log.debug(f"[judge] {a.algorithm}-{b.algorithm}: {len(inconsistent)} inconsistent, "
              f"{sum(v.inaccurate for v in merged)} inaccurate")
    return PairJudgement(a.algorithm, b.algorithm, tuple(inconsistent), merged)


def union_verdicts(target: str,
                   pairwise_results: Iterable[PairJudgement]) -> set[StatementRef]:
    """Statements with at least one Inaccurate verdict for target in any pair."""
    out: set[StatementRef] = set()
    for result in pairwise_results:
        out |= result.flagged(target)
    return out
