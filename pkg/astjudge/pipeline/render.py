"""Plain-text views of a revision analysis (the `--format text` output).

Without a selector: flagged statements per algorithm with their verdicts.
With a selector "SIDE:LINE": the statement starting on that line, where each
algorithm maps it, and a token-by-token table with one column per algorithm.
"""
from __future__ import annotations

from astjudge.errors import ConfigError, RevisionError
from astjudge.pipeline.harness import RevisionAnalysis
from astjudge.pipeline.judge import SIDES, other_side

COLUMN = 28


def _clip(text: str, width: int) -> str:
    text = " ".join(text.split())
    return text if len(text) <= width else text[:width - 3] + "..."


def parse_selector(selector: str) -> tuple[str, int]:
    """"src:12" -> ("src", 12).

    Raises:
        ConfigError: if the selector is malformed.
    """
    side, _, line = selector.partition(":")
    side = side.strip().lower()
    if side not in SIDES or not line.strip().isdigit():
        raise ConfigError(f"statement selector must be SIDE:LINE, got '{selector}'")
    return side, int(line)


def find_statement(analysis: RevisionAnalysis, side: str, line: int) -> int:
    """Outermost statement starting on line (1-based).

    Raises:
        RevisionError: if no statement starts there.
    """
    ast = analysis.src if side == "src" else analysis.dst
    for nid in ast.preorder:
        if ast.is_statement(nid) and ast.line_of(ast[nid].start) == line:
            return nid
    raise RevisionError(f"no statement starts at {side}:{line}")


def _stmt_line(analysis: RevisionAnalysis, side: str, stmt: int) -> str:
    ast = analysis.src if side == "src" else analysis.dst
    return f"{side}:{ast.line_of(ast[stmt].start)}"


# ── summary ──

def render_summary(analysis: RevisionAnalysis) -> str:
    lines = [f"revision {analysis.revision.id}"]
    for j in sorted(analysis.judgements, key=lambda j: (j.a, j.b)):
        lines.append(f"  {j.a} vs {j.b}: {len(j.inconsistent)} inconsistent statements")
    for alg in sorted(analysis.algorithms):
        flagged = sorted(analysis.flagged(alg))
        lines.append("")
        lines.append(f"[{alg}] {len(flagged)} inaccurate statements")
        verdicts = analysis.verdicts(alg)
        for ref in flagged:
            ast = analysis.src if ref.side == "src" else analysis.dst
            lines.append(f"  {_stmt_line(analysis, ref.side, ref.id):<9} "
                         f"{ast.label(ref.id):<28} {_clip(ast.text(ref.id), 60)}")
            for v in verdicts:
                if v.statement == ref and v.inaccurate:
                    lines.append(f"      {v.element.granularity} {v.element.id} "
                                 f"{v.decided_by}: {v.evidence}")
        undecided = [v for v in verdicts if not v.inaccurate]
        if undecided:
            lines.append(f"  ({len(undecided)} undecided)")
    return "\n".join(lines) + "\n"


# ── single statement ──

def _token_cell(analysis: RevisionAnalysis, alg: str, side: str, token: int) -> str:
    refined = analysis.refined[alg]
    partner = refined.tokens.partner(side, token)
    if partner is None:
        return "-"
    other = other_side(side)
    tokens = refined.token_list(other)
    stmt = tokens.statement_of(partner)
    where = _stmt_line(analysis, other, stmt) if stmt is not None else other
    return f"{tokens[partner].text} ({where})"


def render_statement(analysis: RevisionAnalysis, side: str, stmt: int) -> str:
    ast = analysis.src if side == "src" else analysis.dst
    tokens = analysis.src_tokens if side == "src" else analysis.dst_tokens
    algorithms = sorted(analysis.algorithms)
    lines = [f"{_stmt_line(analysis, side, stmt)}  {ast.label(stmt)}",
             f"  {_clip(ast.text(stmt), 100)}", ""]

    other = other_side(side)
    other_ast = analysis.dst if side == "src" else analysis.src
    for alg in algorithms:
        partner = analysis.refined[alg].statements.partner(side, stmt)
        if partner is None:
            lines.append(f"  {alg:<6} -> unmapped")
        else:
            lines.append(f"  {alg:<6} -> {_stmt_line(analysis, other, partner)}  "
                         f"{_clip(other_ast.text(partner), 70)}")
    lines.append("")

    header = "token".ljust(COLUMN) + "".join(a.ljust(COLUMN) for a in algorithms)
    lines.append(header.rstrip())
    for t in tokens.in_statement(stmt):
        row = _clip(tokens[t].text, COLUMN - 2).ljust(COLUMN)
        row += "".join(_clip(_token_cell(analysis, a, side, t), COLUMN - 2).ljust(COLUMN)
                       for a in algorithms)
        lines.append(row.rstrip())
    return "\n".join(lines) + "\n"


def render_text(analysis: RevisionAnalysis, statement: str | None = None) -> str:
    """Summary view, or the side-by-side view of the statement at SIDE:LINE."""
    if statement is None:
        return render_summary(analysis)
    side, line = parse_selector(statement)
    return render_statement(analysis, side, find_statement(analysis, side, line))
