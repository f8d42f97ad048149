"""Small deterministic CDCL solver: two watched literals, first-UIP clause
learning with backjumping, fixed ascending branching order and per-variable
preferred polarities.  No restarts and no activity heuristics, so identical
inputs always produce identical models."""

from __future__ import annotations

from typing import Optional


class CNF:
    """Clause database.  Variables are 1-based ints; a literal is +/-var.
    Each variable carries the polarity tried first when branching."""

    def __init__(self) -> None:
        self.num_vars = 0
        self.clauses: list[list[int]] = []
        self.prefer: list[bool] = [False]
        self.has_empty = False

    def new_var(self, prefer: bool = False) -> int:
        self.num_vars += 1
        self.prefer.append(prefer)
        return self.num_vars

    def add(self, lits) -> None:
        seen = set()
        clause = []
        for lit in lits:
            if -lit in seen:
                return  # tautology
            if lit not in seen:
                seen.add(lit)
                clause.append(lit)
        if not clause:
            self.has_empty = True
        else:
            self.clauses.append(clause)


def solve(cnf: CNF) -> Optional[list[bool]]:
    """Return a satisfying assignment indexed by variable (entry 0 unused),
    or None when unsatisfiable.  Variables the search never constrained get
    their preferred polarity."""
    if cnf.has_empty:
        return None
    n = cnf.num_vars
    val = [0] * (n + 1)      # 0 unassigned, +1 true, -1 false
    level = [0] * (n + 1)
    reason: list[Optional[int]] = [None] * (n + 1)
    trail: list[int] = []
    trail_lim: list[int] = []
    prop_head = 0
    clauses = [list(c) for c in cnf.clauses]
    watches: dict[int, list[int]] = {}

    def value(lit: int) -> int:
        v = val[abs(lit)]
        return v if lit > 0 else -v

    def current_level() -> int:
        return len(trail_lim)

    def enqueue(lit: int, why: Optional[int]) -> None:
        v = abs(lit)
        val[v] = 1 if lit > 0 else -1
        level[v] = current_level()
        reason[v] = why
        trail.append(lit)

    def attach(ci: int) -> None:
        clause = clauses[ci]
        watches.setdefault(clause[0], []).append(ci)
        watches.setdefault(clause[1], []).append(ci)

    for ci, clause in enumerate(clauses):
        if len(clause) == 1:
            lit = clause[0]
            v = value(lit)
            if v == -1:
                return None
            if v == 0:
                enqueue(lit, ci)
        else:
            attach(ci)

    def propagate() -> Optional[int]:
        nonlocal prop_head
        while prop_head < len(trail):
            lit = trail[prop_head]
            prop_head += 1
            neg = -lit
            ws = watches.get(neg)
            if not ws:
                continue
            i = j = 0
            conflict: Optional[int] = None
            while i < len(ws):
                ci = ws[i]
                i += 1
                clause = clauses[ci]
                if clause[0] == neg:
                    clause[0], clause[1] = clause[1], clause[0]
                first = clause[0]
                if value(first) == 1:
                    ws[j] = ci
                    j += 1
                    continue
                moved = False
                for k in range(2, len(clause)):
                    if value(clause[k]) != -1:
                        clause[1], clause[k] = clause[k], clause[1]
                        watches.setdefault(clause[1], []).append(ci)
                        moved = True
                        break
                if moved:
                    continue
                ws[j] = ci
                j += 1
                if value(first) == -1:
                    while i < len(ws):
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    conflict = ci
                    break
                enqueue(first, ci)
            del ws[j:]
            if conflict is not None:
                return conflict
        return None

    def analyze(confl: int) -> tuple[list[int], int]:
        """First-UIP learned clause and the level to jump back to."""
        learned: list[int] = []
        seen = [False] * (n + 1)
        counter = 0
        p = 0  # 0 means: take the whole conflict clause
        idx = len(trail) - 1
        clause = clauses[confl]
        while True:
            for q in clause:
                v = abs(q)
                if p != 0 and v == abs(p):
                    continue
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    if level[v] == current_level():
                        counter += 1
                    else:
                        learned.append(q)
            while not seen[abs(trail[idx])]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            seen[abs(p)] = False
            counter -= 1
            if counter == 0:
                break
            clause = clauses[reason[abs(p)]]
        learned.insert(0, -p)
        if len(learned) == 1:
            return learned, 0
        back = max(level[abs(q)] for q in learned[1:])
        # keep a literal of the backjump level in the second watch slot
        for k in range(1, len(learned)):
            if level[abs(learned[k])] == back:
                learned[1], learned[k] = learned[k], learned[1]
                break
        return learned, back

    def backjump(to_level: int) -> None:
        nonlocal prop_head
        mark = trail_lim[to_level]
        for lit in trail[mark:]:
            v = abs(lit)
            val[v] = 0
            reason[v] = None
        del trail[mark:]
        del trail_lim[to_level:]
        prop_head = len(trail)

    if propagate() is not None:
        return None

    cursor = 1
    while True:
        while cursor <= n and val[cursor] != 0:
            cursor += 1
        if cursor > n:
            return [False] + [val[v] == 1 if val[v] != 0 else cnf.prefer[v]
                              for v in range(1, n + 1)]
        var = cursor
        trail_lim.append(len(trail))
        enqueue(var if cnf.prefer[var] else -var, None)
        while True:
            confl = propagate()
            if confl is None:
                break
            if current_level() == 0:
                return None
            learned, back = analyze(confl)
            backjump(back)
            clauses.append(learned)
            ci = len(clauses) - 1
            if len(learned) > 1:
                attach(ci)
            enqueue(learned[0], ci)
            cursor = 1
