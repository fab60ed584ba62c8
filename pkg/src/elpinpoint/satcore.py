"""A small CDCL solver with assumptions and assumption cores.

Literals are DIMACS-style non-zero ints.  Each assumption is a decision on
its own level, so a failed assumption is explained by walking the implication
graph back to the assumption decisions it depends on.

While every stored clause is Horn, ``solve_under`` skips search altogether:
counter-based forward chaining computes the least model of the positive
facts, the instance is unsatisfiable iff some all-negative clause (or
negative assumption) is violated by it, and the core is read off the
derivation.  This is linear in the clause set and never branches.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class Model:
    """Truth assignment given by its set of true variables."""

    __slots__ = ("true_vars", "var_count")

    def __init__(self, true_vars, var_count):
        self.true_vars = frozenset(true_vars)
        self.var_count = var_count

    def __getitem__(self, v: int) -> bool:
        return v in self.true_vars

    def __len__(self):
        return self.var_count

    def satisfies(self, clause) -> bool:
        t = self.true_vars
        return any((lit in t) if lit > 0 else (-lit not in t) for lit in clause)


@dataclass
class SolveResult:
    sat: bool
    model: Model = field(default=None, repr=False)
    core: list = field(default=None)

    def __bool__(self):
        return self.sat


class Solver:
    def __init__(self, var_count: int, horn_fast_path: bool = True):
        if var_count < 0:
            raise ValueError("var_count must be non-negative")
        n = var_count
        self.var_count = n
        self.clauses = []
        self.units = []
        self.ok = True
        self.horn = True
        self.horn_fast_path = horn_fast_path
        self.watches = [[] for _ in range(2 * n + 2)]
        self.value = [0] * (n + 1)
        self.level = [0] * (n + 1)
        self.reason = [None] * (n + 1)
        self.trail = []
        self.trail_lim = []
        self.qhead = 0
        self._occurs = set()
        self._order = None
        # Horn forward-chaining index, extended lazily
        self._h_indexed = 0
        self._h_count = []
        self._h_head = []
        self._h_occ = {}
        self.stats = {"solves": 0, "decisions": 0, "propagations": 0, "conflicts": 0, "learned": 0}

    @staticmethod
    def _code(lit: int) -> int:
        return 2 * lit if lit > 0 else -2 * lit + 1

    def _check(self, lit):
        if not isinstance(lit, int) or lit == 0 or abs(lit) > self.var_count:
            raise ValueError(f"literal {lit!r} out of range 1..{self.var_count}")

    def add_clause(self, lits) -> None:
        out = []
        seen = set()
        for lit in lits:
            self._check(lit)
            if -lit in seen:
                return  # tautology
            if lit not in seen:
                seen.add(lit)
                out.append(lit)
        self._store(out, learned=False)

    def _store(self, lits, learned):
        if sum(1 for lit in lits if lit > 0) > 1:
            self.horn = False
        if not lits:
            self.ok = False
            return None
        if len(lits) == 1:
            self.units.append(lits[0])
            if not learned:
                self._occurs.add(abs(lits[0]))
                self._order = None
            return None
        ci = len(self.clauses)
        self.clauses.append(lits)
        self.watches[self._code(lits[0])].append(ci)
        self.watches[self._code(lits[1])].append(ci)
        if not learned:
            self._occurs.update(abs(lit) for lit in lits)
            self._order = None
        return ci

    # assignment --------------------------------------------------------

    def _val(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def _enqueue(self, lit: int, reason):
        v = abs(lit)
        self.value[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _cancel_until(self, lvl: int):
        if len(self.trail_lim) <= lvl:
            return
        start = self.trail_lim[lvl]
        for lit in self.trail[start:]:
            v = abs(lit)
            self.value[v] = 0
            self.reason[v] = None
        del self.trail[start:]
        del self.trail_lim[lvl:]
        self.qhead = min(self.qhead, len(self.trail))

    def _reset(self):
        for lit in self.trail:
            v = abs(lit)
            self.value[v] = 0
            self.reason[v] = None
        self.trail.clear()
        self.trail_lim.clear()
        self.qhead = 0

    def _propagate(self):
        clauses, watches, value = self.clauses, self.watches, self.value
        trail = self.trail
        props = 0
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            props += 1
            false_lit = -p
            ws = watches[self._code(false_lit)]
            i = j = 0
            n = len(ws)
            while i < n:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                fv = value[abs(first)]
                if (fv if first > 0 else -fv) == 1:
                    ws[j] = ci
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    vk = value[abs(lk)]
                    if (vk if lk > 0 else -vk) != -1:
                        c[1], c[k] = lk, c[1]
                        watches[self._code(lk)].append(ci)
                        break
                else:
                    ws[j] = ci
                    j += 1
                    if (fv if first > 0 else -fv) == -1:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.stats["propagations"] += props
                        return ci
                    self._enqueue(first, ci)
            del ws[j:]
        self.stats["propagations"] += props
        return None

    # conflict analysis -------------------------------------------------

    def _analyze(self, confl):
        level, reason, trail = self.level, self.reason, self.trail
        current = len(self.trail_lim)
        seen = set()
        learnt = [0]
        counter = 0
        p = 0
        idx = len(trail) - 1
        clause = self.clauses[confl]
        while True:
            for q in clause if p == 0 else clause[1:]:
                v = abs(q)
                if v not in seen and level[v] > 0:
                    seen.add(v)
                    if level[v] >= current:
                        counter += 1
                    else:
                        learnt.append(q)
            while abs(trail[idx]) not in seen:
                idx -= 1
            p = trail[idx]
            idx -= 1
            counter -= 1
            if counter == 0:
                break
            clause = self.clauses[reason[abs(p)]]
        learnt[0] = -p
        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda k: level[abs(learnt[k])])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, level[abs(learnt[1])]

    def _analyze_final(self, failed: int) -> list:
        """Assumptions responsible for ``failed`` (an assumption) being false."""
        core = [failed]
        if not self.trail_lim:
            return core
        seen = {abs(failed)}
        for k in range(len(self.trail) - 1, self.trail_lim[0] - 1, -1):
            lit = self.trail[k]
            v = abs(lit)
            if v not in seen:
                continue
            r = self.reason[v]
            if r is None:
                core.append(lit)
            else:
                for q in self.clauses[r][1:]:
                    if self.level[abs(q)] > 0:
                        seen.add(abs(q))
            seen.discard(v)
        return core

    # search ------------------------------------------------------------

    def _decision_order(self):
        if self._order is None:
            self._order = sorted(self._occurs)
        return self._order

    def _model(self) -> Model:
        return Model((lit for lit in self.trail if lit > 0), self.var_count)

    def solve_under(self, assumptions=()) -> SolveResult:
        """Decide the clauses conjoined with ``assumptions``."""
        assumptions = list(assumptions)
        for lit in assumptions:
            self._check(lit)
        self.stats["solves"] += 1
        if self.horn and self.horn_fast_path:
            return self._solve_horn(assumptions)
        try:
            return self._search(assumptions)
        finally:
            self._reset()

    # Horn path ---------------------------------------------------------

    def _index_horn(self):
        for ci in range(self._h_indexed, len(self.clauses)):
            head = 0
            count = 0
            for lit in self.clauses[ci]:
                if lit > 0:
                    head = lit
                else:
                    count += 1
                    self._h_occ.setdefault(-lit, []).append(ci)
            self._h_count.append(count)
            self._h_head.append(head)
        self._h_indexed = len(self.clauses)

    def _solve_horn(self, assumptions) -> SolveResult:
        if not self.ok:
            return SolveResult(False, core=[])
        self._index_horn()
        reason = {}  # derived var -> clause index, "unit" or "assumption"
        goals = {}  # var -> negative literal that forbids it ("unit" from the db)
        queue = []
        for u in self.units:
            if u > 0:
                if u not in reason:
                    reason[u] = "unit"
                    queue.append(u)
            else:
                goals.setdefault(-u, "unit")
        for lit in assumptions:
            if lit > 0:
                if lit not in reason:
                    reason[lit] = "assumption"
                    queue.append(lit)
            elif -lit not in goals:
                goals[-lit] = lit
        counts = self._h_count[:]
        heads = self._h_head
        occ = self._h_occ
        clauses = self.clauses
        conflict = None
        k = 0
        while k < len(queue):
            v = queue[k]
            k += 1
            if v in goals:
                conflict = ([v], goals[v])
                break
            for ci in occ.get(v, ()):
                counts[ci] -= 1
                if counts[ci] == 0:
                    h = heads[ci]
                    if h == 0:
                        conflict = ([-lit for lit in clauses[ci]], "unit")
                        break
                    if h not in reason:
                        reason[h] = ci
                        queue.append(h)
            if conflict:
                break
        self.stats["propagations"] += k
        if conflict is None:
            return SolveResult(True, model=Model(reason, self.var_count))
        roots, goal = conflict
        core = [] if goal == "unit" else [goal]
        seen = set()
        stack = list(roots)
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            r = reason[v]
            if r == "assumption":
                core.append(v)
            elif r != "unit":
                stack.extend(-lit for lit in clauses[r] if lit < 0)
        return SolveResult(False, core=core)

    def _search(self, assumptions) -> SolveResult:
        if not self.ok:
            return SolveResult(False, core=[])
        for u in self.units:
            val = self._val(u)
            if val == -1:
                return SolveResult(False, core=[])
            if val == 0:
                self._enqueue(u, None)
        if self._propagate() is not None:
            return SolveResult(False, core=[])

        order = self._decision_order()
        scan = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                self.stats["conflicts"] += 1
                if not self.trail_lim:
                    return SolveResult(False, core=[])
                learnt, back = self._analyze(confl)
                self._cancel_until(back)
                scan = 0
                self.stats["learned"] += 1
                ci = self._store(learnt, learned=True)
                if ci is None:
                    self._enqueue(learnt[0], None)
                else:
                    self._enqueue(learnt[0], ci)
                continue

            dl = len(self.trail_lim)
            if dl < len(assumptions):
                p = assumptions[dl]
                val = self._val(p)
                if val == -1:
                    return SolveResult(False, core=self._analyze_final(p))
                self.trail_lim.append(len(self.trail))
                if val == 0:
                    self._enqueue(p, None)
                continue

            if self.horn:
                # open Horn clauses each keep an unassigned negative literal
                return SolveResult(True, model=self._model())
            while scan < len(order) and self.value[order[scan]] != 0:
                scan += 1
            if scan == len(order):
                return SolveResult(True, model=self._model())
            self.stats["decisions"] += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(-order[scan], None)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.var_count} {len(self.clauses) + len(self.units)}"]
        for u in self.units:
            lines.append(f"{u} 0")
        for c in self.clauses:
            lines.append(" ".join(map(str, c)) + " 0")
        return "\n".join(lines) + "\n"


def new_solver(var_count: int, clauses=(), **kwargs) -> Solver:
    s = Solver(var_count, **kwargs)
    for c in clauses:
        s.add_clause(c)
    return s
