"""Finite quotients of triangle rotation groups.

Coset tables are stored as permutation actions: ``action[g][x]`` is the image
of coset ``x`` under generator ``g``.  A normal subgroup of index ``i``
corresponds to a *regular* action on ``i`` cosets (the Cayley action of the
quotient group), which is what the bounded search below enumerates.

Words over the generators appear in two encodings:

* public: tuples of signed 1-based indices, ``(1, -2)`` meaning ``g0 * g1^-1``;
* internal: tuples of column indices, column ``2*i`` for generator ``i`` and
  ``2*i + 1`` for its inverse.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .errors import CosetLimitExceeded, SearchBudgetExceeded

Word = tuple[int, ...]


@dataclass(frozen=True)
class Presentation:
    generators: list[str]
    relators: list[Word]

    def __post_init__(self):
        ng = len(self.generators)
        for rel in self.relators:
            if not rel:
                raise ValueError("empty relator")
            for s in rel:
                if s == 0 or abs(s) > ng:
                    raise ValueError(f"relator letter {s} out of range")


def triangle_rotation_presentation(p: int, q: int = 3) -> Presentation:
    """Rotation subgroup of the (p, q, 2) triangle group.

    Generators a, b, g of orders 2, q, p with a*b*g = e (a rotates about an
    edge midpoint, b about a vertex, g about a face center).
    """
    return Presentation(
        generators=["a", "b", "g"],
        relators=[(1, 1), (2,) * q, (3,) * p, (1, 2, 3)],
    )


def _to_cols(word: Word) -> tuple[int, ...]:
    return tuple(2 * (s - 1) if s > 0 else 2 * (-s - 1) + 1 for s in word)


def _from_cols(cols: tuple[int, ...]) -> Word:
    return tuple(c // 2 + 1 if c % 2 == 0 else -(c // 2) - 1 for c in cols)


def _inv_cols(cols: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(c ^ 1 for c in reversed(cols))


def _free_reduce(cols: tuple[int, ...]) -> tuple[int, ...]:
    out: list[int] = []
    for c in cols:
        if out and out[-1] == (c ^ 1):
            out.pop()
        else:
            out.append(c)
    return tuple(out)


@dataclass
class CosetTable:
    """Permutation action of group generators on cosets."""

    index: int
    gen_names: list[str]
    action: list[list[int]]  # per generator, a permutation of range(index)
    p: int | None = None  # face order for triangle-group tables (metadata)

    def apply_word(self, x: int, word: Word) -> int:
        for s in word:
            g = abs(s) - 1
            x = self.action[g][x] if s > 0 else self._inverse(g)[x]
        return x

    def _inverse(self, g: int) -> list[int]:
        inv = [0] * self.index
        for i, j in enumerate(self.action[g]):
            inv[j] = i
        return inv

    def generator_orders(self) -> list[int]:
        return [_perm_order(perm) for perm in self.action]

    def word_order(self, word: Word) -> int:
        perm = [self.apply_word(x, word) for x in range(self.index)]
        return _perm_order(perm)

    def is_identity_word(self, word: Word) -> bool:
        return all(self.apply_word(x, word) == x for x in range(self.index))

    def is_transitive(self) -> bool:
        seen = {0}
        frontier = [0]
        invs = [self._inverse(g) for g in range(len(self.action))]
        while frontier:
            x = frontier.pop()
            for g in range(len(self.action)):
                for y in (self.action[g][x], invs[g][x]):
                    if y not in seen:
                        seen.add(y)
                        frontier.append(y)
        return len(seen) == self.index

    def canonical(self) -> "CosetTable":
        """Relabel cosets breadth-first from 0 (generators, then inverses)."""
        ngen = len(self.action)
        invs = [self._inverse(g) for g in range(ngen)]
        cols = self.action + invs
        relabel = {0: 0}
        order = [0]
        head = 0
        while head < len(order):
            x = order[head]
            head += 1
            for col in cols:
                y = col[x]
                if y not in relabel:
                    relabel[y] = len(order)
                    order.append(y)
        if len(order) != self.index:
            raise ValueError("table not transitive; cannot canonicalize")
        new_action = [
            [relabel[col[x]] for x in order] for col in self.action
        ]
        return CosetTable(self.index, list(self.gen_names), new_action, self.p)

    def serialize(self) -> str:
        head = f"index={self.index} p={self.p if self.p is not None else 0}"
        lines = [head]
        for name, perm in zip(self.gen_names, self.action):
            lines.append(f"gen={name} perm={','.join(map(str, perm))}")
        return "\n".join(lines) + "\n"

    @classmethod
    def deserialize(cls, text: str) -> "CosetTable":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = dict(kv.split("=") for kv in lines[0].split())
        index = int(head["index"])
        p = int(head.get("p", 0)) or None
        names, action = [], []
        for ln in lines[1:]:
            fields = dict(kv.split("=") for kv in ln.split())
            names.append(fields["gen"])
            perm = [int(t) for t in fields["perm"].split(",")]
            if sorted(perm) != list(range(index)):
                raise ValueError(f"perm for {fields['gen']} is not a bijection")
            action.append(perm)
        return cls(index, names, action, p)

    def hash_suffix(self) -> str:
        return hashlib.sha256(self.serialize().encode()).hexdigest()[:8]


def _perm_order(perm: list[int]) -> int:
    n = len(perm)
    seen = [False] * n
    order = 1
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            length += 1
        order = _lcm(order, length)
    return order


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


@dataclass
class QuotientRecord:
    coset_table: CosetTable
    p: int
    orders: tuple[int, int, int]
    torsion_free: bool
    genus: int | None

    @property
    def index(self) -> int:
        return self.coset_table.index

    @property
    def vertex_count(self) -> int:
        return self.index // self.orders[1] if self.torsion_free else 0

    def name(self, disambiguate: bool = False) -> str:
        base = f"H{self.index // 3}"
        if disambiguate:
            base += f"-{self.coset_table.hash_suffix()}"
        return base


# ---------------------------------------------------------------------------
# Todd-Coxeter enumeration (HLT with coincidences), trivial subgroup.
# ---------------------------------------------------------------------------

def todd_coxeter(
    pres: Presentation,
    extra_relators: list[Word] | None = None,
    max_cosets: int = 100_000,
) -> CosetTable:
    """Enumerate cosets of the trivial subgroup in the quotient of ``pres`` by
    the normal closure of ``extra_relators``.

    The returned table is the regular action of the quotient group, in
    canonical (breadth-first) labeling.  Raises CosetLimitExceeded if the
    enumeration needs more than ``max_cosets`` simultaneously live cosets.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be >= 1")
    ngen = len(pres.generators)
    ncols = 2 * ngen
    relators = [_to_cols(r) for r in pres.relators]
    relators += [_to_cols(r) for r in (extra_relators or [])]
    relators = [r for r in (_free_reduce(r) for r in relators) if r]

    table: list[list[int]] = [[-1] * ncols]
    rep: list[int] = [0]  # union-find parents

    def find(x: int) -> int:
        while rep[x] != x:
            rep[x] = rep[rep[x]]
            x = rep[x]
        return x

    coincidences: list[tuple[int, int]] = []

    def set_entry(x: int, c: int, y: int) -> None:
        cur = table[x][c]
        if cur == -1:
            table[x][c] = y
            cur2 = table[y][c ^ 1]
            if cur2 == -1:
                table[y][c ^ 1] = x
            elif find(cur2) != find(x):
                coincidences.append((cur2, x))
        elif find(cur) != find(y):
            coincidences.append((cur, y))

    def process_coincidences() -> None:
        # Holt-style: merge classes, replay the dead coset's row onto the
        # surviving representative, queueing any induced coincidences.
        while coincidences:
            a, b = coincidences.pop()
            a, b = find(a), find(b)
            if a == b:
                continue
            if a > b:
                a, b = b, a
            rep[b] = a
            for c in range(ncols):
                y = table[b][c]
                if y == -1:
                    continue
                table[b][c] = -1
                if table[y][c ^ 1] == b:
                    table[y][c ^ 1] = -1
                mu, nu = find(b), find(y)
                z = table[mu][c]
                if z == -1:
                    table[mu][c] = nu
                elif find(z) != nu:
                    coincidences.append((z, nu))
                z = table[nu][c ^ 1]
                if z == -1:
                    table[nu][c ^ 1] = mu
                elif find(z) != mu:
                    coincidences.append((z, mu))

    def define(x: int, c: int) -> int:
        if len(table) >= max_cosets:
            raise CosetLimitExceeded(
                f"enumeration exceeded {max_cosets} cosets"
            )
        y = len(table)
        table.append([-1] * ncols)
        rep.append(y)
        table[x][c] = y
        table[y][c ^ 1] = x
        return y

    def scan_and_fill(x: int, word: tuple[int, ...]) -> None:
        # reads chase union-find representatives so merged cosets never leak
        f, i = x, 0
        L = len(word)
        while True:
            while i < L:
                nxt = table[f][word[i]]
                if nxt == -1:
                    break
                nxt = find(nxt)
                table[f][word[i]] = nxt
                f, i = nxt, i + 1
            if i == L:
                if f != x:
                    coincidences.append((f, x))
                return
            b, j = x, L
            while j > i + 1:
                prv = table[b][word[j - 1] ^ 1]
                if prv == -1:
                    break
                prv = find(prv)
                table[b][word[j - 1] ^ 1] = prv
                b, j = prv, j - 1
            if j == i + 1:
                set_entry(f, word[i], b)
                return
            # fill one entry and keep scanning
            define(f, word[i])

    def snapshot():
        return sum(
            row[c] != -1
            for i, row in enumerate(table)
            if find(i) == i
            for c in range(ncols)
        ), sum(find(i) == i for i in range(len(table)))

    while True:
        before = snapshot()
        x = 0
        while x < len(table):
            if find(x) != x:
                x += 1
                continue
            for word in relators:
                if find(x) != x:
                    break
                scan_and_fill(x, word)
                process_coincidences()
            if find(x) == x:
                for c in range(ncols):
                    if table[x][c] == -1:
                        define(x, c)
            x += 1
        # coincidences can leave holes in already-scanned rows; rescan until
        # the table closes
        if not any(
            table[i][c] == -1
            for i in range(len(table))
            if find(i) == i
            for c in range(ncols)
        ):
            break
        if snapshot() == before:
            raise CosetLimitExceeded(
                "table did not close (generator missing from all relators?)"
            )

    live = sorted(i for i in range(len(table)) if find(i) == i)
    relabel = {old: new for new, old in enumerate(live)}
    action = []
    for g in range(ngen):
        c = 2 * g
        perm = []
        for old in live:
            y = table[old][c]
            if y == -1:
                # complete the action lazily: scan forced all relator closures,
                # but a generator column can stay open only for free factors
                raise CosetLimitExceeded("table did not close (infinite quotient?)")
            perm.append(relabel[find(y)])
        action.append(perm)
    p_meta = _triangle_p(pres)
    out = CosetTable(len(live), list(pres.generators), action, p_meta)
    return out.canonical()


def _triangle_p(pres: Presentation) -> int | None:
    """Face order when ``pres`` looks like a triangle rotation presentation."""
    if pres.generators[:3] == ["a", "b", "g"]:
        for rel in pres.relators:
            if len(set(rel)) == 1 and rel[0] == 3:
                return len(rel)
    return None


# ---------------------------------------------------------------------------
# Bounded normal-subgroup search.
# ---------------------------------------------------------------------------

class _NormalSearch:
    """Backtracking enumeration of regular coset tables.

    Builds partial tables entry by entry in row-major order.  Every closed
    Schreier word at coset 0 lies in the candidate normal subgroup and is
    forced to act trivially on *all* cosets (normal-closure forcing); relators
    are forced the same way.  Each completed table is the Cayley action of a
    quotient group, i.e. a normal subgroup of index equal to the table size.
    """

    def __init__(
        self,
        pres: Presentation,
        max_index: int,
        node_budget: int,
        fixed_point_free: list[tuple[int, ...]] | None = None,
    ):
        self.ngen = len(pres.generators)
        self.ncols = 2 * self.ngen
        rels = [_free_reduce(_to_cols(r)) for r in pres.relators]
        self.base_words = [r for r in rels if r]
        self.max_index = max_index
        self.node_budget = node_budget
        self.nodes = 0
        # words that may not fix any coset (exact-order forcing)
        self.forbidden = fixed_point_free or []
        self.results: list[CosetTable] = []
        self.gen_names = list(pres.generators)
        self.p_meta = _triangle_p(pres)

    def run(self) -> bool:
        """Depth-first search; returns False if the budget ran out."""
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.rep_words: list[tuple[int, ...]] = [()]
        self.words: list[tuple[int, ...]] = list(self.base_words)
        self.word_set: set[tuple[int, ...]] = set(self.base_words)
        return self._extend()

    # -- propagation --------------------------------------------------------

    def _scan(self, x: int, word: tuple[int, ...], trail: list) -> int:
        """Scan ``x . word = x``; returns -1 on contradiction, 1 on deduction,
        0 otherwise."""
        table = self.table
        f, i = x, 0
        L = len(word)
        while i < L:
            nxt = table[f][word[i]]
            if nxt == -1:
                break
            f, i = nxt, i + 1
        if i == L:
            return 0 if f == x else -1
        b, j = x, L
        while j > i + 1:
            prv = table[b][word[j - 1] ^ 1]
            if prv == -1:
                break
            b, j = prv, j - 1
        if j > i + 1:
            return 0
        c = word[i]
        if table[b][c ^ 1] != -1:
            return -1  # b already has a different preimage under c
        table[f][c] = b
        table[b][c ^ 1] = f
        trail.append((f, c))
        return 1

    def _propagate(self, trail: list) -> bool:
        table = self.table
        while True:
            changed = False
            for word in self.words:
                for x in range(len(table)):
                    res = self._scan(x, word, trail)
                    if res < 0:
                        return False
                    if res:
                        changed = True
            for word in self.forbidden:
                for x in range(len(table)):
                    f, ok = x, True
                    for c in word:
                        f = table[f][c]
                        if f == -1:
                            ok = False
                            break
                    if ok and f == x:
                        return False
            if not changed:
                return True

    # -- search -------------------------------------------------------------

    def _first_hole(self) -> tuple[int, int] | None:
        for x, row in enumerate(self.table):
            for c, v in enumerate(row):
                if v == -1:
                    return x, c
        return None

    def _extend(self) -> bool:
        hole = self._first_hole()
        if hole is None:
            self._record()
            return True
        x, c = hole
        table = self.table
        n = len(table)
        candidates = [y for y in range(n) if table[y][c ^ 1] == -1]
        complete = True
        for y in candidates:
            if not self._try(x, c, y, new=False):
                complete = False
        if n < self.max_index:
            if not self._try(x, c, n, new=True):
                complete = False
        return complete

    def _try(self, x: int, c: int, y: int, new: bool) -> bool:
        self.nodes += 1
        if self.nodes > self.node_budget:
            return False
        table = self.table
        trail: list[tuple[int, int]] = []
        n_words = len(self.words)
        added_coset = False
        if new:
            table.append([-1] * self.ncols)
            self.rep_words.append(self.rep_words[x] + (c,))
            added_coset = True
        table[x][c] = y
        table[y][c ^ 1] = x
        trail.append((x, c))
        ok = True
        if not new:
            w = _free_reduce(
                self.rep_words[x] + (c,) + _inv_cols(self.rep_words[y])
            )
            if w and w not in self.word_set and _inv_cols(w) not in self.word_set:
                self.words.append(w)
                self.word_set.add(w)
        if ok:
            ok = self._propagate(trail)
        complete = True
        if ok:
            complete = self._extend()
        # undo
        for f, cc in reversed(trail):
            b = table[f][cc]
            table[f][cc] = -1
            table[b][cc ^ 1] = -1
        for w in self.words[n_words:]:
            self.word_set.discard(w)
        del self.words[n_words:]
        if added_coset:
            table.pop()
            self.rep_words.pop()
        return complete

    def _record(self) -> None:
        n = len(self.table)
        action = [[self.table[x][2 * g] for x in range(n)] for g in range(self.ngen)]
        ct = CosetTable(n, list(self.gen_names), action, self.p_meta)
        self.results.append(ct.canonical())


def _torsion_forbidden(pres: Presentation) -> list[tuple[int, ...]]:
    """Words that must act fixed-point-freely when the subgroup is torsion-free.

    In a regular action, a generator image of order m has uniform m-cycles, so
    torsion-freeness is equivalent to every proper power of a, b, g being
    fixed-point-free.
    """
    out = []
    orders = {}
    for rel in pres.relators:
        if len(set(rel)) == 1 and rel[0] > 0:
            orders[rel[0] - 1] = len(rel)
    for g, m in orders.items():
        col = 2 * g
        for d in range(1, m):
            if m % d == 0:
                out.append((col,) * d)
    return out


def enumerate_normal_subgroups(
    pres: Presentation,
    max_index: int,
    node_budget: int = 20_000_000,
    torsion_free_only: bool = False,
) -> list[QuotientRecord]:
    """All normal subgroups of index <= max_index, as quotient coset tables.

    Tables are deduplicated up to coset relabeling and returned ordered by
    index, then by canonical serialization.  Raises SearchBudgetExceeded
    (carrying the partial result list) if the node budget runs out.
    """
    if max_index < 1:
        raise ValueError("max_index must be >= 1")
    forbidden = _torsion_forbidden(pres) if torsion_free_only else None
    search = _NormalSearch(pres, max_index, node_budget, forbidden)
    complete = search.run()
    seen: set[str] = set()
    records = []
    for ct in search.results:
        key = ct.serialize()
        if key in seen:
            continue
        seen.add(key)
        records.append(_make_record(pres, ct))
    records.sort(key=lambda r: (r.index, r.coset_table.serialize()))
    if not complete:
        raise SearchBudgetExceeded(
            f"node budget {node_budget} exhausted; result incomplete",
            partial=records,
        )
    return records


def _make_record(pres: Presentation, ct: CosetTable) -> QuotientRecord:
    orders_map = {}
    for rel in pres.relators:
        if len(set(rel)) == 1 and rel[0] > 0:
            orders_map[rel[0] - 1] = len(rel)
    realized = tuple(_perm_order(perm) for perm in ct.action[:3]) if len(
        ct.action
    ) >= 3 else tuple(_perm_order(perm) for perm in ct.action)
    p = orders_map.get(2)
    q = orders_map.get(1)
    torsion_free = (
        len(realized) == 3
        and p is not None
        and q is not None
        and realized == (orders_map.get(0, 2), q, p)
    )
    genus = None
    if torsion_free:
        i = ct.index
        v, e, f = i // q, i // 2, i // p
        chi = v - e + f
        if chi % 2 == 0:
            genus = (2 - chi) // 2
    return QuotientRecord(ct, p or 0, realized, torsion_free, genus)


def coset_representative_words(ct: CosetTable) -> list[Word]:
    """One word per coset sending coset 0 there, found breadth-first."""
    ngen = len(ct.action)
    cols = [(2 * g, ct.action[g]) for g in range(ngen)]
    cols += [(2 * g + 1, ct._inverse(g)) for g in range(ngen)]
    rep: dict[int, tuple[int, ...]] = {0: ()}
    order = [0]
    head = 0
    while head < len(order):
        x = order[head]
        head += 1
        for c, perm in cols:
            y = perm[x]
            if y not in rep:
                rep[y] = rep[x] + (c,)
                order.append(y)
    return [_from_cols(rep[x]) for x in range(ct.index)]


def subgroup_generator_words(ct: CosetTable) -> list[Word]:
    """Schreier generators of the subgroup (as public signed words).

    Feeding these to ``todd_coxeter`` as extra relators reproduces the table's
    quotient.
    """
    ngen = len(ct.action)
    invs = [ct._inverse(g) for g in range(ngen)]
    cols = []
    for g in range(ngen):
        cols.append((2 * g, ct.action[g]))
    for g in range(ngen):
        cols.append((2 * g + 1, invs[g]))
    rep: dict[int, tuple[int, ...]] = {0: ()}
    order = [0]
    head = 0
    while head < len(order):
        x = order[head]
        head += 1
        for c, perm in cols:
            y = perm[x]
            if y not in rep:
                rep[y] = rep[x] + (c,)
                order.append(y)
    words = []
    seen = set()
    for x in range(ct.index):
        for g in range(ngen):
            y = ct.action[g][x]
            w = _free_reduce(rep[x] + (2 * g,) + _inv_cols(rep[y]))
            if w and w not in seen and _inv_cols(w) not in seen:
                seen.add(w)
                words.append(_from_cols(w))
    return words


def verify_quotient(q: QuotientRecord, pres: Presentation | None = None) -> dict:
    """Re-check table and record invariants; returns {check: bool} report."""
    ct = q.coset_table
    report = {}
    n = ct.index
    report["bijective_actions"] = all(
        sorted(perm) == list(range(n)) for perm in ct.action
    )
    if pres is None and ct.p:
        pres = triangle_rotation_presentation(ct.p)
    if pres is not None:
        report["relators_trivial"] = all(
            ct.is_identity_word(r) for r in pres.relators
        )
    report["transitive"] = ct.is_transitive()
    report["regular_action"] = _is_regular(ct)
    expected_tf = q.orders == (2, 3, q.p)
    report["torsion_free_flag"] = q.torsion_free == expected_tf
    if q.torsion_free and q.genus is not None:
        chi = n // 3 - n // 2 + n // q.p
        report["genus"] = q.genus == (2 - chi) // 2 and q.genus >= 0
    return report


def _is_regular(ct: CosetTable) -> bool:
    """Stabilizer of coset 0 is trivial (normality of the subgroup)."""
    for w in subgroup_generator_words(ct):
        if not ct.is_identity_word(w):
            return False
    return True
