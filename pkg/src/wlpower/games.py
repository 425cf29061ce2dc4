"""Exact solvers for the two pebble games attached to a refinement spec.

Both games share the move schedule of the spec: an initialization round
of N putting/guarding moves staged by ``i_seq``, then repeated update
rounds of M putting/guarding moves staged by ``j_seq`` plus one
removing/unguarding move that keeps k of the k+t pebbles.

* The bijection game runs on a pair of graphs.  The second player picks
  a bijection between the two current choice sets, the first player
  picks an element, and the first player wins on a cardinality mismatch
  or an isomorphism-type mismatch of the occupied tuples.  Infinite play
  favors the second player, so the solver computes a greatest fixed
  point: states are deleted until every survivor has a perfect matching
  of safe choice pairs (putting) and only surviving index selections
  (removing).

* The pursuit game runs on one graph.  The first player (Cops) places
  pebbles from the same choice sets; the second player (Robber)
  maintains a connected node set that shrinks within the unblocked part
  after each placement and grows back to its enclosing component after
  each removal.  Cops must trap Robber in finite play, so the solver
  computes the attractor (least fixed point) of the Robber-stuck
  positions, folding Robber replies into for-all edges.

Verdicts carry optional strategy certificates that
:func:`replay_certificate` replays against exhaustive adversaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BudgetError, CertificateError
from .graphs import Graph, atp, components_avoiding
from .refinement import GfwlSpec, _index_vectors
from .selectors import f_set, r_set

DEFAULT_MAX_STATES = 1_000_000


# ---------------------------------------------------------------------------
# Bipartite matching


def _max_matching(n_left: int, n_right: int, adjacency: Sequence[Sequence[int]]) -> list:
    """Left-to-right maximum matching (augmenting paths).  Returns the
    right-side partner per left index, -1 where unmatched."""
    match_left = [-1] * n_left
    match_right = [-1] * n_right

    def augment(a: int, seen: list[bool]) -> bool:
        for b in adjacency[a]:
            if not seen[b]:
                seen[b] = True
                if match_right[b] == -1 or augment(match_right[b], seen):
                    match_left[a] = b
                    match_right[b] = a
                    return True
        return False

    for a in range(n_left):
        augment(a, [False] * n_right)
    return match_left


def has_safe_bijection(domain: Iterable, codomain: Iterable, safe: Iterable[tuple]) -> bool:
    """True iff the two sets have equal size and the safe pairs contain a
    perfect matching (i.e. some bijection uses only safe pairs)."""
    dom = sorted(set(domain))
    cod = sorted(set(codomain))
    if len(dom) != len(cod):
        return False
    cod_index = {c: i for i, c in enumerate(cod)}
    adjacency: list[list[int]] = [[] for _ in dom]
    dom_index = {d: i for i, d in enumerate(dom)}
    for d, c in safe:
        if d in dom_index and c in cod_index:
            adjacency[dom_index[d]].append(cod_index[c])
    matched = _max_matching(len(dom), len(cod), adjacency)
    return all(b != -1 for b in matched)


# ---------------------------------------------------------------------------
# Shared move tables


def _next_phase(spec: GfwlSpec, phase: tuple) -> tuple:
    if phase[0] == "I":
        return ("I", phase[1] + 1) if phase[1] < spec.n_stages else ("U", 1)
    if phase[0] == "U":
        return ("U", phase[1] + 1) if phase[1] < spec.m_stages else ("R",)
    return ("U", 1)


class _MoveTables:
    """Per-graph choice sets: for each putting stage, the suffix sets of
    the staged tuple universe grouped by occupied prefix."""

    def __init__(self, spec: GfwlSpec, g: Graph):
        self.spec = spec
        self.g = g
        r_full = sorted(r_set(spec.r_selector, spec.k, g))
        self.r_groups: list[dict] = []
        for n in range(1, spec.n_stages + 1):
            i_prev, i_cur = spec.i_seq[n - 1], spec.i_seq[n]
            stage = {}
            for tup in sorted({r[:i_cur] for r in r_full}):
                stage.setdefault(tup[:i_prev], []).append(tup[i_prev:])
            self.r_groups.append(stage)
        self._f_groups: dict = {}
        self._atp_ids: dict = {}
        self._iso_intern: dict = {}

    def _f_stages(self, main: tuple) -> list[dict]:
        cached = self._f_groups.get(main)
        if cached is None:
            spec = self.spec
            f_full = sorted(f_set(spec.f_selector, spec.t, self.g, main))
            cached = []
            for m in range(1, spec.m_stages + 1):
                j_prev, j_cur = spec.j_seq[m - 1], spec.j_seq[m]
                stage = {}
                for tup in sorted({f[:j_cur] for f in f_full}):
                    stage.setdefault(tup[:j_prev], []).append(tup[j_prev:])
                cached.append(stage)
            self._f_groups[main] = cached
        return cached

    def put_choices(self, phase: tuple, pos: tuple) -> list:
        if phase[0] == "I":
            return self.r_groups[phase[1] - 1].get(pos, [])
        main, aux = pos[: self.spec.k], pos[self.spec.k:]
        return self._f_stages(main)[phase[1] - 1].get(aux, [])

    def atp_id(self, tup: tuple, shared_intern: dict) -> int:
        """Isomorphism-type identifier comparable across graphs sharing
        ``shared_intern``."""
        ident = self._atp_ids.get(tup)
        if ident is None:
            iso = atp(self.g, tup)
            ident = shared_intern.setdefault(iso, len(shared_intern))
            self._atp_ids[tup] = ident
        return ident


# ---------------------------------------------------------------------------
# Verdicts


@dataclass
class GameVerdict:
    """Outcome of one game solve.

    ``winner`` is ``"cops"``/``"robber"`` for the pursuit game and
    ``"spoiler"``/``"duplicator"`` for the bijection game;
    ``first_player`` folds these back to the mover/defender split.
    """

    winner: str
    states_explored: int
    certificate: dict | None = None

    @property
    def first_player(self) -> bool:
        return self.winner in ("cops", "spoiler")

    def to_json_dict(self, include_certificate: bool = False) -> dict:
        out = {"winner": self.winner, "states_explored": self.states_explored}
        if include_certificate and self.certificate is not None:
            out["certificate"] = _jsonify(self.certificate)
        return out


def _jsonify(obj):
    if isinstance(obj, dict):
        return {_key_str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(x) for x in obj]
    if isinstance(obj, frozenset):
        return sorted(obj)
    return obj


def _key_str(key) -> str:
    if isinstance(key, str):
        return key
    return repr(key)


# ---------------------------------------------------------------------------
# Bijection game solver


def spoiler_wins(
    spec: GfwlSpec,
    g: Graph,
    h: Graph,
    *,
    max_states: int = DEFAULT_MAX_STATES,
    want_certificate: bool = True,
) -> GameVerdict:
    """Decide the bijection game on ``(g, h)``.

    Greatest fixed point over reachable type-consistent states: a
    putting state survives while its two choice sets have equal size and
    the safe pairs (both successors type-consistent and surviving) admit
    a perfect matching; a removing state survives while every index
    selection leads to a surviving state.  The first player wins iff the
    empty-board root is deleted.
    """
    solver = _EfSolver(spec, g, h, max_states)
    solver.generate()
    solver.fixpoint()
    root_alive = solver.alive[solver.root]
    verdict = GameVerdict(
        winner="duplicator" if root_alive else "spoiler",
        states_explored=len(solver.keys),
    )
    if want_certificate:
        verdict.certificate = solver.certificate(root_alive)
    return verdict


class _EfSolver:
    def __init__(self, spec: GfwlSpec, g: Graph, h: Graph, max_states: int):
        self.spec = spec
        self.tables_g = _MoveTables(spec, g)
        self.tables_h = _MoveTables(spec, h)
        self.iso_intern: dict = {}
        self.max_states = max_states
        self.keys: list = []
        self.index: dict = {}
        self.kind: list = []  # "put" | "rm"
        self.alive: list = []
        self.choice_g: list = []  # putting: the D list
        self.choice_h: list = []  # putting: the E list
        self.pairs: list = []  # putting: [(ai, bi, succ_id)] type-consistent
        self.rm_succs: list = []  # removing: succ id per index combo, -1 = type mismatch
        self.preds: dict = {}

    def _atp_eq(self, pos_g: tuple, pos_h: tuple) -> bool:
        return self.tables_g.atp_id(pos_g, self.iso_intern) == self.tables_h.atp_id(
            pos_h, self.iso_intern
        )

    def _state(self, key: tuple) -> int:
        sid = self.index.get(key)
        if sid is None:
            sid = len(self.keys)
            if sid >= self.max_states:
                raise BudgetError(
                    "bijection game state budget exceeded",
                    stats={"states": sid},
                )
            self.index[key] = sid
            self.keys.append(key)
            self.kind.append("put" if key[0][0] in ("I", "U") else "rm")
            self.alive.append(True)
            self.choice_g.append(None)
            self.choice_h.append(None)
            self.pairs.append(None)
            self.rm_succs.append(None)
            self.queue.append(sid)
        return sid

    def generate(self) -> None:
        self.queue: list[int] = []
        self.root = self._state((("I", 1), (), ()))
        head = 0
        while head < len(self.queue):
            sid = self.queue[head]
            head += 1
            phase, pos_g, pos_h = self.keys[sid]
            if self.kind[sid] == "put":
                d = self.tables_g.put_choices(phase, pos_g)
                e = self.tables_h.put_choices(phase, pos_h)
                self.choice_g[sid] = d
                self.choice_h[sid] = e
                if len(d) != len(e):
                    self.alive[sid] = False  # no bijection exists at all
                    self.pairs[sid] = []
                    continue
                nxt = _next_phase(self.spec, phase)
                pairs = []
                for ai, a in enumerate(d):
                    new_g = pos_g + a
                    for bi, b in enumerate(e):
                        new_h = pos_h + b
                        if self._atp_eq(new_g, new_h):
                            succ = self._state((nxt, new_g, new_h))
                            pairs.append((ai, bi, succ))
                            self.preds.setdefault(succ, set()).add(sid)
                self.pairs[sid] = pairs
            else:
                succs = []
                for combo in _index_vectors(self.spec.k, self.spec.t):
                    sel_g = tuple(pos_g[i] for i in combo)
                    sel_h = tuple(pos_h[i] for i in combo)
                    if self._atp_eq(sel_g, sel_h):
                        succ = self._state((("U", 1), sel_g, sel_h))
                        succs.append(succ)
                        self.preds.setdefault(succ, set()).add(sid)
                    else:
                        succs.append(-1)
                self.rm_succs[sid] = succs

    def _survives(self, sid: int) -> bool:
        if self.kind[sid] == "rm":
            return all(s != -1 and self.alive[s] for s in self.rm_succs[sid])
        d = self.choice_g[sid]
        e = self.choice_h[sid]
        if len(d) != len(e):
            return False
        adjacency: list[list[int]] = [[] for _ in d]
        for ai, bi, succ in self.pairs[sid]:
            if self.alive[succ]:
                adjacency[ai].append(bi)
        matched = _max_matching(len(d), len(e), adjacency)
        return all(b != -1 for b in matched)

    def fixpoint(self) -> None:
        dead_list = [sid for sid in range(len(self.keys)) if self.alive[sid] and not self._survives(sid)]
        for sid in dead_list:
            self.alive[sid] = False
        while dead_list:
            dead = dead_list.pop()
            for pred in self.preds.get(dead, ()):
                if self.alive[pred] and not self._survives(pred):
                    self.alive[pred] = False
                    dead_list.append(pred)

    def certificate(self, root_alive: bool) -> dict:
        if root_alive:
            matchings = {}
            for sid, key in enumerate(self.keys):
                if not self.alive[sid] or self.kind[sid] != "put":
                    continue
                d = self.choice_g[sid]
                e = self.choice_h[sid]
                adjacency: list[list[int]] = [[] for _ in d]
                for ai, bi, succ in self.pairs[sid]:
                    if self.alive[succ]:
                        adjacency[ai].append(bi)
                matched = _max_matching(len(d), len(e), adjacency)
                matchings[key] = [(d[ai], e[bi]) for ai, bi in enumerate(matched)]
            return {"winner": "duplicator", "matchings": matchings}
        dead_keys = [self.keys[sid] for sid in range(len(self.keys)) if not self.alive[sid]]
        remove_choices = {}
        combos = _index_vectors(self.spec.k, self.spec.t)
        for sid, key in enumerate(self.keys):
            if self.alive[sid] or self.kind[sid] != "rm":
                continue
            for combo, succ in zip(combos, self.rm_succs[sid]):
                if succ == -1 or not self.alive[succ]:
                    remove_choices[key] = combo
                    break
        return {
            "winner": "spoiler",
            "dead": dead_keys,
            "remove_choices": remove_choices,
        }


# ---------------------------------------------------------------------------
# Pursuit game solver


def _subcomponents(g: Graph, comp: frozenset, blocked: set) -> list[frozenset]:
    """Connected components of ``comp`` minus ``blocked`` (within g),
    sorted by smallest member."""
    remaining = set(comp) - blocked
    out = []
    while remaining:
        start = min(remaining)
        stack = [start]
        found = {start}
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if w in remaining and w not in found:
                    found.add(w)
                    stack.append(w)
        remaining -= found
        out.append(frozenset(found))
    return sorted(out, key=min)


def _containing_component(g: Graph, blocked: set, seed: frozenset) -> frozenset:
    """The component of g minus ``blocked`` containing ``seed`` (which
    must be disjoint from ``blocked``)."""
    start = min(seed)
    stack = [start]
    found = {start}
    while stack:
        u = stack.pop()
        for w in g.adj[u]:
            if w not in blocked and w not in found:
                found.add(w)
                stack.append(w)
    return frozenset(found)


def cops_robber_wins(
    spec: GfwlSpec,
    f: Graph,
    *,
    max_states: int = DEFAULT_MAX_STATES,
    want_certificate: bool = True,
) -> GameVerdict:
    """Decide the pursuit game on the query graph ``f``.

    Builds the reachable game graph over (phase, pebbles, robber
    component) states with Robber replies folded into for-all edges,
    then computes the attractor of the Robber-stuck positions by
    backward counter propagation.  Cops win iff every initial component
    choice lies in the attractor; every state outside it (cycles
    included) is a Robber win.
    """
    solver = _CrSolver(spec, f, max_states)
    solver.generate()
    solver.attract()
    cops = all(solver.win[sid] for sid in solver.initial)
    verdict = GameVerdict(
        winner="cops" if cops else "robber",
        states_explored=len(solver.keys),
    )
    if want_certificate:
        verdict.certificate = solver.certificate(cops)
    return verdict


class _CrSolver:
    def __init__(self, spec: GfwlSpec, f: Graph, max_states: int):
        self.spec = spec
        self.g = f
        self.tables = _MoveTables(spec, f)
        self.max_states = max_states
        self.keys: list = []
        self.index: dict = {}
        self.edges: list = []  # per state: list of (choice, [succ ids])
        self.win: list = []
        self.initial: list[int] = []

    def _state(self, key: tuple) -> int:
        sid = self.index.get(key)
        if sid is None:
            sid = len(self.keys)
            if sid >= self.max_states:
                raise BudgetError(
                    "pursuit game state budget exceeded",
                    stats={"states": sid},
                )
            self.index[key] = sid
            self.keys.append(key)
            self.edges.append(None)
            self.win.append(False)
            self.queue.append(sid)
        return sid

    def generate(self) -> None:
        self.queue: list[int] = []
        for comp in components_avoiding(self.g, ()):
            self.initial.append(self._state((("I", 1), (), comp)))
        head = 0
        while head < len(self.queue):
            sid = self.queue[head]
            head += 1
            phase, pos, comp = self.keys[sid]
            edges = []
            if phase[0] in ("I", "U"):
                nxt = _next_phase(self.spec, phase)
                for delta in self.tables.put_choices(phase, pos):
                    blocked = set(pos) | set(delta)
                    succs = [
                        self._state((nxt, pos + delta, c))
                        for c in _subcomponents(self.g, comp, blocked)
                    ]
                    edges.append((("put", delta), succs))
            else:
                for combo in _index_vectors(self.spec.k, self.spec.t):
                    new_pos = tuple(pos[i] for i in combo)
                    grown = _containing_component(self.g, set(new_pos), comp)
                    succs = [self._state((("U", 1), new_pos, grown))]
                    edges.append((("rm", combo), succs))
            self.edges[sid] = edges
        n = self.g.n
        bound = (n + 1) ** (self.spec.k + self.spec.t) * 2 ** n * (
            self.spec.n_stages + self.spec.m_stages + 1
        )
        assert len(self.keys) <= bound, "reachable state count exceeded its bound"

    def attract(self) -> None:
        pending: list[list[int]] = []
        rev: dict[int, list[tuple[int, int]]] = {}
        queue = []
        self.win_edge: list = [None] * len(self.keys)
        for sid, edges in enumerate(self.edges):
            counts = []
            for eidx, (choice, succs) in enumerate(edges):
                counts.append(len(succs))
                if not succs and not self.win[sid]:
                    self.win[sid] = True
                    self.win_edge[sid] = choice
                    queue.append(sid)
                for succ in succs:
                    rev.setdefault(succ, []).append((sid, eidx))
            pending.append(counts)
        head = 0
        while head < len(queue):
            won = queue[head]
            head += 1
            for sid, eidx in rev.get(won, ()):
                pending[sid][eidx] -= 1
                if pending[sid][eidx] == 0 and not self.win[sid]:
                    self.win[sid] = True
                    self.win_edge[sid] = self.edges[sid][eidx][0]
                    queue.append(sid)

    def certificate(self, cops: bool) -> dict:
        if cops:
            moves = {
                self.keys[sid]: self.win_edge[sid]
                for sid in range(len(self.keys))
                if self.win[sid] and self.win_edge[sid] is not None
            }
            return {"winner": "cops", "moves": moves}
        losing_initial = next(sid for sid in self.initial if not self.win[sid])
        responses = {}
        for sid, key in enumerate(self.keys):
            if self.win[sid] or key[0][0] not in ("I", "U"):
                continue
            for choice, succs in self.edges[sid]:
                survivor = next(
                    (succ for succ in succs if not self.win[succ]), None
                )
                if survivor is None:
                    raise AssertionError("losing state must offer a surviving reply")
                responses[(key, choice)] = self.keys[survivor][2]
        return {
            "winner": "robber",
            "initial_component": self.keys[losing_initial][2],
            "responses": responses,
        }


# ---------------------------------------------------------------------------
# Certificate replay


def replay_certificate(verdict: GameVerdict, spec: GfwlSpec, inputs) -> bool:
    """Replay a stored strategy against an exhaustive adversary.

    ``inputs`` is one graph for pursuit verdicts and a pair of graphs
    for bijection verdicts.  Returns True iff the claimed winner wins
    every line of play.  Malformed certificates raise
    :class:`CertificateError`.
    """
    cert = verdict.certificate
    if not isinstance(cert, dict) or cert.get("winner") != verdict.winner:
        raise CertificateError("certificate missing or winner mismatch")
    if verdict.winner in ("cops", "robber"):
        if not isinstance(inputs, Graph):
            raise CertificateError("pursuit replay needs a single graph input")
        if verdict.winner == "cops":
            return _replay_cops(cert, spec, inputs)
        return _replay_robber(cert, spec, inputs)
    try:
        g, h = inputs
    except (TypeError, ValueError) as exc:
        raise CertificateError("bijection replay needs a pair of graphs") from exc
    if verdict.winner == "spoiler":
        return _replay_spoiler(cert, spec, g, h)
    return _replay_duplicator(cert, spec, g, h)


def _replay_cops(cert: dict, spec: GfwlSpec, g: Graph) -> bool:
    moves = cert.get("moves")
    if not isinstance(moves, dict):
        raise CertificateError("cops certificate needs a moves table")
    tables = _MoveTables(spec, g)
    proven: set = set()

    def wins_from(key: tuple, path: frozenset) -> bool:
        if key in proven:
            return True
        if key in path:
            return False  # cycle: Cops never trap Robber on this line
        choice = moves.get(key)
        if choice is None:
            return False
        phase, pos, comp = key
        tag, payload = choice
        if phase[0] in ("I", "U"):
            if tag != "put" or payload not in tables.put_choices(phase, pos):
                return False
            delta = payload
            blocked = set(pos) | set(delta)
            succs = [
                (_next_phase(spec, phase), pos + delta, c)
                for c in _subcomponents(g, comp, blocked)
            ]
        else:
            if tag != "rm" or payload not in _index_vectors(spec.k, spec.t):
                return False
            new_pos = tuple(pos[i] for i in payload)
            succs = [
                (("U", 1), new_pos, _containing_component(g, set(new_pos), comp))
            ]
        ok = all(wins_from(s, path | {key}) for s in succs)
        if ok:
            proven.add(key)
        return ok

    return all(
        wins_from((("I", 1), (), comp), frozenset())
        for comp in components_avoiding(g, ())
    )


def _replay_robber(cert: dict, spec: GfwlSpec, g: Graph) -> bool:
    responses = cert.get("responses")
    initial = cert.get("initial_component")
    if not isinstance(responses, dict) or initial is None:
        raise CertificateError("robber certificate needs responses and an initial component")
    if frozenset(initial) not in components_avoiding(g, ()):
        return False
    tables = _MoveTables(spec, g)
    start = (("I", 1), (), frozenset(initial))
    seen = {start}
    frontier = [start]
    while frontier:
        key = frontier.pop()
        phase, pos, comp = key
        if phase[0] in ("I", "U"):
            nxt = _next_phase(spec, phase)
            for delta in tables.put_choices(phase, pos):
                blocked = set(pos) | set(delta)
                options = _subcomponents(g, comp, blocked)
                stored = responses.get((key, ("put", delta)))
                if stored is None or frozenset(stored) not in options:
                    return False  # stuck or invalid reply: Robber loses this line
                succ = (nxt, pos + delta, frozenset(stored))
                if succ not in seen:
                    seen.add(succ)
                    frontier.append(succ)
        else:
            for combo in _index_vectors(spec.k, spec.t):
                new_pos = tuple(pos[i] for i in combo)
                succ = (("U", 1), new_pos, _containing_component(g, set(new_pos), comp))
                if succ not in seen:
                    seen.add(succ)
                    frontier.append(succ)
    return True  # no reachable line traps Robber; infinite play wins


def _replay_duplicator(cert: dict, spec: GfwlSpec, g: Graph, h: Graph) -> bool:
    matchings = cert.get("matchings")
    if not isinstance(matchings, dict):
        raise CertificateError("duplicator certificate needs a matchings table")
    tables_g = _MoveTables(spec, g)
    tables_h = _MoveTables(spec, h)
    intern: dict = {}

    def consistent(pos_g: tuple, pos_h: tuple) -> bool:
        return tables_g.atp_id(pos_g, intern) == tables_h.atp_id(pos_h, intern)

    start = (("I", 1), (), ())
    seen = {start}
    frontier = [start]
    while frontier:
        key = frontier.pop()
        phase, pos_g, pos_h = key
        if phase[0] in ("I", "U"):
            d = tables_g.put_choices(phase, pos_g)
            e = tables_h.put_choices(phase, pos_h)
            stored = matchings.get(key)
            if stored is None:
                return False
            pairs = [(tuple(a), tuple(b)) for a, b in stored]
            if sorted(a for a, _ in pairs) != sorted(d) or sorted(
                b for _, b in pairs
            ) != sorted(e):
                return False  # not a bijection between the two choice sets
            nxt = _next_phase(spec, phase)
            for a, b in pairs:
                new_g, new_h = pos_g + a, pos_h + b
                if not consistent(new_g, new_h):
                    return False
                succ = (nxt, new_g, new_h)
                if succ not in seen:
                    seen.add(succ)
                    frontier.append(succ)
        else:
            for combo in _index_vectors(spec.k, spec.t):
                sel_g = tuple(pos_g[i] for i in combo)
                sel_h = tuple(pos_h[i] for i in combo)
                if not consistent(sel_g, sel_h):
                    return False
                succ = (("U", 1), sel_g, sel_h)
                if succ not in seen:
                    seen.add(succ)
                    frontier.append(succ)
    return True  # play never reaches a mismatch; infinite play wins


def _replay_spoiler(cert: dict, spec: GfwlSpec, g: Graph, h: Graph) -> bool:
    dead = cert.get("dead")
    remove_choices = cert.get("remove_choices")
    if not isinstance(dead, list) or not isinstance(remove_choices, dict):
        raise CertificateError("spoiler certificate needs dead states and remove choices")
    dead_set = set(dead)
    tables_g = _MoveTables(spec, g)
    tables_h = _MoveTables(spec, h)
    intern: dict = {}
    proven: set = set()

    def consistent(pos_g: tuple, pos_h: tuple) -> bool:
        return tables_g.atp_id(pos_g, intern) == tables_h.atp_id(pos_h, intern)

    def wins_from(key: tuple, path: frozenset) -> bool:
        """Spoiler forces a win from ``key`` against every adversary move."""
        if key in proven:
            return True
        phase, pos_g, pos_h = key
        if phase[0] in ("I", "U"):
            d = tables_g.put_choices(phase, pos_g)
            e = tables_h.put_choices(phase, pos_h)
            if len(d) != len(e):
                proven.add(key)
                return True
            nxt = _next_phase(spec, phase)

            def refutable(a: tuple, b: tuple) -> bool:
                new_g, new_h = pos_g + a, pos_h + b
                if not consistent(new_g, new_h):
                    return True
                succ = (nxt, new_g, new_h)
                return succ in dead_set and succ not in path and wins_from(
                    succ, path | {key}
                )

            # Every bijection contains a refutable pair iff the
            # non-refutable pairs admit no perfect matching.
            safe = [(a, b) for a in d for b in e if not refutable(a, b)]
            if has_safe_bijection(d, e, safe):
                return False
            proven.add(key)
            return True
        choice = remove_choices.get(key)
        if choice is None:
            return False
        combo = tuple(choice)
        if combo not in _index_vectors(spec.k, spec.t):
            raise CertificateError(f"invalid index selection {choice!r}")
        sel_g = tuple(pos_g[i] for i in combo)
        sel_h = tuple(pos_h[i] for i in combo)
        if not consistent(sel_g, sel_h):
            proven.add(key)
            return True
        succ = (("U", 1), sel_g, sel_h)
        ok = succ in dead_set and succ not in path and wins_from(succ, path | {key})
        if ok:
            proven.add(key)
        return ok

    return wins_from((("I", 1), (), ()), frozenset())
