"""Ehrenfeucht-Fraisse games between a structure padded with copies of its balls and the copies alone.

``build_instance(S, rounds, radius)`` forms H = ``rounds`` disjoint copies of
every radius-n ball of S and G = H plus S itself.  Each element of either
side is tracked as (component, base element): a ball copy is an
index-preserving relabelling of the ball inside S, so the element of a copy
that corresponds to a base element is the one carrying the same base index.

The Duplicator strategy keeps, after round i with ``large_i = 2^(rounds-i+1)``:

1. each reply corresponds to the Spoiler point it answers;
2. distances below ``large_i`` agree exactly;
3. distances of at least ``large_i`` stay at least ``large_i``;
4. ``min(distance to own boundary, large_i)`` agrees (S has no boundary);

and the played pairs form a partial isomorphism.  ``play`` checks all of
this after every round and records violations instead of raising.

``game_winner`` is an unrelated exact solver used as an oracle.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .analysis import INF, _bfs, n_ball, shadow_graph
from .core import KStructure, disjoint_union
from .errors import MixedArity, NoFreshCopy, RadiusTooSmall, TooLarge, UnknownElement

__all__ = [
    "GameInstance",
    "GameState",
    "build_instance",
    "duplicator_move",
    "check_conditions",
    "Exhaustive",
    "RandomPlays",
    "Scripted",
    "PlayReport",
    "play",
    "game_winner",
    "GAME_SIZE_GUARD",
]

G, H = "G", "H"
GAME_SIZE_GUARD = 10**8


def _other(side: str) -> str:
    return H if side == G else G


@dataclass
class _Side:
    """Flat per-element arrays for one side of the game."""

    structure: KStructure
    comp: list[int]  # component id (ball copy number, or -1 for the base copy)
    centre: list[int]  # base index of the ball centre, -1 for the base copy
    base: list[int]  # corresponding base element
    local: list[int]  # index inside the component
    bdist: list[float]  # distance to the component's boundary
    # (centre, copy) -> offset of that copy
    copy_offset: dict[tuple[int, int], int]
    base_offset: int | None


@dataclass
class GameInstance:
    base: KStructure
    rounds: int
    radius: int
    strict: bool
    balls: list[KStructure]  # ball around each base element, in base order
    ball_members: list[tuple[int, ...]]  # base indices of each ball, in base order
    ball_local: list[dict[int, int]]  # base index -> local index, per ball
    ball_dist: list[list[list[float]]]  # distances inside each ball
    ball_bdist: list[list[float]]
    base_dist: list[list[float]]
    g: _Side
    h: _Side

    @property
    def G(self) -> KStructure:
        return self.g.structure

    @property
    def H(self) -> KStructure:
        return self.h.structure

    def side(self, name: str) -> _Side:
        return self.g if name == G else self.h

    def large(self, i: int) -> int:
        return 2 ** (self.rounds - i + 1)

    def dist(self, side: str, x: int, y: int) -> float:
        sd = self.side(side)
        if sd.comp[x] != sd.comp[y]:
            return INF
        c = sd.centre[x]
        if c < 0:
            return self.base_dist[sd.base[x]][sd.base[y]]
        return self.ball_dist[c][sd.local[x]][sd.local[y]]

    def element(self, side: str, name: str) -> int:
        try:
            return self.side(side).structure.index[name]
        except KeyError:
            raise UnknownElement(f"{name!r} is not an element of side {side}") from None

    def name(self, side: str, x: int) -> str:
        return self.side(side).structure.universe[x]

    def describe(self) -> dict:
        return {
            "base_size": len(self.base),
            "rounds": self.rounds,
            "radius": self.radius,
            "strict": self.strict,
            "ball_sizes": [len(b) for b in self.balls],
            "G_size": len(self.G),
            "H_size": len(self.H),
            "copies_per_ball": self.rounds,
        }


def _ball_tag(s: KStructure, centre: int, copy: int) -> str:
    return f"B[{s.universe[centre]}]/{copy}"


def _make_side(inst_parts: list[KStructure], tags: list[str], keys: list[tuple[int, int] | None], inst) -> _Side:
    du = disjoint_union(inst_parts, tags=tags)
    comp, centre, base, local, bdist = [], [], [], [], []
    copy_offset: dict[tuple[int, int], int] = {}
    base_offset = None
    for p, key in enumerate(keys):
        off = du.offsets[p]
        if key is None:
            base_offset = off
            for j in range(len(inst_parts[p])):
                comp.append(-1)
                centre.append(-1)
                base.append(j)
                local.append(j)
                bdist.append(INF)
        else:
            a, _ = key
            copy_offset[key] = off
            for j, b in enumerate(inst["members"][a]):
                comp.append(p)
                centre.append(a)
                base.append(b)
                local.append(j)
                bdist.append(inst["bdist"][a][j])
    return _Side(du.structure, comp, centre, base, local, bdist, copy_offset, base_offset)


def build_instance(s: KStructure, rounds: int, radius: int, strict: bool = True) -> GameInstance:
    if rounds < 1:
        raise ValueError("need at least one round")
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if len(s) == 0:
        raise ValueError("base structure is empty")
    if strict and not radius > 2 ** (rounds + 1):
        raise RadiusTooSmall(f"strict play needs radius > {2 ** (rounds + 1)}, got {radius}")
    adj = shadow_graph(s)
    base_dist = [_bfs(adj, a) for a in range(len(s))]

    balls, members, local_maps, dists, bdists = [], [], [], [], []
    for a, name in enumerate(s.universe):
        ball = n_ball(s, name, radius)
        mem = tuple(s.index[x] for x in ball.structure.universe)
        bad = shadow_graph(ball.structure)
        d = [_bfs(bad, j) for j in range(len(mem))]
        boundary = [j for j, x in enumerate(ball.structure.universe) if x in ball.boundary]
        bd = [min((d[j][b] for b in boundary), default=INF) for j in range(len(mem))]
        balls.append(ball.structure)
        members.append(mem)
        local_maps.append({b: j for j, b in enumerate(mem)})
        dists.append(d)
        bdists.append(bd)

    meta = {"members": members, "bdist": bdists}
    parts, tags, keys = [], [], []
    for a in range(len(s)):
        for c in range(rounds):
            parts.append(balls[a])
            tags.append(_ball_tag(s, a, c))
            keys.append((a, c))
    h_side = _make_side(parts, tags, keys, meta)
    g_side = _make_side(parts + [s], tags + ["S"], keys + [None], meta)
    inst = GameInstance(s, rounds, radius, strict, balls, members, local_maps, dists, bdists, base_dist, g_side, h_side)
    _validate_copies(inst)
    return inst


def _validate_copies(inst: GameInstance) -> None:
    """Each ball copy must be isomorphic to its ball in the base via the base indices."""
    s = inst.base
    for sd in (inst.g, inst.h):
        rel = sd.structure.relation
        for (a, _), off in sd.copy_offset.items():
            mem = inst.ball_members[a]
            inside = set(mem)
            want = {t for t in s.relation if all(x in inside for x in t)}
            got = {tuple(sd.base[off + inst.ball_local[a][x]] for x in t) for t in want}
            if got != want:
                raise AssertionError("ball copy differs from its ball")
            loc = inst.ball_local[a]
            for t in want:
                if tuple(off + loc[x] for x in t) not in rel:
                    raise AssertionError("ball copy lost a tuple")


@dataclass
class GameState:
    instance: GameInstance
    # (g, h): g on side G, h on side H
    pairs: list[tuple[int, int]] = field(default_factory=list)
    moves: list[tuple[str, int]] = field(default_factory=list)

    @property
    def round(self) -> int:
        return len(self.pairs)

    @property
    def large(self) -> int:
        return self.instance.large(self.round)

    def points(self, side: str) -> list[int]:
        return [p[0] if side == G else p[1] for p in self.pairs]

    def copy(self) -> GameState:
        return GameState(self.instance, list(self.pairs), list(self.moves))


def duplicator_move(state: GameState, side: str, x: int) -> int:
    """The reply on the opposite side to Spoiler's ``x`` on ``side``; advances ``state``."""
    inst = state.instance
    if state.round >= inst.rounds:
        raise ValueError("all rounds have been played")
    other = _other(side)
    mine, theirs = state.points(side), state.points(other)
    src, dst = inst.side(side), inst.side(other)
    if not 0 <= x < len(src.structure):
        raise UnknownElement(f"element {x} out of range on side {side}")

    if x in mine:
        reply = theirs[mine.index(x)]
    else:
        threshold = inst.large(state.round + 1)
        near = None
        for j, p in enumerate(mine):
            d = inst.dist(side, x, p)
            if d < threshold and (near is None or d < near[0]):
                near = (d, j)
        if near is None:
            reply = _fresh_copy(inst, dst, theirs, src, x)
        else:
            reply = _same_component(inst, dst, theirs[near[1]], src.base[x])
    state.pairs.append((x, reply) if side == G else (reply, x))
    state.moves.append((side, x))
    return reply


def _fresh_copy(inst: GameInstance, dst: _Side, used: list[int], src: _Side, x: int) -> int:
    # a point in the base copy is answered at the centre of a ball around it;
    # a point in a ball copy is answered at the same spot of another copy of that ball
    a = src.centre[x] if src.centre[x] >= 0 else src.base[x]
    taken = {dst.comp[u] for u in used}
    for c in range(inst.rounds):
        off = dst.copy_offset[(a, c)]
        if dst.comp[off] not in taken:
            return off + inst.ball_local[a][src.base[x]]
    raise NoFreshCopy(f"every copy of the ball around {inst.base.universe[a]!r} is in use")


def _same_component(inst: GameInstance, dst: _Side, partner: int, b: int) -> int:
    a = dst.centre[partner]
    start = partner - dst.local[partner]
    if a < 0:
        return start + b
    j = inst.ball_local[a].get(b)
    if j is None:
        raise NoFreshCopy(f"no element corresponding to {inst.base.universe[b]!r} in the partner's ball")
    return start + j


def _partial_iso_failure(a: KStructure, b: KStructure, pairs: Sequence[tuple[int, int]]) -> str | None:
    f: dict[int, int] = {}
    g: dict[int, int] = {}
    for x, y in pairs:
        if f.setdefault(x, y) != y or g.setdefault(y, x) != x:
            return "played pairs are not a bijection"
    dom = list(f)
    for t in itertools.product(dom, repeat=a.k):
        ft = tuple(f[v] for v in t)
        if (t in a.relation) != (ft in b.relation):
            return f"tuple {a.named(t)} vs {b.named(ft)} disagree"
    return None


def check_conditions(state: GameState) -> list[str]:
    """Every violated condition after the current round, as readable strings."""
    inst = state.instance
    large = state.large
    out = []
    gs, hs = inst.g, inst.h
    for j, (g, h) in enumerate(state.pairs):
        if gs.base[g] != hs.base[h]:
            out.append(f"(1) pair {j + 1} does not correspond")
        if min(gs.bdist[g], large) != min(hs.bdist[h], large):
            out.append(f"(4) pair {j + 1} boundary distance {gs.bdist[g]} vs {hs.bdist[h]}")
    for (j, (g1, h1)), (l, (g2, h2)) in itertools.combinations(enumerate(state.pairs), 2):
        dg, dh = inst.dist(G, g1, g2), inst.dist(H, h1, h2)
        if (dg < large or dh < large) and dg != dh:
            tag = "(2)" if min(dg, dh) < large and max(dg, dh) < large else "(3)"
            out.append(f"{tag} pairs {j + 1},{l + 1} distance {dg} vs {dh}")
    bad = _partial_iso_failure(inst.G, inst.H, state.pairs)
    if bad:
        out.append(f"partial isomorphism: {bad}")
    return out


@dataclass(frozen=True)
class Exhaustive:
    """Every Spoiler move sequence, both sides each round."""


@dataclass(frozen=True)
class RandomPlays:
    seed: int = 0
    trials: int = 10**4


@dataclass(frozen=True)
class Scripted:
    """Spoiler moves as (side, element name); side is ``"G"`` or ``"H"``."""

    moves: tuple[tuple[str, str], ...]


@dataclass
class PlayReport:
    instance: dict
    policy: dict
    plays: int = 0
    moves_checked: int = 0
    violation_count: int = 0
    # stored transcripts are capped; ``violation_count`` is exact
    violations: list[dict] = field(default_factory=list)
    transcripts: list[list[dict]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violation_count == 0

    def to_json(self) -> dict:
        return {
            "instance": self.instance,
            "policy": self.policy,
            "plays": self.plays,
            "moves_checked": self.moves_checked,
            "violation_count": self.violation_count,
            "violations": self.violations,
            "transcripts": self.transcripts,
            "ok": self.ok,
        }


MAX_STORED = 50


def _transcript(state: GameState) -> list[dict]:
    inst = state.instance
    out = []
    for (side, x), (g, h) in zip(state.moves, state.pairs):
        reply = h if side == G else g
        out.append({"spoiler": [side, inst.name(side, x)], "duplicator": inst.name(_other(side), reply)})
    return out


def _step(report: PlayReport, state: GameState, side: str, x: int) -> bool:
    """One Spoiler move plus reply and check; False when the play cannot continue."""
    report.moves_checked += 1
    try:
        duplicator_move(state, side, x)
    except NoFreshCopy as exc:
        problems = [f"no reply: {exc}"]
        state.moves.append((side, x))
        alive = False
    else:
        problems = check_conditions(state)
        alive = True
    if problems:
        report.violation_count += 1
        if len(report.violations) < MAX_STORED:
            tr = _transcript(state)
            if not alive:
                tr.append({"spoiler": [side, state.instance.name(side, x)], "duplicator": None})
            report.violations.append({"round": len(state.moves), "problems": problems, "transcript": tr})
    return alive


def play(instance: GameInstance, policy=Exhaustive(), keep_transcripts: int = 0) -> PlayReport:
    """Run the Duplicator strategy against ``policy`` and collect every violation."""
    if isinstance(policy, Exhaustive):
        pol = {"kind": "exhaustive"}
    elif isinstance(policy, RandomPlays):
        pol = {"kind": "random", "seed": policy.seed, "trials": policy.trials}
    elif isinstance(policy, Scripted):
        pol = {"kind": "scripted", "moves": [list(m) for m in policy.moves]}
    else:
        raise TypeError(f"unknown policy {policy!r}")
    report = PlayReport(instance.describe(), pol)

    def finish(state: GameState):
        report.plays += 1
        if len(report.transcripts) < keep_transcripts:
            report.transcripts.append(_transcript(state))

    if isinstance(policy, Exhaustive):
        sizes = {G: len(instance.G), H: len(instance.H)}

        def rec(state: GameState):
            if state.round == instance.rounds:
                finish(state)
                return
            for side in (G, H):
                for x in range(sizes[side]):
                    child = state.copy()
                    if _step(report, child, side, x):
                        rec(child)
                    else:
                        finish(child)

        rec(GameState(instance))
    elif isinstance(policy, RandomPlays):
        for t in range(policy.trials):
            rng = random.Random(f"{policy.seed}:{t}")
            state = GameState(instance)
            for _ in range(instance.rounds):
                side = rng.choice((G, H))
                x = rng.randrange(len(instance.side(side).structure))
                if not _step(report, state, side, x):
                    break
            finish(state)
    else:
        if len(policy.moves) > instance.rounds:
            raise ValueError(f"script has {len(policy.moves)} moves for {instance.rounds} rounds")
        state = GameState(instance)
        for side, name in policy.moves:
            if side not in (G, H):
                raise ValueError(f"side must be G or H, got {side!r}")
            if not _step(report, state, side, instance.element(side, name)):
                break
        finish(state)
    return report


def game_winner(a: KStructure, b: KStructure, rounds: int) -> str:
    """``"Duplicator"`` or ``"Spoiler"`` for the ``rounds``-round game on a and b, by memoized minimax."""
    if a.k != b.k:
        raise MixedArity("structures must share the arity")
    if rounds < 0:
        raise ValueError("rounds must be non-negative")
    if (len(a) + len(b)) ** (2 * rounds) > GAME_SIZE_GUARD:
        raise TooLarge(f"(|a|+|b|)^(2*rounds) exceeds {GAME_SIZE_GUARD}")

    @lru_cache(maxsize=None)
    def duplicator_wins(position: frozenset, left: int) -> bool:
        if _partial_iso_failure(a, b, sorted(position)) is not None:
            return False
        if left == 0:
            return True
        for x in range(len(a)):
            if not any(duplicator_wins(position | {(x, y)}, left - 1) for y in range(len(b))):
                return False
        for y in range(len(b)):
            if not any(duplicator_wins(position | {(x, y)}, left - 1) for x in range(len(a))):
                return False
        return True

    return "Duplicator" if duplicator_wins(frozenset(), rounds) else "Spoiler"


def spoiler_moves_from_lines(lines: Iterable[str]) -> Iterable[tuple[str, str]]:
    """Parse ``SIDE ELEMENT`` lines, e.g. ``G S.3``; blank lines are skipped."""
    for line in lines:
        line = line.strip()
        if not line:
            continue
        side, _, name = line.partition(" ")
        yield side.upper(), name.strip()
