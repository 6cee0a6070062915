"""Censorship-status decoding and an offline platform simulator.

A post is checked on the front end two and fourteen days after publication.
Posts that are gone are then looked up by id through the API: "permission
denied" means the platform removed it, "does not exist" means the author did.
The API alone cannot tell the two live/censored cases apart because it also
answers "permission denied" for live posts.
"""

from __future__ import annotations

import bisect
import enum
import heapq
import itertools
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .corpus import (CensorshipStatus, Corpus, DEFAULT_REJECT_PATTERNS, Post,
                     build_corpus, is_text_only)

logger = logging.getLogger(__name__)

DAY = 86_400.0
FIRST_CHECK_DELAY = 2 * DAY
SECOND_CHECK_DELAY = 14 * DAY
DEFAULT_POLL_BOUNDS = (300.0, 600.0)


class FrontendCheck(str, enum.Enum):
    PAGE_EXISTS = "page_exists"
    PAGE_GONE = "page_gone"


class ApiResult(str, enum.Enum):
    PERMISSION_DENIED = "permission_denied"
    DOES_NOT_EXIST = "does_not_exist"


class DecodeError(ValueError):
    pass


class InconsistentChecks(DecodeError):
    """A post was gone at day 2 but visible again at day 14."""


class ContractError(DecodeError):
    """API result supplied when not allowed, or missing when required."""


class TransientCheckError(RuntimeError):
    """Front-end check failed for reasons unrelated to the post (network, CAPTCHA)."""


def decode_status(day2: FrontendCheck, day14: FrontendCheck,
                  api: Optional[ApiResult]) -> CensorshipStatus:
    if day2 is FrontendCheck.PAGE_GONE and day14 is FrontendCheck.PAGE_EXISTS:
        raise InconsistentChecks("post gone at day 2 cannot reappear at day 14")
    gone = FrontendCheck.PAGE_GONE in (day2, day14)
    if not gone:
        if api is not None:
            raise ContractError("API result given for a post still live at both checks")
        return CensorshipStatus.UNCENSORED
    if api is None:
        raise ContractError("API result required for a post missing from the front end")
    if api is ApiResult.PERMISSION_DENIED:
        return CensorshipStatus.CENSORED
    return CensorshipStatus.USER_DELETED


def schedule_checks(post: Post) -> list[float]:
    return [post.published_at + FIRST_CHECK_DELAY, post.published_at + SECOND_CHECK_DELAY]


@dataclass(frozen=True)
class Snapshot:
    post_id: str
    check_time: float
    frontend: FrontendCheck
    api: Optional[ApiResult] = None

    def __post_init__(self):
        if (self.api is not None) != (self.frontend is FrontendCheck.PAGE_GONE):
            raise ContractError(f"snapshot {self.post_id}: api present iff page gone")

    def to_record(self) -> dict:
        return {"post_id": self.post_id, "check_time": self.check_time,
                "frontend": self.frontend.value,
                "api": self.api.value if self.api is not None else None}

    @classmethod
    def from_record(cls, rec: dict) -> "Snapshot":
        api = rec.get("api")
        return cls(str(rec["post_id"]), float(rec["check_time"]),
                   FrontendCheck(rec["frontend"]),
                   ApiResult(api) if api is not None else None)


def write_snapshots(snapshots: Iterable[Snapshot], path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for snap in snapshots:
            fh.write(json.dumps(snap.to_record(), sort_keys=True) + "\n")


def read_snapshots(path) -> list[Snapshot]:
    with Path(path).open(encoding="utf-8") as fh:
        return [Snapshot.from_record(json.loads(line)) for line in fh if line.strip()]


def decode_snapshots(snapshots: Iterable[Snapshot]) -> dict[str, CensorshipStatus]:
    """Status per post id from a snapshot log.

    The earliest snapshot is the day-2 check and the latest the day-14 check;
    posts with fewer than two snapshots stay pending.
    """
    by_post: dict[str, list[Snapshot]] = {}
    for snap in snapshots:
        by_post.setdefault(snap.post_id, []).append(snap)
    out = {}
    for post_id, snaps in by_post.items():
        snaps.sort(key=lambda s: s.check_time)
        if len(snaps) < 2:
            out[post_id] = CensorshipStatus.PENDING
            continue
        first, last = snaps[0], snaps[-1]
        api = last.api if last.api is not None else first.api
        out[post_id] = decode_status(first.frontend, last.frontend, api)
    return out


def apply_statuses(corpus: Corpus, statuses: dict[str, CensorshipStatus]) -> Corpus:
    posts = [p.with_status(statuses.get(p.id, CensorshipStatus.PENDING)) for p in corpus.posts]
    return Corpus(posts, corpus.provenance)


class VirtualClock:
    """Simulated time in seconds; only moves when told to."""

    def __init__(self, start: float = 0.0):
        self._now = float(start)

    def now(self) -> float:
        return self._now

    def advance_to(self, t: float) -> None:
        if t < self._now:
            raise ValueError(f"clock cannot go back from {self._now} to {t}")
        self._now = float(t)


class Fate(str, enum.Enum):
    SURVIVES = "survives"
    SYSTEM_DELETE = "system_delete"
    USER_DELETE = "user_delete"


@dataclass(frozen=True)
class SimPost:
    post: Post
    fate: Fate = Fate.SURVIVES
    fate_time: Optional[float] = None

    def __post_init__(self):
        if self.fate is not Fate.SURVIVES:
            if self.fate_time is None or self.fate_time < self.post.published_at:
                raise ValueError(f"{self.post.id}: deletion time must be >= publication time")

    def live_at(self, t: float) -> bool:
        return self.fate is Fate.SURVIVES or t < self.fate_time

    def expected_status(self) -> CensorshipStatus:
        """What the two-check protocol should report for this post."""
        if self.fate is Fate.SURVIVES or self.fate_time >= self.post.published_at + SECOND_CHECK_DELAY:
            return CensorshipStatus.UNCENSORED
        if self.fate is Fate.SYSTEM_DELETE:
            return CensorshipStatus.CENSORED
        return CensorshipStatus.USER_DELETED


class PlatformSim:
    """In-process stand-in for the microblog platform.

    Posts appear on their keyword's topic timeline at publication and vanish
    for good at their scripted deletion time.
    """

    def __init__(self, posts: Sequence[SimPost], clock: Optional[VirtualClock] = None,
                 page_size: int = 20, frontend_failure_rate: float = 0.0, seed: int = 0):
        self.clock = clock or VirtualClock(min((p.post.published_at for p in posts), default=0.0))
        self.page_size = page_size
        self.frontend_failure_rate = frontend_failure_rate
        self._rng = np.random.default_rng(seed)
        self._posts = {p.post.id: p for p in posts}
        self._timelines: dict[str, list[tuple[float, str]]] = {}
        for p in posts:
            for kw in p.post.keywords:
                self._timelines.setdefault(kw, []).append((p.post.published_at, p.post.id))
        for tl in self._timelines.values():
            tl.sort()

    @property
    def posts(self) -> list[SimPost]:
        return list(self._posts.values())

    def topic_timeline(self, term: str, since: float = float("-inf")) -> list[Post]:
        """Newest-first page of live posts containing ``term``.

        Walking stops at ``since`` (the caller's previous poll); older posts on
        the page were already returned before.
        """
        now = self.clock.now()
        tl = self._timelines.get(term, [])
        hi = bisect.bisect_right(tl, now, key=lambda entry: entry[0])
        page = []
        for i in range(hi - 1, -1, -1):
            published, post_id = tl[i]
            if published <= since or len(page) >= self.page_size:
                break
            sp = self._posts[post_id]
            if sp.live_at(now):
                page.append(sp.post)
        return page

    def frontend_check(self, post_id: str) -> FrontendCheck:
        if self.frontend_failure_rate and self._rng.random() < self.frontend_failure_rate:
            raise TransientCheckError(post_id)
        live = self._posts[post_id].live_at(self.clock.now())
        return FrontendCheck.PAGE_EXISTS if live else FrontendCheck.PAGE_GONE

    def api_lookup(self, post_id: str) -> ApiResult:
        sp = self._posts[post_id]
        if sp.fate is Fate.USER_DELETE and not sp.live_at(self.clock.now()):
            return ApiResult.DOES_NOT_EXIST
        # live and system-deleted posts answer identically
        return ApiResult.PERMISSION_DENIED

    @classmethod
    def random(cls, n_posts: int, terms: Sequence[str], seed: int,
               censor_rate: float = 0.023, user_delete_rate: float = 0.05,
               start: float = 1_535_500_800.0, span: float = 30 * DAY,
               text_fn: Optional[Callable[[np.random.Generator, Fate], str]] = None,
               topics: Optional[dict[str, str]] = None, **kwargs) -> "PlatformSim":
        """Scripted platform with exactly ``round(rate * n)`` posts per deletion kind.

        System deletions mostly land within a day; user deletions are spread
        over three weeks, so some fall after the day-14 check.
        """
        rng = np.random.default_rng(seed)
        n_cens = int(round(censor_rate * n_posts))
        n_user = int(round(user_delete_rate * n_posts))
        order = rng.permutation(n_posts)
        fates = [Fate.SURVIVES] * n_posts
        for j in order[:n_cens]:
            fates[j] = Fate.SYSTEM_DELETE
        for j in order[n_cens:n_cens + n_user]:
            fates[j] = Fate.USER_DELETE
        published = np.sort(start + rng.uniform(0.0, span, size=n_posts))
        text_fn = text_fn or _placeholder_text
        posts = []
        for i in range(n_posts):
            term = terms[int(rng.integers(len(terms)))]
            fate = fates[i]
            t0 = float(np.round(published[i]))
            if fate is Fate.SYSTEM_DELETE:
                r = rng.random()
                if r < 0.3:
                    delay = rng.uniform(300.0, 1800.0)
                elif r < 0.9:
                    delay = rng.uniform(1800.0, DAY)
                else:
                    delay = rng.uniform(DAY, 13 * DAY)
            elif fate is Fate.USER_DELETE:
                delay = rng.uniform(600.0, 21 * DAY)
            else:
                delay = None
            text = text_fn(rng, fate)
            if term not in text:
                text = term + text
            post = Post(
                id=f"sim{i:06d}", text=text, published_at=t0,
                author_id=f"u{int(rng.integers(10_000)):05d}",
                follower_count=int(rng.lognormal(5.0, 1.5)),
                topic=(topics or {}).get(term, term), keywords=(term,),
            )
            posts.append(SimPost(post, fate, None if delay is None else float(np.round(t0 + delay))))
        return cls(posts, **kwargs)


def _placeholder_text(rng: np.random.Generator, fate: Fate) -> str:
    chars = "的一是在不了有和人这中大为上个国我以要他时来用们生到作地于出就分对成会可主发年动"
    n = int(rng.integers(8, 40))
    return "".join(chars[int(j)] for j in rng.integers(len(chars), size=n)) + "。"


@dataclass
class _Tracked:
    post: Post
    checks: list = field(default_factory=list)
    failed: bool = False


class Collector:
    """Polls topic timelines and runs the two-check protocol on a virtual clock."""

    def __init__(self, sim: PlatformSim, terms: Sequence[str],
                 poll_interval: float | tuple[float, float] = DEFAULT_POLL_BOUNDS,
                 interval_bounds: tuple[float, float] = DEFAULT_POLL_BOUNDS,
                 reject_patterns: Sequence[str] = DEFAULT_REJECT_PATTERNS, seed: int = 0):
        lo_hi = poll_interval if isinstance(poll_interval, tuple) else (poll_interval, poll_interval)
        lo, hi = float(lo_hi[0]), float(lo_hi[1])
        if not (interval_bounds[0] <= lo <= hi <= interval_bounds[1]):
            raise ValueError(f"poll interval {poll_interval} outside {interval_bounds}")
        self.sim = sim
        self.terms = list(terms)
        self.interval = (lo, hi)
        self.reject_patterns = reject_patterns
        self.snapshots: list[Snapshot] = []
        self.rejected = 0
        self._rng = np.random.default_rng(seed)
        self._tracked: dict[str, _Tracked] = {}
        self._last_poll: dict[str, float] = {}
        self._queue: list = []
        self._seq = itertools.count()

    def _push(self, t: float, kind: str, payload=None) -> None:
        heapq.heappush(self._queue, (t, next(self._seq), kind, payload))

    def _next_interval(self) -> float:
        lo, hi = self.interval
        return lo if lo == hi else float(self._rng.uniform(lo, hi))

    def _poll(self, now: float) -> None:
        for term in self.terms:
            since = self._last_poll.get(term, float("-inf"))
            for post in self.sim.topic_timeline(term, since):
                tracked = self._tracked.get(post.id)
                if tracked is not None:
                    if term not in tracked.post.keywords:
                        tracked.post = replace(tracked.post,
                                               keywords=tracked.post.keywords + (term,))
                    continue
                if not is_text_only(post.text, self.reject_patterns):
                    self.rejected += 1
                    continue
                self._tracked[post.id] = _Tracked(post)
                for t in schedule_checks(post):
                    self._push(t, "check", post.id)
            self._last_poll[term] = now
        self._push(now + self._next_interval(), "poll")

    def _check(self, post_id: str) -> None:
        tracked = self._tracked[post_id]
        if tracked.failed:
            return
        for attempt in range(2):
            try:
                frontend = self.sim.frontend_check(post_id)
                break
            except TransientCheckError:
                if attempt == 1:
                    logger.warning("front-end check failed twice for %s; dropping post", post_id)
                    tracked.failed = True
                    return
        api = self.sim.api_lookup(post_id) if frontend is FrontendCheck.PAGE_GONE else None
        snap = Snapshot(post_id, self.sim.clock.now(), frontend, api)
        tracked.checks.append(snap)
        self.snapshots.append(snap)

    def run(self, horizon: float) -> Corpus:
        """Simulate ``horizon`` seconds from the current clock time."""
        clock = self.sim.clock
        end = clock.now() + horizon
        self._push(clock.now(), "poll")
        while self._queue and self._queue[0][0] <= end:
            t, _, kind, payload = heapq.heappop(self._queue)
            clock.advance_to(t)
            if kind == "poll":
                self._poll(t)
            else:
                self._check(payload)
        clock.advance_to(end)
        return self.corpus()

    def corpus(self) -> Corpus:
        posts = []
        for tracked in self._tracked.values():
            if tracked.failed:
                continue
            if len(tracked.checks) == 2:
                first, second = tracked.checks
                status = decode_status(first.frontend, second.frontend,
                                       second.api if second.api is not None else first.api)
            else:
                status = CensorshipStatus.PENDING
            posts.append(tracked.post.with_status(status))
        posts.sort(key=lambda p: (p.published_at, p.id))
        return build_corpus(posts, "scraped", self.reject_patterns)


def run_collection(sim: PlatformSim, terms: Sequence[str],
                   poll_interval: float | tuple[float, float] = DEFAULT_POLL_BOUNDS,
                   horizon: float = 45 * DAY, seed: int = 0, **kwargs) -> Corpus:
    return Collector(sim, terms, poll_interval, seed=seed, **kwargs).run(horizon)
