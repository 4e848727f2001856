"""Deterministic discrete-event kernel: logical time, ordered events,
counter-based random streams and cooperative logical processes.

Time is a single unsigned integer cycle counter (1 cycle = 1 ns by
convention; bandwidths and latencies are converted to cycles at config
load).  Events are totally ordered by (time, class, sequence) so that a
given configuration and seed always replays the exact same dispatch order,
on any host.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable, Generator, Optional

MASK64 = (1 << 64) - 1

# Priority classes for same-cycle ordering.  Fault injection manipulates a
# cycle's traffic before delivery; protocol actions run before application
# wakeups.
class EventClass(IntEnum):
    FAULT = 0
    NETWORK = 1
    PROTOCOL = 2
    APPLICATION = 3


class SimulationError(Exception):
    """Fatal simulation error (bad configuration or aborted run)."""


@dataclass(frozen=True)
class Event:
    at: int
    klass: EventClass
    seq: int
    label: str


@dataclass
class RunStats:
    events_dispatched: int
    final_time: int


def mix64(x: int) -> int:
    """64-bit finalizer with full avalanche (splitmix64 style); bijective."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return (x ^ (x >> 31)) & MASK64


_KEY_TWEAK = 0x9E3779B97F4A7C15


def stream_value(seed: int, key: int, counter: int) -> int:
    """The raw generator: a pure function of (seed, key, counter).

    Three chained bijective mixes guarantee that two streams with distinct
    keys (same seed and counter) can never collide, and that consecutive
    counters decorrelate fully.
    """
    x = mix64(seed)
    x = mix64(x ^ mix64((key ^ _KEY_TWEAK) & MASK64))
    return mix64(x ^ (counter & MASK64))


def key_of(label: str) -> int:
    """Stable 64-bit key for a string label (independent of PYTHONHASHSEED)."""
    h = 0xCBF29CE484222325
    for b in label.encode("utf-8"):
        h = ((h ^ b) * 0x100000001B3) & MASK64
    return h


class RngStream:
    """Counter-based random stream.

    Draws depend only on (master seed, key, counter) -- never on scheduling
    order -- so values are identical across runs and across partitionings
    of the same workload.
    """

    __slots__ = ("seed", "key", "counter")

    def __init__(self, seed: int, key: int, counter: int = 0):
        self.seed = seed & MASK64
        self.key = key & MASK64
        self.counter = counter

    def draw(self) -> int:
        value = stream_value(self.seed, self.key, self.counter)
        self.counter += 1
        return value

    def uniform(self) -> float:
        """Float in [0, 1) with 53 random bits."""
        return (self.draw() >> 11) * (2.0 ** -53)

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n).  Modulo bias is negligible (n << 2^64)."""
        return self.draw() % n

    def at(self, counter: int) -> int:
        """Peek the value at an absolute counter without disturbing state."""
        return stream_value(self.seed, self.key, counter)


# Requests yielded by logical processes.
@dataclass(frozen=True)
class _Sleep:
    dt: int


@dataclass(frozen=True)
class _WaitGate:
    gate: "Gate"


class Gate:
    """Wake-up point for blocked logical processes (FIFO wake order)."""

    __slots__ = ("_kernel", "_waiters", "label")

    def __init__(self, kernel: "Kernel", label: str = ""):
        self._kernel = kernel
        self._waiters: deque[Proc] = deque()
        self.label = label

    def _add(self, proc: "Proc") -> None:
        self._waiters.append(proc)

    def fire(self) -> None:
        """Wake every waiting process (they re-check their condition)."""
        while self._waiters:
            proc = self._waiters.popleft()
            if proc.alive:
                self._kernel._schedule_resume(proc)


class Proc:
    """A resumable logical process driven by the kernel.

    The body is a generator that yields wait requests (sleep / gate).  A
    suspended process consumes no events; only the kernel ever resumes it.
    """

    __slots__ = ("name", "gen", "alive", "done", "done_gate", "_kernel")

    def __init__(self, kernel: "Kernel", gen: Generator, name: str):
        self._kernel = kernel
        self.gen = gen
        self.name = name
        self.alive = True
        self.done = False
        self.done_gate = Gate(kernel, f"done:{name}")

    def kill(self) -> None:
        """Stop the process permanently; pending wakeups are discarded."""
        self.alive = False
        self.gen.close()


class Kernel:
    """Event queue, clock and process scheduler for one simulation instance.

    One instance is confined to a single thread of execution; independent
    instances share no mutable state.
    """

    def __init__(self, seed: int = 0, tie_salt: Optional[int] = None):
        self._now = 0
        self._seq = 0
        self._heap: list = []
        self._dispatched = 0
        self.seed = seed & MASK64
        # Test-only knob: permutes dispatch order of same-(time, class)
        # events.  Kahn-determinism checks rely on values being invariant
        # under any such legal reordering.
        self._tie_salt = tie_salt
        self.tracer = None  # set by the run assembler

    def now(self) -> int:
        return self._now

    def stream(self, key) -> RngStream:
        """Random stream registered under the master seed.

        `key` may be an int or a string label (hashed stably).
        """
        if isinstance(key, str):
            key = key_of(key)
        return RngStream(self.seed, key)

    def schedule(self, at: int, klass: EventClass, action: Callable[[], None],
                 label: str = "") -> Event:
        if at < self._now:
            raise SimulationError(
                f"event '{label}' scheduled in the past (at={at}, now={self._now})")
        seq = self._seq
        self._seq += 1
        if self._tie_salt is None:
            order = seq
        else:
            order = mix64(seq ^ self._tie_salt)
        heapq.heappush(self._heap, (at, int(klass), order, seq, action, label))
        return Event(at, klass, seq, label)

    def after(self, dt: int, klass: EventClass, action: Callable[[], None],
              label: str = "") -> Event:
        return self.schedule(self._now + dt, klass, action, label)

    def run_until(self, t_end: int) -> RunStats:
        """Dispatch every event with time <= t_end in total order.

        The clock ends at t_end, so successive run_until calls compose into
        one longer run.
        """
        dispatched = 0
        heap = self._heap
        while heap and heap[0][0] <= t_end:
            at, _klass, _order, seq, action, label = heapq.heappop(heap)
            if at < self._now:
                raise SimulationError("event queue delivered out of order")
            self._now = at
            try:
                action()
            except SimulationError:
                raise
            except Exception as exc:
                raise SimulationError(
                    f"event '{label}' (t={at}, seq={seq}) raised {exc!r}") from exc
            dispatched += 1
        if t_end > self._now:
            self._now = t_end
        self._dispatched += dispatched
        return RunStats(dispatched, self._now)

    # -- logical processes ------------------------------------------------

    def spawn(self, gen: Generator, name: str) -> Proc:
        """Register a logical process and schedule its first resumption now."""
        proc = Proc(self, gen, name)
        self._schedule_resume(proc)
        return proc

    def _schedule_resume(self, proc: Proc) -> None:
        self.schedule(self._now, EventClass.APPLICATION,
                      lambda: self._resume(proc), f"resume:{proc.name}")

    def _resume(self, proc: Proc) -> None:
        if not proc.alive:
            return
        try:
            request = next(proc.gen)
        except StopIteration:
            proc.done = True
            proc.alive = False
            proc.done_gate.fire()
            return
        if isinstance(request, _Sleep):
            self.schedule(self._now + request.dt, EventClass.APPLICATION,
                          lambda: self._resume(proc), f"wake:{proc.name}")
        elif isinstance(request, _WaitGate):
            request.gate._add(proc)
        else:
            raise SimulationError(
                f"process '{proc.name}' yielded unknown request {request!r}")


def sleep(dt: int):
    """Yieldable: suspend the calling process for dt cycles."""
    yield _Sleep(dt)


def wait(gate: Gate):
    """Yieldable: suspend until the gate fires (re-check conditions after)."""
    yield _WaitGate(gate)
