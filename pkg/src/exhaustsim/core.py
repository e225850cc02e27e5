"""Deterministic event scheduler, simulation clock and seeded random streams."""

import heapq
import random


class SimulationError(Exception):
    """Fatal logic error inside a simulation run."""


class SimEvent:
    """A timestamped unit of simulated work.

    Events are totally ordered by (time, seq); seq is the schedule order,
    so equal-time events fire in the order they were scheduled.
    """

    __slots__ = ("time", "seq", "target", "kind", "fn", "cancelled")

    def __init__(self, time, seq, target, kind, fn):
        self.time = time
        self.seq = seq
        self.target = target
        self.kind = kind
        self.fn = fn
        self.cancelled = False

    def __lt__(self, other):
        return (self.time, self.seq) < (other.time, other.seq)

    def __repr__(self):
        return f"SimEvent(t={self.time:.6f}, seq={self.seq}, {self.kind}@{self.target})"


class Scheduler:
    """Single-threaded deterministic event loop."""

    def __init__(self):
        self.now = 0.0
        self._heap = []
        self._seq = 0

    def schedule(self, time, fn, target=None, kind="event"):
        """Enqueue a callback at an absolute simulated time.

        Scheduling in the past is a fatal logic error.
        Returns the event, which doubles as a cancellation handle.
        """
        if time < self.now:
            raise SimulationError(
                f"scheduled event at t={time} before current clock t={self.now}"
            )
        ev = SimEvent(time, self._seq, target, kind, fn)
        self._seq += 1
        heapq.heappush(self._heap, ev)
        return ev

    def schedule_in(self, delay, fn, target=None, kind="event"):
        return self.schedule(self.now + delay, fn, target=target, kind=kind)

    def cancel(self, event):
        """Cancel a pending event. Returns False if already fired or cancelled."""
        if event is None or event.cancelled or event.fn is None:
            return False
        event.cancelled = True
        return True

    def advance(self):
        """Pop the minimal (time, seq) event and move the clock to it.

        Returns None when the queue is empty (simulation complete).
        """
        while self._heap:
            ev = heapq.heappop(self._heap)
            if ev.cancelled:
                continue
            self.now = ev.time
            fn, ev.fn = ev.fn, None  # mark as fired
            ev.fn = None
            return ev, fn
        return None

    def run(self, until=None):
        """Dispatch events in order, stopping after the horizon if given."""
        while True:
            item = self.advance()
            if item is None:
                return
            ev, fn = item
            if until is not None and ev.time > until:
                self.now = until
                return
            fn()

    def pending(self):
        return sum(1 for ev in self._heap if not ev.cancelled)


class RngStreams:
    """Named deterministic random streams derived from one master seed.

    Identical (master seed, stream id, call count) always yields identical
    output; each component draws from its own stream so that, for example,
    changing the MAC protocol under test cannot perturb the mobility trace.
    """

    def __init__(self, master_seed):
        self.master_seed = master_seed
        self._streams = {}

    def stream(self, stream_id):
        rng = self._streams.get(stream_id)
        if rng is None:
            # string seeding hashes via sha512: stable across processes
            rng = random.Random(f"{self.master_seed}/{stream_id}")
            self._streams[stream_id] = rng
        return rng
