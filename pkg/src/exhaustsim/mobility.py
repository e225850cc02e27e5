"""Base-station lattice placement and Manhattan-grid vehicle mobility."""

import math
from dataclasses import dataclass, replace


def distance(a, b):
    """Euclidean distance between two (x, y) positions in meters."""
    return math.hypot(a[0] - b[0], a[1] - b[1])


@dataclass(frozen=True)
class GridSpec:
    """Street grid for the simulation area.

    Streets run through the station lattice: with the default 200 m spacing
    on a 1000 m square, streets sit at 100, 300, 500, 700 and 900 m on both
    axes and the vehicle stays on the [100, 900] part of the map.
    """

    bounds: float = 1000.0
    spacing: float = 200.0

    def __post_init__(self):
        blocks = self.bounds / self.spacing
        if abs(blocks - round(blocks)) > 1e-9:
            raise ValueError(
                f"street spacing {self.spacing} does not divide area bounds {self.bounds}"
            )

    @property
    def lines(self):
        """Coordinates of the grid streets on each axis."""
        n = int(round(self.bounds / self.spacing))
        return [(i + 0.5) * self.spacing for i in range(n)]


@dataclass(frozen=True)
class BaseStationLayout:
    stations: tuple  # positions, row-major
    server_index: int


def place_base_stations(grid, count=25):
    """Place `count` stations on a uniform square lattice.

    Stations sit at ((i+0.5)*s, (j+0.5)*s); the server is the station
    nearest the area center.
    """
    side = math.isqrt(count)
    if side * side != count:
        raise ValueError(f"station count {count} is not a perfect square")
    s = grid.bounds / side
    stations = tuple(
        ((i + 0.5) * s, (j + 0.5) * s) for j in range(side) for i in range(side)
    )
    center = (grid.bounds / 2.0, grid.bounds / 2.0)
    server = min(range(count), key=lambda k: (distance(stations[k], center), k))
    return BaseStationLayout(stations=stations, server_index=server)


HEADINGS = {"N": (0.0, 1.0), "E": (1.0, 0.0), "S": (0.0, -1.0), "W": (-1.0, 0.0)}
_LEFT = {"N": "W", "W": "S", "S": "E", "E": "N"}
_RIGHT = {"N": "E", "E": "S", "S": "W", "W": "N"}

P_STRAIGHT = 0.5
P_LEFT = 0.25
P_RIGHT = 0.25


@dataclass(frozen=True)
class VehicleMotion:
    x: float
    y: float
    heading: str  # one of N/E/S/W
    speed: float  # m/s


def _snap(value, lines):
    return min(lines, key=lambda c: abs(c - value))


def initial_motion(grid, speed, rng):
    """Random starting state: a random intersection and legal heading."""
    lines = grid.lines
    x = rng.choice(lines)
    y = rng.choice(lines)
    motion = VehicleMotion(x=x, y=y, heading="N", speed=speed)
    heading = _choose_heading(motion, grid, rng, straight_ok=True)
    return replace(motion, heading=heading)


def _legal_headings(x, y, grid):
    lines = grid.lines
    lo, hi = lines[0], lines[-1]
    legal = []
    for h, (dx, dy) in HEADINGS.items():
        nx, ny = x + dx, y + dy
        if lo - 1e-9 <= nx <= hi + 1e-9 and lo - 1e-9 <= ny <= hi + 1e-9:
            legal.append(h)
    return legal


def _choose_heading(motion, grid, rng, straight_ok=True):
    """Turn decision at an intersection.

    Straight keeps p=0.5, left/right 0.25 each; directions leading off the
    street network get zero probability and the rest is renormalized.
    Reversing is never chosen while another option exists.
    """
    legal = set(_legal_headings(motion.x, motion.y, grid))
    weights = []
    options = []
    head = motion.heading
    for h, p in ((head, P_STRAIGHT), (_LEFT[head], P_LEFT), (_RIGHT[head], P_RIGHT)):
        if h in legal:
            options.append(h)
            weights.append(p)
    if not options:
        # dead end: reverse
        back = _LEFT[_LEFT[head]]
        return back
    total = sum(weights)
    u = rng.random() * total
    acc = 0.0
    for h, p in zip(options, weights):
        acc += p
        if u < acc:
            return h
    return options[-1]


def _next_intersection_distance(motion, grid):
    """Distance along the current heading to the next grid intersection."""
    lines = grid.lines
    dx, dy = HEADINGS[motion.heading]
    if dx != 0:
        coord, direction = motion.x, dx
    else:
        coord, direction = motion.y, dy
    if direction > 0:
        candidates = [c for c in lines if c > coord + 1e-9]
        return (candidates[0] - coord) if candidates else math.inf
    candidates = [c for c in lines if c < coord - 1e-9]
    return (coord - candidates[-1]) if candidates else math.inf


def manhattan_step(motion, dt, grid, rng):
    """Advance the vehicle speed*dt along its street, turning at intersections."""
    remaining = motion.speed * dt
    x, y, heading = motion.x, motion.y, motion.heading
    lines = grid.lines
    on_x_line = any(abs(x - c) < 1e-6 for c in lines)
    on_y_line = any(abs(y - c) < 1e-6 for c in lines)
    at_intersection = on_x_line and on_y_line
    cur = VehicleMotion(x=x, y=y, heading=heading, speed=motion.speed)
    while remaining > 1e-12:
        if at_intersection:
            new_heading = _choose_heading(cur, grid, rng)
            cur = replace(cur, heading=new_heading)
        d_next = _next_intersection_distance(cur, grid)
        step = min(remaining, d_next)
        dx, dy = HEADINGS[cur.heading]
        cur = replace(cur, x=cur.x + dx * step, y=cur.y + dy * step)
        remaining -= step
        at_intersection = step >= d_next - 1e-12
        if at_intersection:
            # snap to the exact intersection to avoid float drift
            cur = replace(cur, x=_snap(cur.x, lines), y=_snap(cur.y, lines))
    return cur
