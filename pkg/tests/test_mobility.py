import math
import random

import pytest

from exhaustsim.mobility import (GridSpec, VehicleMotion, initial_motion,
                                 manhattan_step, place_base_stations)


def test_grid_lines_follow_station_lattice():
    grid = GridSpec()
    assert grid.lines == [100.0, 300.0, 500.0, 700.0, 900.0]
    with pytest.raises(ValueError):
        GridSpec(bounds=1000.0, spacing=300.0)


def test_station_placement_and_server():
    layout = place_base_stations(GridSpec(), 25)
    assert len(layout.stations) == 25
    assert layout.stations[0] == (100.0, 100.0)
    assert layout.stations[24] == (900.0, 900.0)
    # server is the lattice center
    assert layout.server_index == 12
    assert layout.stations[12] == (500.0, 500.0)
    with pytest.raises(ValueError):
        place_base_stations(GridSpec(), 24)


def test_initial_motion_starts_on_an_intersection():
    grid = GridSpec()
    motion = initial_motion(grid, 10.0, random.Random(5))
    assert motion.x in grid.lines and motion.y in grid.lines
    assert motion.heading in "NESW"
    assert motion.speed == 10.0


def test_vehicle_stays_on_streets():
    grid = GridSpec()
    rng = random.Random(11)
    motion = initial_motion(grid, 10.0, rng)
    lo, hi = grid.lines[0], grid.lines[-1]
    for _ in range(2000):
        motion = manhattan_step(motion, 0.1, grid, rng)
        on_x = any(abs(motion.x - c) < 1e-6 for c in grid.lines)
        on_y = any(abs(motion.y - c) < 1e-6 for c in grid.lines)
        assert on_x or on_y, (motion.x, motion.y)
        assert lo - 1e-9 <= motion.x <= hi + 1e-9
        assert lo - 1e-9 <= motion.y <= hi + 1e-9


def test_step_distance_matches_speed():
    grid = GridSpec()
    rng = random.Random(2)
    motion = VehicleMotion(x=500.0, y=400.0, heading="N", speed=10.0)
    moved = manhattan_step(motion, 1.0, grid, rng)
    # mid-block: no intersection within 10 m, straight travel
    assert (moved.x, moved.y) == (500.0, 410.0)
