"""Builds one simulation from a scenario + seed and runs it to completion."""

from .channel import Channel
from .core import Scheduler, RngStreams
from .mac import build_mac
from .metrics import MetricsCollector
from .mobility import GridSpec, initial_motion, manhattan_step, place_base_stations
from .node import Node
from .routing import DISCOVERY_WAITS
from .traffic import AlertTracker, EmissionSource, generate_cbr
from .energy import project_lifetime


class Simulation:
    """One deterministic run: fixed scenario, fixed seed."""

    def __init__(self, scenario, seed, trace=None):
        self.scenario = scenario
        self.seed = seed
        self.trace = trace
        self.scheduler = Scheduler()
        self.rngs = RngStreams(seed)
        self.metrics = MetricsCollector()
        self.channel = Channel(self.scheduler, scenario.channel_params(),
                               metrics=self.metrics, trace=trace)
        self.grid = GridSpec(bounds=scenario.area,
                             spacing=scenario.station_spacing)
        layout = place_base_stations(self.grid, scenario.stations)
        self.server_id = layout.server_index
        self.station_ids = list(range(scenario.stations))
        self.vehicle_ids = list(range(scenario.stations,
                                      scenario.stations + scenario.vehicles))

        energy_params = scenario.energy_params()
        self.nodes = {}
        for nid in self.station_ids:
            self.nodes[nid] = Node(nid, layout.stations[nid], self.scheduler,
                                   self.channel, self.metrics, trace=trace)
        self.motions = {}
        for nid in self.vehicle_ids:
            motion = initial_motion(self.grid, scenario.speed,
                                    self.rngs.stream("mobility"))
            self.motions[nid] = motion
            self.nodes[nid] = Node(nid, (motion.x, motion.y), self.scheduler,
                                   self.channel, self.metrics,
                                   energy_params=energy_params,
                                   battery_powered=True, trace=trace)

        configs = scenario.mac_configs(node_ids=sorted(self.nodes))
        mobile = frozenset(self.vehicle_ids)
        # high-latency duty-cycled links need proportionally longer
        # route-reply waits
        waits = None
        if scenario.mac == "smac":
            scale = max(1.0, 2.0 * configs.smac.period)
            waits = tuple(w * scale for w in DISCOVERY_WAITS)
        smac_phase_rng = self.rngs.stream("smac-phase")
        phases = {}
        for nid in sorted(self.nodes):
            node = self.nodes[nid]
            mac = build_mac(scenario.mac, node, self.channel, self.scheduler,
                            self.rngs.stream(f"mac/{nid}"), configs)
            node.attach(mac, mobile_ids=mobile,
                        routing_rng=self.rngs.stream(f"route/{nid}"),
                        discovery_waits=waits)
            if scenario.mac == "smac":
                phases[nid] = smac_phase_rng.uniform(0.0, configs.smac.period)
                mac.phase = phases[nid]
        if scenario.mac == "smac":
            for nid in sorted(self.nodes):
                self.nodes[nid].mac.phases = phases

        self.alerts = AlertTracker(scenario.alert_policy())
        self.readings = {}     # packet id -> EmissionReading
        self._next_packet_id = 0
        server = self.nodes[self.server_id]
        server.app_receive = self._server_receive

        self._sources = {
            nid: EmissionSource(nid, self.rngs.stream(f"emissions/{nid}"),
                                dirty=scenario.emission_profile == "dirty")
            for nid in self.vehicle_ids
        }

    # ---- event wiring ------------------------------------------------------
    def _schedule_all(self):
        s = self.scenario
        for nid in sorted(self.nodes):
            self.nodes[nid].mac.start()
        for nid in self.vehicle_ids:
            self.scheduler.schedule(s.mobility_tick,
                                    lambda v=nid: self._move(v),
                                    target=nid, kind="mobility")
            for t in generate_cbr(s.cbr_config(), s.duration):
                self.scheduler.schedule(t, lambda v=nid: self._emit(v),
                                        target=nid, kind="app-send")
            self.scheduler.schedule(s.energy_sample,
                                    lambda v=nid: self._sample_energy(v),
                                    target=nid, kind="energy-sample")

    def _move(self, vehicle_id):
        s = self.scenario
        motion = manhattan_step(self.motions[vehicle_id], s.mobility_tick,
                                self.grid, self.rngs.stream("mobility"))
        self.motions[vehicle_id] = motion
        self.nodes[vehicle_id].position = (motion.x, motion.y)
        nxt = self.scheduler.now + s.mobility_tick
        if nxt <= s.duration:
            self.scheduler.schedule(nxt, lambda: self._move(vehicle_id),
                                    target=vehicle_id, kind="mobility")

    def _emit(self, vehicle_id):
        now = self.scheduler.now
        reading = self._sources[vehicle_id].read(now)
        packet_id = self._next_packet_id
        self._next_packet_id += 1
        self.readings[packet_id] = reading
        self.metrics.register(packet_id, now)
        self.nodes[vehicle_id].send_packet(packet_id, self.server_id,
                                           self.scenario.payload_bytes)

    def _server_receive(self, packet_id):
        reading = self.readings.get(packet_id)
        if reading is not None:
            self.alerts.ingest(reading)

    def _sample_energy(self, vehicle_id):
        node = self.nodes[vehicle_id]
        node.flush_energy()
        node.energy.sample(self.scheduler.now)
        nxt = self.scheduler.now + self.scenario.energy_sample
        if nxt <= self.scenario.duration:
            self.scheduler.schedule(nxt, lambda: self._sample_energy(vehicle_id),
                                    target=vehicle_id, kind="energy-sample")

    # ---- run ----------------------------------------------------------------
    def run(self):
        self._schedule_all()
        self.scheduler.run(until=self.scenario.duration)
        for node in self.nodes.values():
            node.flush_energy()
        return self.summary()

    def summary(self):
        s = self.scenario
        out = {
            "scenario": s.name,
            "mac": s.mac,
            "seed": self.seed,
            "duration": s.duration,
            "packets": self.metrics.summary(),
            "collisions": self.channel.collisions,
            "energy": {},
            "alerts": {
                str(v): self.alerts.decisions.get(v, "NONE")
                for v in self.vehicle_ids
            },
        }
        for nid in self.vehicle_ids:
            ledger = self.nodes[nid].energy
            lifetime = project_lifetime(ledger, s.duration)
            out["energy"][str(nid)] = {
                "initial_j": ledger.params.initial,
                "residual_j": ledger.residual,
                "consumed_j": dict(ledger.consumed),
                "projected_lifetime_s": lifetime,
            }
        return out


def run_simulation(scenario, seed, trace=None):
    return Simulation(scenario, seed, trace=trace).run()
