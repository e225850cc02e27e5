"""Network node: radio mode/energy bookkeeping plus the network layer glue."""

from . import frames
from . import metrics as mt
from .channel import TX, RX, IDLE, SLEEP
from .energy import EnergyLedger
from .routing import AodvAgent, PendingPacket, MAX_HOPS


class Node:
    """One radio-equipped participant (station, server, or vehicle)."""

    def __init__(self, node_id, position, scheduler, channel, metrics,
                 energy_params=None, battery_powered=False, trace=None):
        self.node_id = node_id
        self.position = position
        self.scheduler = scheduler
        self.channel = channel
        self.metrics = metrics
        self.trace = trace
        self.battery_powered = battery_powered
        self.energy = (EnergyLedger(energy_params)
                       if energy_params is not None else None)
        self.mac = None              # attached by the engine
        self.agent = None
        self.app_receive = None      # callback(packet_id) on final delivery
        self.mode = IDLE
        self.listen_epoch = 0
        self._mode_since = scheduler.now
        channel.register(self)

    def attach(self, mac, mobile_ids=(), routing_rng=None,
               discovery_waits=None):
        self.mac = mac
        kwargs = {"mobile_ids": mobile_ids}
        if discovery_waits is not None:
            kwargs["discovery_waits"] = discovery_waits
        self.agent = AodvAgent(self, self.scheduler, routing_rng, **kwargs)

    # ---- radio mode / energy -------------------------------------------
    def set_mode(self, mode):
        if mode == self.mode:
            return
        self.flush_energy()
        leaving_listen = self.mode in (RX, IDLE)
        self.mode = mode
        if leaving_listen and mode in (TX, SLEEP):
            self.listen_epoch += 1
        if mode == SLEEP:
            self.channel.drop_listen_state(self.node_id)

    def flush_energy(self):
        """Charge the time spent in the current mode up to now."""
        now = self.scheduler.now
        if self.energy is not None:
            self.energy.account(self.mode, now - self._mode_since)
        self._mode_since = now

    def wants_sleep(self):
        return self.mac.wants_sleep()

    # ---- network layer ---------------------------------------------------
    def send_packet(self, packet_id, final_dest, payload_size):
        """Application-level send; the packet must already be registered."""
        self.agent.send_data(PendingPacket(packet_id, final_dest, payload_size))

    def on_frame_received(self, frame, rx_power):
        if frame.kind == frames.ROUTING:
            self.agent.on_routing_frame(frame, rx_power)
            return
        if frame.kind == frames.DATA:
            packet_id, _, final_dest = frame.body
            if final_dest == self.node_id:
                fresh = self.metrics.received(packet_id, self.scheduler.now,
                                              frame.hops + 1)
                if fresh and self.app_receive is not None:
                    self.app_receive(packet_id)
                if self.trace:
                    self.trace(self.scheduler.now, self.node_id, "APP",
                               "delivered", f"packet={packet_id}")
            elif frame.hops + 1 >= MAX_HOPS:
                # routing loop guard
                self.metrics.dropped(packet_id, mt.NO_ROUTE,
                                     self.scheduler.now)
            else:
                self.agent.send_data(PendingPacket(
                    packet_id, final_dest, frame.payload_size,
                    hops=frame.hops + 1))
        # CONTROL frames (schedule sync) carry no higher-layer payload

    # ---- drop plumbing ---------------------------------------------------
    def on_mac_drop(self, frame, reason):
        if frame.kind == frames.DATA:
            packet_id = frame.body[0]
            self.metrics.dropped(packet_id, reason, self.scheduler.now)
        if reason == mt.RETRY_EXCEEDED and not frame.is_broadcast:
            self.agent.on_link_break(frame.destination)
        if self.trace:
            self.trace(self.scheduler.now, self.node_id, "MAC", "drop",
                       f"{frame.kind} seq={frame.seq} reason={reason}")

    def on_network_drop(self, packet, reason):
        self.metrics.dropped(packet.packet_id, reason, self.scheduler.now)
        if self.trace:
            self.trace(self.scheduler.now, self.node_id, "NET", "drop",
                       f"packet={packet.packet_id} reason={reason}")
