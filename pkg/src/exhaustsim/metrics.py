"""End-to-end packet ledger and summary statistics."""

from dataclasses import dataclass

# terminal drop reasons
IFQ_OVERFLOW = "ifq-overflow"
RETRY_EXCEEDED = "retry-exceeded"
CHANNEL_ACCESS_FAILURE = "channel-access-failure"
NO_ROUTE = "no-route"
COLLISION = "collision-corruption"
# unacknowledged MACs (TDMA, SMAC) lose frames silently when the next hop
# is asleep or out of range; kept as its own reason for diagnosability
MISSED_RECEIVER = "missed-receiver"

DROP_REASONS = (IFQ_OVERFLOW, RETRY_EXCEEDED, CHANNEL_ACCESS_FAILURE,
                NO_ROUTE, COLLISION, MISSED_RECEIVER)

RECEIVED = "received"
DROPPED = "dropped"
IN_FLIGHT = "in-flight"


@dataclass
class PacketRecord:
    packet_id: int
    send_time: float
    outcome: str = IN_FLIGHT
    recv_time: float = None
    drop_reason: str = None
    drop_time: float = None
    hops: int = 0

    @property
    def delay(self):
        if self.outcome != RECEIVED:
            return None
        return self.recv_time - self.send_time


def pdr(received, dropped):
    """Packet delivery ratio; None marks the undefined empty case."""
    total = received + dropped
    if total == 0:
        return None
    return received / total


def transmitted_fraction(attempted, possible):
    """Share of the offered load that reached a terminal outcome."""
    if possible <= 0:
        raise ValueError("possible packet count must be positive")
    return attempted / possible


def delay_stats(records):
    """(min, max, mean) end-to-end delay over received packets, or None."""
    delays = [r.delay for r in records if r.outcome == RECEIVED]
    if not delays:
        return None
    return (min(delays), max(delays), sum(delays) / len(delays))


class MetricsCollector:
    """Passive sink: every generated packet ends up with exactly one outcome."""

    def __init__(self):
        self.records = {}      # packet id -> PacketRecord
        self.order = []

    def register(self, packet_id, send_time):
        if packet_id in self.records:
            raise ValueError(f"duplicate packet id {packet_id}")
        rec = PacketRecord(packet_id=packet_id, send_time=send_time)
        self.records[packet_id] = rec
        self.order.append(packet_id)
        return rec

    def received(self, packet_id, recv_time, hops):
        rec = self.records[packet_id]
        if rec.outcome != IN_FLIGHT:
            return False   # duplicate delivery of an already-settled packet
        rec.outcome = RECEIVED
        rec.recv_time = recv_time
        rec.hops = hops
        return True

    def dropped(self, packet_id, reason, drop_time):
        if reason not in DROP_REASONS:
            raise ValueError(f"unknown drop reason {reason}")
        rec = self.records[packet_id]
        if rec.outcome != IN_FLIGHT:
            return False
        rec.outcome = DROPPED
        rec.drop_reason = reason
        rec.drop_time = drop_time
        return True

    def iter_records(self):
        for pid in self.order:
            yield self.records[pid]

    def summary(self):
        received = sum(1 for r in self.records.values() if r.outcome == RECEIVED)
        dropped = sum(1 for r in self.records.values() if r.outcome == DROPPED)
        in_flight = len(self.records) - received - dropped
        reasons = {reason: 0 for reason in DROP_REASONS}
        for r in self.records.values():
            if r.outcome == DROPPED:
                reasons[r.drop_reason] += 1
        stats = delay_stats(list(self.records.values()))
        return {
            "generated": len(self.records),
            "received": received,
            "dropped": dropped,
            "in_flight": in_flight,
            "drop_reasons": reasons,
            "pdr": pdr(received, dropped),
            "transmitted_fraction": (
                transmitted_fraction(received + dropped, len(self.records))
                if self.records else None),
            "delay_min": stats[0] if stats else None,
            "delay_max": stats[1] if stats else None,
            "delay_avg": stats[2] if stats else None,
        }
