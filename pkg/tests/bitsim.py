"""Independent discrete-event bit-forwarding oracle.

Store-and-forward simulation on a gateway-rooted forest: every SBS sources an
integer number of bits per slot, queues relay traffic, and each queued bit
advances exactly one hop per slot. The simulator counts every transmission a
bit consumes on its way to a gateway, so the realized "transmissions per
delivered bit" and per-node transmit rates come from bit bookkeeping, not
from any closed-form shortcut.
"""

from collections import defaultdict, deque


def simulate_bit_forwarding(parent, gateways, source_rates, slots):
    """Run the forwarding simulation.

    parent: dict node -> parent node (gateways absent or mapped to None)
    gateways: set of gateway nodes
    source_rates: dict node -> bits generated per slot (non-gateways)
    slots: number of time slots

    Returns (delivered_bits, delivered_hop_sum, tx_counts) where tx_counts[i]
    is the number of bit-transmissions node i performed.
    """
    gateways = set(gateways)
    queues = {v: deque() for v in parent}  # entries: (bits, hops_so_far)
    tx_counts = defaultdict(int)
    delivered_bits = 0
    delivered_hop_sum = 0
    for _ in range(slots):
        # new bits enter at the back of each source queue
        for v, rate in source_rates.items():
            if rate > 0:
                queues[v].append([rate, 0])
        # every node forwards its whole queue one hop (unbounded service)
        moves = []
        for v, q in queues.items():
            if not q or parent.get(v) is None:
                continue
            moved = list(q)
            q.clear()
            moves.append((v, moved))
        for v, chunks in moves:
            dst = parent[v]
            for bits, hops in chunks:
                tx_counts[v] += bits
                if dst in gateways:
                    delivered_bits += bits
                    delivered_hop_sum += bits * (hops + 1)
                else:
                    queues[dst].append([bits, hops + 1])
    return delivered_bits, delivered_hop_sum, dict(tx_counts)
