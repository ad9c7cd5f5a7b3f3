"""Walk the RAN-J charging argument on the hand-built bad-slot instance.

    python demos/charging_ledger.py
"""
from barelyrandom.charging import charging_report
from barelyrandom.generators import bad_slot_example

inst, opt_trace = bad_slot_example()
led, cls, pairing, rep = charging_report(inst, opt_trace)
for slot, row in led.to_json().items():
    charges = ", ".join(f"{k}:{c['job']}({c['weight']})" for k, c in row["charges"].items())
    print(f"slot {slot} [{row['owner']}] accepted={row['accepted']} opt={row['opt']} "
          f"units={row['units']} {cls.kind.get(int(slot), '')}  {charges}")
for bad, good in pairing.pairs.items():
    print(f"bad slot {bad} (X, Y = {cls.bad[bad]}) paired with good slot {good}, "
          f"substep {pairing.substep[bad]}")
print(f"OPT {rep.opt} vs 1.5 * ({rep.val_a} + {rep.val_b}): ok={rep.ok}")
