#!/usr/bin/env python3
"""Energy and accuracy benchmarks: kernel table, suite table, sublinearity.

Reproduces the desk-scale analogs of the hardware benchmark tables and the
observation that composed structures cost less than the sum of their parts
when writes are allowed to shortcut.
"""

from dataclasses import replace

from ising_reram import (
    DeviceConfig,
    SolverConfig,
    kernel_energy_report,
    paper_instances,
    paper_suite,
    run_suite,
    sublinearity_check,
)

device = DeviceConfig()

print("=== Kernel write energies (50 trials) ===")
rows = kernel_energy_report(device, trials=50, seed=11)
print(f"{'kernel':10s} {'phase':18s} {'mean nJ':>8s} {'std nJ':>8s}")
for row in rows:
    print(f"{row.kernel:10s} {row.phase:18s} {row.mean_nj:8.3f} {row.std_nj:8.3f}")
means = {(r.kernel, r.phase): r.mean_nj for r in rows}
ratio = means[("core", "program-iteration")] / means[("1-inconn", "program-iteration")]
print(f"core/inconn column-flip ratio: {ratio:.2f} "
      f"(a core column holds two adjacencies, an inconn column one)")

print("\n=== Suite protocol: 4 instances x 10 runs x 10 iterations ===")
table = run_suite(paper_suite(), device, SolverConfig(), seed=2024)
print(f"{'instance':10s} {'iter acc':>9s} {'exec nJ':>9s} {'infer nJ':>9s} {'sat rate':>9s}")
for row in table:
    print(f"{row.instance:10s} {row.iter_acc:9.3f} {row.exec_energy_nj:9.2f} "
          f"{row.infer_energy_nj:9.3f} {row.sat_rate:9.2f}")

print("\n=== Sublinearity on 0-X ===")
measured, predicted = sublinearity_check(paper_instances()["0-X"], device, seed=5)
print(f"shortcut writes on : measured {measured:6.2f} nJ vs additive prediction "
      f"{predicted:6.2f} nJ (composition overestimates)")
measured, predicted = sublinearity_check(
    paper_instances()["0-X"], replace(device, shortcut_writes=False), seed=5
)
print(f"shortcut writes off: measured {measured:6.2f} nJ vs additive prediction "
      f"{predicted:6.2f} nJ (the gap is the shortcut discount)")
