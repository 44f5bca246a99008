"""
Picking basis gates off simulated trajectories
===============================================

Simulates one qubit pair with a tunable coupler at a weak and a strong drive,
then compares the sqrt(iSWAP) baseline taken from the weak drive with the two
region criteria applied to the strong one.  Takes about 15 s on one core.
"""

from cartanbasis import hamsim, selector, weyl
from cartanbasis.fidelity import gate_coherence_limit
from cartanbasis.synth import min_layers

P = weyl.NAMED_POINTS
pair = hamsim.biased(hamsim.DEFAULT_PAIR)
print(f"zero-ZZ coupler bias: {pair.omega_c0 / hamsim.GHZ:.4f} GHz")

weak = hamsim.simulate_xi(pair, 0.005, selector.default_t_max(0.005))
strong = hamsim.simulate_xi(pair, 0.04, selector.default_t_max(0.04))
print(f"first perfect entangler: {hamsim.first_perfect_entangler(weak) * 1e9:.0f} ns (xi=0.005), "
      f"{hamsim.first_perfect_entangler(strong) * 1e9:.0f} ns (xi=0.04)")

for crit, traj in (("baseline", weak), ("criterion1", strong), ("criterion2", strong)):
    a = selector.select_basis(traj, crit)
    d = a.duration * 1e9
    n_swap = min_layers(P["SWAP"], a.coordinate)
    n_cnot = min_layers(P["CNOT"], a.coordinate)
    c = a.coordinate
    print(f"{crit:11s} {d:6.1f} ns at ({c.tx:.3f}, {c.ty:.3f}, {c.tz:.3f}) "
          f"leakage {a.sample.leakage:.1e}; SWAP x{n_swap}, CNOT x{n_cnot}; "
          f"F_basis {100 * gate_coherence_limit(a.duration):.3f}%")
