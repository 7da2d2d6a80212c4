"""Two measures on the corners and the R-function that links them.

A diagram w carries a transition measure (masses at the minima) and a
signed Rayleigh measure (+1 at minima, -1 at maxima).  Both are
encoded in one rational function of q^x: the R-function.  Its product
form over the Rayleigh corners equals its partial-fraction form over
the transition atoms, and taking q-moments of the two measures gives
two sequences h_n and p_n tied by Newton-type recursions.  That pair
of facts determines each measure from the other.
"""

from qplancherel import (
    Partition,
    QParam,
    h_moments,
    h_to_p,
    markov_krein_residual,
    p_moments,
    p_to_h,
    r_diagram,
    r_measure,
    rayleigh_measure,
    to_interlacing,
    transition_measure,
)

qp = QParam(0.5)
w = to_interlacing(Partition((3, 1)))

print("== the two corner measures of lam = (3, 1) ==")
mu = transition_measure(w, qp)
tau = rayleigh_measure(w)
print("transition measure:")
for loc, mass in zip(mu.locations, mu.weights):
    print(f"  content {loc:+.0f}: {mass:.10f}")
print("Rayleigh measure:")
for loc, mass in zip(tau.locations, tau.weights):
    print(f"  content {loc:+.0f}: {mass:+.0f}")

print()
print("== one function, two routes ==")
for x in (4.0, 5.5, 8.0):
    via_corners = r_diagram(w, qp, x)
    via_atoms = r_measure(mu, qp, x)
    print(f"  x = {x}: corner product {via_corners:.12f}, "
          f"atom sum {via_atoms:.12f}, diff {abs(via_corners - via_atoms):.1e}")
grid = [w.support_max + 1.5 + j for j in range(4)]
print(f"  grid residual: {markov_krein_residual(w, mu, qp, grid):.3e}")

print()
print("== moment sequences and their conversions ==")
n_max = 6
h = h_moments(mu, qp, n_max)
p = p_moments(w, qp, n_max)
print(f"h (transition):  {tuple(round(v, 8) for v in h.values)}")
print(f"p (Rayleigh)  :  {tuple(round(v, 8) for v in p.values)}")
roundtrip = h_to_p(p_to_h(p))
print(f"p -> h -> p largest drift: "
      f"{max(abs(a - b) for a, b in zip(roundtrip.values, p.values)):.3e}")
converted = p_to_h(p)
print(f"p -> h vs direct h     : "
      f"{max(abs(a - b) for a, b in zip(converted.values, h.values)):.3e}")
