# Arbitrary-precision reference values frozen into the Rust tests.
# Run: python3 mp_oracle.py
from mpmath import mp, mpf, sin, cos, exp, log, sqrt, quad, inf, pi, re, mpc

mp.dps = 40


def momentum_bracket(t, d, z, ph):
    w = d - z
    lead = -2 * sin(d * t) / d**2 + 2 * t / d + 2 * sin(z * t) / z**2 - 2 * t / z
    inner = mpc(0, 1) * cos(w * t) / (z * w) + sin(w * t) / (z * w) + t / z
    return lead + 4 * re(ph * inner)


def force_bracket(t, d, z, ph):
    w = d - z
    lead = 4 * sin(d * t / 2) ** 2 / d - 4 * sin(z * t / 2) ** 2 / z
    inner = -mpc(0, 1) * sin(w * t) / z + cos(w * t) / z + 1 / z
    return lead + 4 * re(ph * inner)


def averaged(d, z, omega, ph, gamma=1):
    gp = sqrt(gamma**2 + 2 * omega**2)
    f = lambda t: gp * exp(-gp * t) * force_bracket(t, d, z, ph)
    # split at oscillation periods for robustness
    period = 2 * pi / max(abs(d), z, abs(d - z))
    pts = [k * period for k in range(0, 4000)]
    return quad(f, pts) + quad(f, [pts[-1], inf])


print("momentum d=3 z=10 t=1 ph=1:", mp.nstr(momentum_bracket(mpf(1), mpf(3), mpf(10), 1), 20))
ph3 = exp(mpc(0, 1) * pi / 3)
print("momentum d=3 z=10 t=1 ph=e^{ipi/3}:", mp.nstr(momentum_bracket(mpf(1), mpf(3), mpf(10), ph3), 20))
print("force d=-2.5 z=12 t=0.7 ph=e^{ipi/3}:", mp.nstr(force_bracket(mpf('0.7'), mpf('-2.5'), mpf(12), ph3), 20))
for om in (mpf('0.5'), mpf(2)):
    for d in (mpf(3), mpf(-3)):
        print(f"averaged d={d} z=10 om={om} ph=1:", mp.nstr(averaged(d, mpf(10), om, 1), 20))
ph4 = exp(mpc(0, 1) * pi / 4)
print("averaged d=3 z=10 om=2 ph=e^{ipi/4}:", mp.nstr(averaged(mpf(3), mpf(10), mpf(2), ph4), 20))

# IR trap preset (stamper_kurn_1998), on axis, Gamma = 2*pi*1e7
g = 2 * pi * mpf(10) ** 7
d = mpf('1.3e15') / g
z = mpf('5.1e15') / g
om = mpf('367')
t1 = d / 2 * log(1 + 2 * om**2 / (d**2 + 1))
t2 = -z / 2 * log(1 + 2 * om**2 / (z**2 + 1))
w = d - z
t3 = -2 * (log(1 + 2 * om**2 / (w**2 + 1)) * (w**2 / (2 * z)) - 2 * om**2 / z)
print("SK term1,term2,term3:", mp.nstr(t1, 15), mp.nstr(t2, 15), mp.nstr(t3, 15))
print("SK correction ratio:", mp.nstr((t2 + t3) / t1, 15), " d/z:", mp.nstr(d / z, 15))
