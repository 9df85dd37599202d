# Two-sided Student-t tail probabilities by direct quadrature of the density.
import mpmath as mp

mp.mp.dps = 40
T = ["0.05", "0.1", "0.25", "0.5", "0.75", "1", "1.25", "1.5", "2", "2.5",
     "3", "3.5", "4", "5", "6", "8", "10", "15", "25", "50"]
DOF = ["1", "1.5", "2", "2.5", "3", "4", "5", "6", "7.3", "8",
       "10", "12.5", "15", "20", "30", "45", "60", "100", "250", "1000"]


def density(x, v):
    c = mp.gamma((v + 1) / 2) / (mp.sqrt(v * mp.pi) * mp.gamma(v / 2))
    return c * (1 + x * x / v) ** (-(v + 1) / 2)


print("t,dof,p")
for t in T:
    for v in DOF:
        tt, vv = mp.mpf(t), mp.mpf(v)
        p = 2 * mp.quad(lambda x: density(x, vv), [tt, tt + 1, tt + 10, tt + 100, mp.inf])
        print(f"{t},{v},{mp.nstr(p, 20)}")
