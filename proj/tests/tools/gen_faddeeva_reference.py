"""Regenerate tests/data/faddeeva_reference.inc with mpmath at 40 digits."""
import math
import mpmath as mp

mp.mp.dps = 40


def w(z):
    z = mp.mpc(z)
    return mp.exp(-z * z) * mp.erfc(-1j * z)


radii = [0.0, 1e-3, 0.1, 0.5, 1.0, 2.0, 3.5, 5.0, 7.9, 8.1, 10.0, 15.0, 30.0, 100.0, 1e3, 1e4]
angles = [0, 1, 10, 30, 45, 60, 80, 90, 100, 135, 170, 179, 180]
lower = [(r, a) for r in (0.5, 1.0, 2.0, 5.0, 9.0, 20.0) for a in (-1, -10, -30, -60, -90, -120, -170)]

points = []
for r in radii:
    for a in angles:
        th = math.radians(a)
        z = complex(r * math.cos(th), r * math.sin(th))
        z = complex(z.real, max(z.imag, 0.0))
        if a in (0, 180):
            z = complex(z.real, 0.0)
        points.append(z)
        if r == 0.0:
            break
for r, a in lower:
    th = math.radians(a)
    points.append(complex(r * math.cos(th), r * math.sin(th)))

with open("tests/data/faddeeva_reference.inc", "w") as out:
    out.write("// z.re, z.im, w.re, w.im  (mpmath, 40 digits)\n")
    for z in points:
        v = w(z)
        v = mp.mpc(v.real if abs(v.real) > mp.mpf('1e-300') else 0, v.imag)
        out.write("{%r, %r, %s, %s},\n" % (z.real, z.imag, mp.nstr(v.real, 20), mp.nstr(v.imag, 20)))
