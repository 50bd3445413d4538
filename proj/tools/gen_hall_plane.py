"""Writes the Hall plane of order 9 (translation plane over the nearfield of order 9)."""
import itertools
import sys

# GF(9) = GF(3)[i], i^2 = -1; element a + b i encoded as a + 3 b
def add(x, y):
    return (x % 3 + y % 3) % 3 + 3 * ((x // 3 + y // 3) % 3)

def fmul(x, y):
    a, b, c, d = x % 3, x // 3, y % 3, y // 3
    return (a * c - b * d) % 3 + 3 * ((a * d + b * c) % 3)

def fpow(x, k):
    r = 1
    for _ in range(k):
        r = fmul(r, x)
    return r

F = range(9)
squares = {fmul(x, x) for x in F if x}

def nmul(x, y):
    """Nearfield product: x*y if y is a square, x^3*y otherwise."""
    if y == 0:
        return 0
    return fmul(x, y) if y in squares else fmul(fpow(x, 3), y)

def build(mul):
    pts = {}
    for x, y in itertools.product(F, F):
        pts[("a", x, y)] = len(pts)
    for m in F:
        pts[("s", m)] = len(pts)
    pts[("inf",)] = len(pts)
    lines = []
    for m, b in itertools.product(F, F):
        lines.append(sorted([pts[("a", x, add(mul(x, m), b))] for x in F] + [pts[("s", m)]]))
    for c in F:
        lines.append(sorted([pts[("a", c, y)] for y in F] + [pts[("inf",)]]))
    lines.append(sorted([pts[("s", m)] for m in F] + [pts[("inf",)]]))
    return len(pts), lines

def is_plane(npts, lines):
    seen = set()
    for l in lines:
        for p in itertools.combinations(l, 2):
            if p in seen:
                return False
            seen.add(p)
    return len(seen) == npts * (npts - 1) // 2

def main():
    for mul in (nmul, lambda x, y: nmul(y, x)):
        npts, lines = build(mul)
        if is_plane(npts, lines):
            out = sys.stdout if len(sys.argv) < 2 else open(sys.argv[1], "w")
            out.write("plane 9\n")
            for l in lines:
                out.write(" ".join(map(str, l)) + "\n")
            return
    sys.exit("no valid multiplication order")

if __name__ == "__main__":
    main()
