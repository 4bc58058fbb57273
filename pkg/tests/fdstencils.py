"""Fourth-order central finite-difference stencils, used as derivative
oracles that stay independent of the Cauchy-circle code path."""

D1_OFFSETS = (-2, -1, 1, 2)
D1_WEIGHTS = (1 / 12, -8 / 12, 8 / 12, -1 / 12)

D3_OFFSETS = (-3, -2, -1, 1, 2, 3)
D3_WEIGHTS = (1 / 8, -1.0, 13 / 8, -13 / 8, 1.0, -1 / 8)


def fd_first(f, x, h):
    return sum(w * f(x + k * h) for k, w in zip(D1_OFFSETS, D1_WEIGHTS)) / h


def fd_third(f, x, h):
    return sum(w * f(x + k * h) for k, w in zip(D3_OFFSETS, D3_WEIGHTS)) / h**3


def fd_mixed_third(F, point, indices, h):
    """Mixed third partial for three distinct coordinate indices, as a
    tensor product of 4th-order first-derivative stencils."""
    a, b, c = indices
    total = 0.0 + 0j
    for ka, wa in zip(D1_OFFSETS, D1_WEIGHTS):
        for kb, wb in zip(D1_OFFSETS, D1_WEIGHTS):
            for kc, wc in zip(D1_OFFSETS, D1_WEIGHTS):
                pt = list(point)
                pt[a] += ka * h
                pt[b] += kb * h
                pt[c] += kc * h
                total += wa * wb * wc * F(pt)
    return total / h**3
